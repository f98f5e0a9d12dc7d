use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sobolev_ball::sphere::{addition_formula, sphere_monomial_integral, sphere_quadrature, HarmonicBasis};

fn random_unit(rng: &mut impl Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.1 && n <= 1.0 {
            return v.iter().map(|x| x / n).collect();
        }
    }
}

#[test]
fn orthonormal_gram_matrices() {
    for d in [2, 3] {
        for k in 0..=6 {
            for l in 0..=6 {
                let bk = HarmonicBasis::new(d, k).unwrap();
                let bl = HarmonicBasis::new(d, l).unwrap();
                let rule = sphere_quadrature(d, k + l).unwrap();
                for a in 1..=bk.dim() {
                    for b in 1..=bl.dim() {
                        let g = rule.integrate(|x| bk.eval(a, x).unwrap() * bl.eval(b, x).unwrap());
                        let want = if k == l && a == b { 1.0 } else { 0.0 };
                        assert!((g - want).abs() < 1e-11, "d={d} ({k},{a}) ({l},{b}): {g}");
                    }
                }
            }
        }
    }
}

#[test]
fn addition_formula_matches_basis_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for d in [2, 3] {
        for _ in 0..10 {
            let xi = random_unit(&mut rng, d);
            let rho = random_unit(&mut rng, d);
            for k in 0..=6 {
                let b = HarmonicBasis::new(d, k).unwrap();
                let sum: f64 = (1..=b.dim()).map(|nu| b.eval(nu, &xi).unwrap() * b.eval(nu, &rho).unwrap()).sum();
                let af = addition_formula(d, k, &xi, &rho).unwrap();
                assert!((sum - af).abs() < 1e-11 * af.abs().max(1.0), "d={d} k={k}: {sum} vs {af}");
            }
        }
    }
}

#[test]
fn euler_relation_and_polynomial_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for d in [2, 3] {
        let xi = random_unit(&mut rng, d);
        for k in 0..=6 {
            let b = HarmonicBasis::new(d, k).unwrap();
            for nu in 1..=b.dim() {
                let at = |r: f64| {
                    let x: Vec<f64> = xi.iter().map(|v| r * v).collect();
                    b.eval_homogeneous(nu, &x).unwrap()
                };
                let h = 1e-6;
                let fd = (at(1.0 + h) - at(1.0 - h)) / (2.0 * h);
                assert!((fd - k as f64 * at(1.0)).abs() < 1e-6);
                let p = b.polynomial(nu).unwrap();
                let x: Vec<f64> = xi.iter().map(|v| 0.7 * v).collect();
                assert!((p.eval(&x) - b.eval_homogeneous(nu, &x).unwrap()).abs() < 1e-13);
                // harmonic: Σ ∂²/∂x_i² = 0
                let lap = (0..d).fold(sobolev_ball::poly::MultivariatePolynomial::zero(d), |acc, i| {
                    acc.add(&p.partial(i).partial(i))
                });
                assert!(lap.terms().all(|(_, c)| c.abs() < 1e-10), "d={d} k={k} ν={nu}");
                assert!(k == 0 || p.terms().all(|(e, _)| e.iter().sum::<u32>() == k as u32));
            }
        }
    }
}

#[test]
fn quadrature_integrates_monomials_exactly() {
    for d in [2usize, 3] {
        for deg in [4usize, 7, 10] {
            let rule = sphere_quadrature(d, deg).unwrap();
            let mut exps = vec![vec![]];
            for _ in 0..d {
                exps = exps
                    .into_iter()
                    .flat_map(|e: Vec<u32>| (0..=deg as u32).map(move |v| [e.clone(), vec![v]].concat()))
                    .collect();
            }
            for kappa in exps.into_iter().filter(|e| e.iter().sum::<u32>() as usize <= deg) {
                let q = rule.integrate(|x| x.iter().zip(&kappa).map(|(v, &e)| v.powi(e as i32)).product());
                let exact = sphere_monomial_integral(d, &kappa);
                assert!((q - exact).abs() < 1e-13, "d={d} κ={kappa:?}: {q} vs {exact}");
            }
        }
    }
}
