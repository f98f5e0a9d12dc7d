use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sobolev_ball::ball::*;
use sobolev_ball::kernels::*;
use sobolev_ball::poly::MultivariatePolynomial;

fn random_ball_point(rng: &mut impl Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if v.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
            return v;
        }
    }
}

fn random_sphere_point(rng: &mut impl Rng, d: usize) -> Vec<f64> {
    let v = random_ball_point(rng, d);
    let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / r).collect()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn decomposed_sobolev_kernel_matches_direct_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for &(d, mu, lambda) in &[(3, 0.0, 1.0), (2, 1.0, 0.5), (3, -0.5, 2.0), (2, 0.0, 1.0), (3, 1.0, 0.5)] {
        let cfg = BallConfig::new(d, mu, lambda).unwrap();
        let basis = SobolevBall::new(cfg, 5).unwrap();
        for n in 0..=5 {
            for i in 0..20 {
                // include boundary points in the cloud
                let x = if i % 4 == 0 { random_sphere_point(&mut rng, d) } else { random_ball_point(&mut rng, d) };
                let y = random_ball_point(&mut rng, d);
                let pair = KernelPointPair::new(&x, &y).unwrap();
                let direct = sobolev_kernel_direct(&basis, n, &pair).unwrap();
                let dec = sobolev_kernel_decomposed(&cfg, n, &pair).unwrap();
                let scale = sobolev_kernel_direct(&basis, n, &KernelPointPair::diagonal(&x).unwrap()).unwrap();
                assert!((direct - dec).abs() <= 1e-9 * scale, "d={d} μ={mu} n={n}: {direct} vs {dec}");
            }
        }
    }
}

#[test]
fn classical_kernel_paths_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    for &(d, mu) in &[(3, 0.0), (2, 0.5), (3, 1.5)] {
        let cfg = BallConfig::new(d, mu, 1.0).unwrap();
        for n in 0..=5 {
            for _ in 0..10 {
                let pair = KernelPointPair::new(&random_ball_point(&mut rng, d), &random_ball_point(&mut rng, d)).unwrap();
                let a = classical_kernel(&cfg, n, &pair).unwrap();
                let b = classical_kernel_direct(&cfg, n, &pair).unwrap();
                assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0), "{a} vs {b}");
            }
        }
    }
}

#[test]
fn psi_identity_on_diagonal() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for &(d, mu, lambda) in &[(3, 0.0, 1.0), (2, 1.0, 0.5), (2, 0.0, 2.0), (3, 0.5, 0.5)] {
        let cfg = BallConfig::new(d, mu, lambda).unwrap();
        let basis = SobolevBall::new(cfg, 5).unwrap();
        for n in 0..=5 {
            for i in 0..20 {
                let x = match i {
                    0 => vec![0.0; d],
                    1..=5 => random_sphere_point(&mut rng, d),
                    _ => random_ball_point(&mut rng, d),
                };
                let pair = KernelPointPair::diagonal(&x).unwrap();
                let classical = classical_kernel(&cfg, n, &pair).unwrap();
                let sob = sobolev_kernel_direct(&basis, n, &pair).unwrap();
                let psi = psi_correction(&cfg, n, &x).unwrap();
                assert!(rel(classical - psi.total, sob) <= 1e-9, "d={d} n={n} x={x:?}: {} vs {sob}", classical - psi.total);
                assert!(psi.total >= 0.0);
                if n >= 1 && (1..=5).contains(&i) {
                    assert!(psi.total > 0.0);
                }
            }
        }
    }
}

#[test]
fn psi_at_origin_is_k_zero_term() {
    let cfg = BallConfig::new(3, 0.0, 1.0).unwrap();
    for n in 1..=12 {
        let c = psi_correction(&cfg, n, &[0.0; 3]).unwrap();
        assert_eq!(c.summands.iter().skip(1).filter(|v| **v != 0.0).count(), 0);
        // Ψ_n(0) = A₀² F_{0,[n/2]}(−1)/λ with Z_0 = 1
        let want = cfg.a0().powi(2) / cfg.lambda() * c.ln_f[0].exp();
        assert!(rel(c.total, want) < 1e-14);
    }
}

#[test]
fn kernels_reproduce_polynomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for d in [2, 3] {
        let cfg = BallConfig::new(d, 0.5, 1.0).unwrap();
        let basis = SobolevBall::new(cfg, 4).unwrap();
        let n = 4;
        let x = random_ball_point(&mut rng, d);
        let idx = ball_indices_up_to(d, n);
        // L̃_n(x,·) and 𝕃_n(x,·) as polynomials
        let mut sob = MultivariatePolynomial::zero(d);
        let mut cls = MultivariatePolynomial::zero(d);
        for &i in &idx {
            sob = sob.add_scaled(&basis.polynomial(i).unwrap(), basis.poly(i, &x).unwrap() / basis.norm(i).unwrap());
            cls = cls.add_scaled(
                &classical_ball_polynomial(&cfg, i, 0.0).unwrap(),
                classical_ball_poly(&cfg, i, 0.0, &x).unwrap() / classical_ball_norm(&cfg, i, 0.0).unwrap(),
            );
        }
        for &i in &idx {
            let q = basis.polynomial(i).unwrap();
            let v = sobolev_inner_product(&cfg, &sob, &q);
            assert!((v - q.eval(&x)).abs() < 1e-10 * q.eval(&x).abs().max(1.0));
            let p = classical_ball_polynomial(&cfg, i, 0.0).unwrap();
            let w = ball_integral_quadrature(d, cfg.mu(), 2 * n, |y| cls.eval(y) * p.eval(y)).unwrap();
            assert!((w - p.eval(&x)).abs() < 1e-10 * p.eval(&x).abs().max(1.0));
        }
    }
}

#[test]
fn sobolev_kernel_symmetry() {
    let cfg = BallConfig::new(3, 0.0, 1.0).unwrap();
    let basis = SobolevBall::new(cfg, 4).unwrap();
    let ab = KernelPointPair::new(&[0.1, -0.4, 0.3], &[0.5, 0.5, 0.1]).unwrap();
    let ba = KernelPointPair::new(&[0.5, 0.5, 0.1], &[0.1, -0.4, 0.3]).unwrap();
    for n in 0..=4 {
        assert!(rel(sobolev_kernel_direct(&basis, n, &ab).unwrap(), sobolev_kernel_direct(&basis, n, &ba).unwrap()) < 1e-13);
        assert!(rel(sobolev_kernel_decomposed(&cfg, n, &ab).unwrap(), sobolev_kernel_decomposed(&cfg, n, &ba).unwrap()) < 1e-13);
    }
}

#[test]
fn christoffel_ordering_and_monotonicity() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for d in [2, 3, 4] {
        let cfg = BallConfig::new(d, 0.5, 1.0).unwrap();
        for _ in 0..10 {
            let x = random_ball_point(&mut rng, d);
            let mut prev = f64::INFINITY;
            for n in 0..=12 {
                let c = christoffel(&cfg, n, &x, KernelVariant::Classical).unwrap();
                let s = christoffel(&cfg, n, &x, KernelVariant::Sobolev).unwrap();
                assert!(s >= c * (1.0 - 1e-12));
                assert!(c <= prev * (1.0 + 1e-12));
                prev = c;
            }
        }
    }
}

#[test]
fn deltas_bounded_below() {
    for &(d, mu, lambda) in &[(2, 0.0, 1.0), (3, -0.5, 0.5), (5, 2.0, 3.0)] {
        let cfg = BallConfig::new(d, mu, lambda).unwrap();
        for n in [10usize, 57, 200] {
            let c = psi_correction(&cfg, n, &[1.0].iter().chain(std::iter::repeat_n(&0.0, d - 1)).copied().collect::<Vec<_>>()).unwrap();
            assert!(c.deltas.iter().all(|&v| v >= 1.0 && v.is_finite()));
            assert!(c.total.is_finite() && c.total > 0.0);
            assert!(c.ln_f.iter().skip(1).all(|v| v.is_finite()));
        }
    }
}

#[test]
fn small_lambda_decomposed_tends_to_classical() {
    for d in [2, 3] {
        let cfg = BallConfig::new(d, 0.0, 1e-8).unwrap();
        let basis = SobolevBall::new(cfg, 3).unwrap();
        let (x, y) = (vec![0.3; d], vec![-0.2; d]);
        let pair = KernelPointPair::new(&x, &y).unwrap();
        for n in 0..=3 {
            let c = classical_kernel(&cfg, n, &pair).unwrap();
            // off-diagonal values can sit near zero; measure against the diagonal scale
            let scale = (classical_kernel(&cfg, n, &KernelPointPair::diagonal(&x).unwrap()).unwrap()
                * classical_kernel(&cfg, n, &KernelPointPair::diagonal(&y).unwrap()).unwrap())
            .sqrt();
            let s = sobolev_kernel_decomposed(&cfg, n, &pair).unwrap();
            let s2 = sobolev_kernel_direct(&basis, n, &pair).unwrap();
            assert!((s - c).abs() < 1e-5 * scale && (s2 - c).abs() < 1e-5 * scale, "{s} {s2} {c}");
        }
    }
}

#[test]
fn boundary_diagonal_is_rotation_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let cfg = BallConfig::new(3, 0.0, 1.0).unwrap();
    let base = psi_correction(&cfg, 64, &[0.0, 0.0, 1.0]).unwrap().total;
    for _ in 0..5 {
        let xi = random_sphere_point(&mut rng, 3);
        let v = psi_correction(&cfg, 64, &xi).unwrap().total;
        assert!(rel(v, base) < 1e-12);
    }
}
