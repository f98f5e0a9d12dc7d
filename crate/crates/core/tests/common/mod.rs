//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use sobolev_ball::jacobi::JacobiParams;
use sobolev_ball::special::ln_gamma;

/// `∫_{-1}^{1} t^k (1−t)^α (1+t)^β dt` from the integration-by-parts recurrence
/// `(k+α+β+2) M_{k+1} = (β−α) M_k + k M_{k−1}`, started at the Beta integral.
pub fn jacobi_moment(p: &JacobiParams, k: usize) -> f64 {
    let (a, b) = (p.alpha(), p.beta());
    let m0 = (2f64.ln() * (a + b + 1.0) + ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(a + b + 2.0)).exp();
    let mut prev = 0.0;
    let mut cur = m0;
    for i in 0..k {
        let fi = i as f64;
        let next = ((b - a) * cur + fi * prev) / (fi + a + b + 2.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Monomial-basis polynomial in `t`, lowest degree first.
pub fn poly_eval(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &x| acc * t + x)
}

pub fn poly_deriv_eval(c: &[f64], t: f64) -> f64 {
    c.iter().enumerate().skip(1).rev().fold(0.0, |acc, (i, &x)| acc * t + i as f64 * x)
}

/// Gram matrix `(t^a, t^b)^S` for `a, b ≤ n` with exact moments and boundary term.
pub fn sobolev_monomial_gram(p: &JacobiParams, m: [f64; 3], n: usize) -> Vec<Vec<f64>> {
    let [m11, m12, m22] = m;
    (0..=n)
        .map(|a| {
            (0..=n)
                .map(|b| {
                    let (fa, da) = (1.0, a as f64);
                    let (fb, db) = (1.0, b as f64);
                    jacobi_moment(p, a + b) + fa * (m11 * fb + m12 * db) + da * (m12 * fb + m22 * db)
                })
                .collect()
        })
        .collect()
}

/// Monic-then-rescaled Gram–Schmidt polynomial of degree `j` in monomial coefficients.
pub fn gram_schmidt_poly(gram: &[Vec<f64>], j: usize, leading: f64) -> Vec<f64> {
    use nalgebra::{DMatrix, DVector};
    let mut c = vec![0.0; j + 1];
    c[j] = 1.0;
    if j > 0 {
        let a = DMatrix::from_fn(j, j, |r, s| gram[r][s]);
        let rhs = DVector::from_fn(j, |r, _| -gram[r][j]);
        let sol = a.lu().solve(&rhs).expect("Gram matrix is positive definite");
        c[..j].copy_from_slice(sol.as_slice());
    }
    c.iter().map(|x| x * leading).collect()
}

/// Deterministic random PSD matrix `L Lᵗ` with entries of order one.
pub fn random_psd(rng: &mut impl rand::Rng) -> [f64; 3] {
    let l11: f64 = rng.gen_range(0.0..2.0);
    let l21: f64 = rng.gen_range(-1.0..1.0);
    let l22: f64 = rng.gen_range(0.0..1.5);
    [l11 * l11, l11 * l21, l21 * l21 + l22 * l22]
}
