//! Quadrature rules with a declared polynomial exactness degree.
//!
//! Gauss–Jacobi nodes and weights come from the Golub–Welsch eigenvalue
//! problem for the symmetric Jacobi matrix.

use crate::error::{Error, Result};
use crate::jacobi::{jacobi_norm_sq, JacobiFamily, JacobiParams};
use nalgebra::{DMatrix, SymmetricEigen};

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<P> {
    pub nodes: Vec<P>,
    pub weights: Vec<f64>,
    /// Highest total polynomial degree integrated exactly.
    pub exactness: usize,
}

impl<P> QuadratureRule<P> {
    pub fn integrate<F: FnMut(&P) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(x)).sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// `n`-point Gauss–Jacobi rule for `∫ f (1−t)^α (1+t)^β dt`, exact to degree `2n−1`.
pub fn gauss_jacobi(params: &JacobiParams, n: usize) -> Result<QuadratureRule<f64>> {
    if n == 0 {
        return Err(Error::DegreeTooSmall { min: 1, got: 0 });
    }
    let fam = JacobiFamily::new(*params, n);
    let (diag, off) = fam.jacobi_matrix(n);
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = diag[i];
        if i + 1 < n {
            m[(i, i + 1)] = off[i];
            m[(i + 1, i)] = off[i];
        }
    }
    let eig = SymmetricEigen::new(m);
    let mu0 = jacobi_norm_sq(params, 0);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(QuadratureRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
        exactness: 2 * n - 1,
    })
}

/// Smallest Gauss–Jacobi rule exact for degree `degree`.
pub fn gauss_jacobi_exact(params: &JacobiParams, degree: usize) -> Result<QuadratureRule<f64>> {
    gauss_jacobi(params, degree / 2 + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma;

    #[test]
    fn legendre_rule_integrates_monomials() {
        let rule = gauss_jacobi(&JacobiParams::new(0.0, 0.0).unwrap(), 6).unwrap();
        assert_eq!(rule.exactness, 11);
        for k in 0..=11 {
            let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            let q = rule.integrate(|t| t.powi(k));
            assert!((q - exact).abs() < 1e-14, "k={k}: {q} vs {exact}");
        }
    }

    #[test]
    fn jacobi_rule_integrates_beta_moments() {
        // ∫ (1+t)^k (1−t)^α (1+t)^β dt = 2^{α+β+k+1} B(α+1, β+k+1)
        let (a, b) = (-0.5, 1.5);
        let rule = gauss_jacobi(&JacobiParams::new(a, b).unwrap(), 5).unwrap();
        for k in 0..10 {
            let kf = k as f64;
            let exact = 2f64.powf(a + b + kf + 1.0) * gamma(a + 1.0) * gamma(b + kf + 1.0)
                / gamma(a + b + kf + 2.0);
            let q = rule.integrate(|t| (1.0 + t).powi(k));
            assert!((q / exact - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn zero_points_is_an_error() {
        assert!(gauss_jacobi(&JacobiParams::new(0.0, 0.0).unwrap(), 0).is_err());
    }
}
