//! Univariate non-diagonal Jacobi–Sobolev polynomials `q_j^{(α,β;M)}`.
//!
//! The inner product is
//! `(f,g)^S = ∫ f g (1−t)^α (1+t)^β dt + (f(1), f'(1)) M (g(1), g'(1))ᵗ`
//! with a symmetric positive semidefinite `M`. The polynomials carry the
//! same leading coefficient as `P_j^{(α,β)}` and are built from the Jacobi
//! kernels through `Λ_j = (I + M 𝒦_j)^{−1} M`.

use crate::error::{Error, Result};
use crate::jacobi::{
    boundary_kernel_expansion, boundary_row, connection_step_coeffs, jacobi_coeffs_shifted,
    jacobi_deriv, jacobi_eval, jacobi_norm_sq, kernel_at_one, kernel_boundary_closed_forms,
    kernel_eval, JacobiParams,
};
use nalgebra::{Matrix2, RowVector2, Vector2};
use serde::Serialize;

/// Symmetric positive semidefinite 2×2 boundary matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SobolevMatrix2 {
    pub m11: f64,
    pub m12: f64,
    pub m22: f64,
}

impl SobolevMatrix2 {
    pub fn new(m11: f64, m12: f64, m22: f64) -> Result<Self> {
        let scale = m11.abs().max(m22.abs()).max(m12.abs()).max(f64::MIN_POSITIVE);
        let det = m11 * m22 - m12 * m12;
        if !(m11 >= 0.0 && m22 >= 0.0 && det >= -1e-12 * scale * scale) {
            return Err(Error::ParameterDomain(format!(
                "boundary matrix [[{m11}, {m12}], [{m12}, {m22}]] is not positive semidefinite"
            )));
        }
        Ok(SobolevMatrix2 { m11, m12, m22 })
    }

    pub fn zero() -> Self {
        SobolevMatrix2 { m11: 0.0, m12: 0.0, m22: 0.0 }
    }

    pub fn matrix(&self) -> Matrix2<f64> {
        Matrix2::new(self.m11, self.m12, self.m12, self.m22)
    }

    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m12
    }

    fn scale(&self) -> f64 {
        self.m11.abs().max(self.m22.abs()).max(self.m12.abs())
    }

    /// Rank at most one up to round-off.
    pub fn is_rank_deficient(&self) -> bool {
        let s = self.scale();
        self.det().abs() <= 1e-12 * s * s
    }
}

/// Coefficients of `q_j = b_{j,j} P_j^{(α+2,β)} + b_{j,j−1} P_{j−1}^{(α+2,β)} + b_{j,j−2} P_{j−2}^{(α+2,β)}`,
/// with the `c` terms of that expansion exposed separately.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConnectionCoeffs {
    pub b_jj: f64,
    pub b_jjm1: f64,
    pub b_jjm2: f64,
    pub c_jm1: f64,
    pub c_jm2: f64,
}

/// `𝒦_j`: kernel values at `(1,1)` arranged as a symmetric matrix; zero for `j = −1`.
pub fn kappa_matrix(params: &JacobiParams, j: isize) -> Matrix2<f64> {
    if j < 0 {
        return Matrix2::zeros();
    }
    let (k00, k01, k11) = kernel_at_one(params, j as usize);
    Matrix2::new(k00, k01, k01, k11)
}

/// `(I + M𝒦)^{−1} M` for a general PSD `M`.
///
/// By Cayley–Hamilton this equals
/// `(M + det M · adj 𝒦) / (1 + tr(M𝒦) + det M · det 𝒦)`, which avoids the
/// cancellation a literal inverse suffers when `M` is (nearly) rank one.
pub fn lambda_general(m: &SobolevMatrix2, kappa: &Matrix2<f64>) -> Result<Matrix2<f64>> {
    let mm = m.matrix();
    let det_m = m.det();
    let adj_k = Matrix2::new(kappa[(1, 1)], -kappa[(0, 1)], -kappa[(1, 0)], kappa[(0, 0)]);
    let denom = 1.0 + (mm * kappa).trace() + det_m * kappa.determinant();
    if !(denom.abs() > 1e-300) || !denom.is_finite() {
        return Err(Error::Singular(format!("I + M K has determinant {denom}")));
    }
    Ok((mm + adj_k * det_m) / denom)
}

/// `M / Δ` with `Δ = 1 + trace(M𝒦)`, valid when `det M = 0`.
pub fn lambda_rank_one(m: &SobolevMatrix2, kappa: &Matrix2<f64>) -> Result<Matrix2<f64>> {
    let mm = m.matrix();
    let delta = 1.0 + (mm * kappa).trace();
    if delta == 0.0 {
        return Err(Error::Singular("1 + trace(M K) vanishes".into()));
    }
    Ok(mm / delta)
}

fn row(params: &JacobiParams, j: usize) -> RowVector2<f64> {
    let r = boundary_row(params, j);
    RowVector2::new(r[0], r[1])
}

/// Family `q_j^{(α,β;M)}` for `j ≤ max_degree`, caching `𝒦_j`, `Λ_j` and `h̃_j`.
#[derive(Debug, Clone)]
pub struct SobolevFamily1D {
    params: JacobiParams,
    m: SobolevMatrix2,
    /// `𝒦_{j−1}` at index `j`
    kappas: Vec<Matrix2<f64>>,
    /// `Λ_{j−1}` at index `j`
    lambdas: Vec<Matrix2<f64>>,
    tilde_norms: Vec<f64>,
}

impl SobolevFamily1D {
    pub fn new(params: JacobiParams, m: SobolevMatrix2, max_degree: usize) -> Result<Self> {
        let mut kappas = Vec::with_capacity(max_degree + 2);
        let mut lambdas = Vec::with_capacity(max_degree + 2);
        for j in -1..=(max_degree as isize) {
            let kappa = kappa_matrix(&params, j);
            let lam = lambda_general(&m, &kappa)?;
            kappas.push(kappa);
            lambdas.push(lam);
        }
        let tilde_norms = (0..=max_degree)
            .map(|j| {
                let p = row(&params, j);
                jacobi_norm_sq(&params, j) + (p * lambdas[j] * p.transpose())[(0, 0)]
            })
            .collect();
        Ok(SobolevFamily1D { params, m, kappas, lambdas, tilde_norms })
    }

    pub fn params(&self) -> &JacobiParams {
        &self.params
    }

    pub fn matrix(&self) -> &SobolevMatrix2 {
        &self.m
    }

    pub fn max_degree(&self) -> usize {
        self.tilde_norms.len() - 1
    }

    fn check(&self, j: isize) {
        assert!(j >= -1 && j <= self.max_degree() as isize, "index {j} outside cached range");
    }

    /// `𝒦_j`, `j ≥ −1`.
    pub fn kappa_matrix(&self, j: isize) -> Matrix2<f64> {
        self.check(j);
        self.kappas[(j + 1) as usize]
    }

    /// `Λ_j`, `j ≥ −1`, from the general inverse.
    pub fn lambda_matrix(&self, j: isize) -> Matrix2<f64> {
        self.check(j);
        self.lambdas[(j + 1) as usize]
    }

    /// `Λ_j` from the rank-one shortcut; `None` if `det M ≠ 0`.
    pub fn lambda_matrix_rank_one(&self, j: isize) -> Option<Matrix2<f64>> {
        self.check(j);
        if !self.m.is_rank_deficient() {
            return None;
        }
        lambda_rank_one(&self.m, &self.kappas[(j + 1) as usize]).ok()
    }

    /// `q_j(t) = P_j(t) − 𝐏_j(1) Λ_{j−1} 𝐊_{j−1}(t,1)`.
    pub fn eval(&self, j: usize, t: f64) -> f64 {
        let p = jacobi_eval(&self.params, j, t);
        if j == 0 {
            return p;
        }
        let (k, k01) = kernel_boundary_closed_forms(&self.params, j - 1, t);
        let w = row(&self.params, j) * self.lambda_matrix(j as isize - 1);
        p - (w * Vector2::new(k, k01))[(0, 0)]
    }

    /// Coefficients of the `(α+2, β)` connection of `q_j`.
    ///
    /// The correction terms are assembled from `Λ_{j−1}` and the
    /// `(α+2,β)` expansion of the kernel column `𝐊_{j−1}(t,1)`.
    pub fn connection_coeffs(&self, j: usize) -> ConnectionCoeffs {
        let (a, b) = (self.params.alpha(), self.params.beta());
        let jf = j as f64;
        if j == 0 {
            return ConnectionCoeffs { b_jj: 1.0, b_jjm1: 0.0, b_jjm2: 0.0, c_jm1: 0.0, c_jm2: 0.0 };
        }
        // two applications of the (α,β) → (α+1,β) step
        let (c0, c1) = connection_step_coeffs(&self.params, j).expect("j >= 1");
        let up = self.params.shifted(1.0, 0.0);
        let (e0, e1) = connection_step_coeffs(&up, j).expect("j >= 1");
        let (f0, f1) = if j >= 2 { connection_step_coeffs(&up, j - 1).expect("j >= 2") } else { (1.0, 0.0) };
        let g_j = c0 * e0;
        let g_jm1 = -c0 * e1 - c1 * f0;
        let g_jm2 = c1 * f1;

        let w = row(&self.params, j) * self.lambda_matrix(j as isize - 1);
        let ex = boundary_kernel_expansion(&self.params, j - 1);
        let corr_jm1 = w[0] * ex[0][0] + w[1] * ex[0][1];
        let corr_jm2 = if j >= 2 { w[0] * ex[1][0] + w[1] * ex[1][1] } else { 0.0 };

        let s = 2.0 * jf + a + b;
        let c_jm1 = corr_jm1 * s / (jf + a + b + 1.0);
        let c_jm2 = if j >= 2 { -corr_jm2 * s / (jf + b - 1.0) } else { 0.0 };
        ConnectionCoeffs {
            b_jj: g_j,
            b_jjm1: g_jm1 - corr_jm1,
            b_jjm2: g_jm2 - corr_jm2,
            c_jm1,
            c_jm2,
        }
    }

    /// `q_j(t)` through the three-term `(α+2, β)` connection.
    pub fn eval_connection(&self, j: usize, t: f64) -> f64 {
        let c = self.connection_coeffs(j);
        let p2 = self.params.shifted(2.0, 0.0);
        let mut v = c.b_jj * jacobi_eval(&p2, j, t);
        if j >= 1 {
            v += c.b_jjm1 * jacobi_eval(&p2, j - 1, t);
        }
        if j >= 2 {
            v += c.b_jjm2 * jacobi_eval(&p2, j - 2, t);
        }
        v
    }

    /// `q_j'(t)` from the connection expansion.
    pub fn deriv(&self, j: usize, t: f64) -> f64 {
        let c = self.connection_coeffs(j);
        let p2 = self.params.shifted(2.0, 0.0);
        let mut v = c.b_jj * jacobi_deriv(&p2, j, t);
        if j >= 1 {
            v += c.b_jjm1 * jacobi_deriv(&p2, j - 1, t);
        }
        if j >= 2 {
            v += c.b_jjm2 * jacobi_deriv(&p2, j - 2, t);
        }
        v
    }

    /// Monomial coefficients of `s ↦ q_j(2s − 1)`, lowest degree first.
    pub fn coeffs_shifted(&self, j: usize) -> Vec<f64> {
        let c = self.connection_coeffs(j);
        let p2 = self.params.shifted(2.0, 0.0);
        let mut out = vec![0.0; j + 1];
        let terms = [(j as isize, c.b_jj), (j as isize - 1, c.b_jjm1), (j as isize - 2, c.b_jjm2)];
        for (deg, coef) in terms {
            if deg < 0 || coef == 0.0 {
                continue;
            }
            for (i, v) in jacobi_coeffs_shifted(&p2, deg as usize).into_iter().enumerate() {
                out[i] += coef * v;
            }
        }
        out
    }

    /// `h̃_j = h_j + 𝐏_j(1) Λ_{j−1} 𝐏_j(1)ᵗ`.
    pub fn norm_sq(&self, j: usize) -> f64 {
        self.tilde_norms[j]
    }

    /// `h̃_j` recomputed from `1/h̃_j = 1/h_j − h_j^{−2} 𝐏_j(1) Λ_j 𝐏_j(1)ᵗ`.
    pub fn norm_sq_from_inverse(&self, j: usize) -> f64 {
        let h = jacobi_norm_sq(&self.params, j);
        let p = row(&self.params, j);
        let q = (p * self.lambda_matrix(j as isize) * p.transpose())[(0, 0)];
        1.0 / (1.0 / h - q / (h * h))
    }

    /// Kernel column `𝐊_n(t,1) = (K_n(t,1), K_n^{(0,1)}(t,1))ᵗ`.
    pub fn kernel_column(&self, n: usize, t: f64) -> Vector2<f64> {
        let (k, k01) = kernel_boundary_closed_forms(&self.params, n, t);
        Vector2::new(k, k01)
    }

    /// `K̃_n(t,u) = K_n(t,u) − 𝐊_n(t,1)ᵗ Λ_n 𝐊_n(u,1)`.
    ///
    /// Near `t = u = 1` both terms are far larger than their difference, so
    /// for `n ≥ 1` the equivalent form `K − cₜᵗ𝐊_n(u,1) + cₜᵗ W c_u` is used, with
    /// `𝒦 = 𝐊_n(1,1)`, `𝐊_n(t,1) = 𝒦 cₜ` and `W = 𝒦 − 𝒦Λ_n𝒦 = 𝒦(I + M𝒦)⁻¹`;
    /// at the corner it reduces to `W₁₁` exactly.
    pub fn kernel(&self, n: usize, t: f64, u: f64) -> f64 {
        let base = kernel_eval(&self.params, n, t, u).k00;
        let kt = self.kernel_column(n, t);
        let ku = self.kernel_column(n, u);
        let sandwich = || base - (kt.transpose() * self.lambda_matrix(n as isize) * ku)[(0, 0)];
        if n == 0 {
            return sandwich();
        }
        let corner = self.kappa_matrix(n as isize);
        // symmetric equilibration keeps the solve accurate although 𝒦₂₂ ≫ 𝒦₁₁
        let scale = Matrix2::from_diagonal(&Vector2::new(corner[(0, 0)].sqrt().recip(), corner[(1, 1)].sqrt().recip()));
        let lu = (scale * corner * scale).lu();
        let coeffs = |x: f64, col: &Vector2<f64>| {
            if x == 1.0 {
                Some(Vector2::new(1.0, 0.0))
            } else {
                lu.solve(&(scale * col)).map(|c| scale * c)
            }
        };
        let w = (Matrix2::identity() + self.m.matrix() * corner).try_inverse().map(|inv| corner * inv);
        match (coeffs(t, &kt), coeffs(u, &ku), w) {
            (Some(ct), Some(cu), Some(w)) => {
                // on the boundary K_n(1,u) is the first entry of the column, so the
                // first two terms cancel exactly
                let head = if t == 1.0 || u == 1.0 { 0.0 } else { base - ct.dot(&ku) };
                head + (ct.transpose() * w * cu)[(0, 0)]
            }
            _ => sandwich(),
        }
    }

    /// `Σ_{j≤n} q_j(t) q_j(u) / h̃_j`.
    pub fn kernel_direct(&self, n: usize, t: f64, u: f64) -> f64 {
        (0..=n).map(|j| self.eval(j, t) * self.eval(j, u) / self.norm_sq(j)).sum()
    }

    /// Per-degree summand `q_j(t) q_j(u)/h̃_j` from the kernel decomposition
    /// `P_j(t)P_j(u)/h_j − 𝐊_jᵗ Λ_j 𝐊_j + 𝐊_{j−1}ᵗ Λ_{j−1} 𝐊_{j−1}`.
    pub fn kernel_summand(&self, j: usize, t: f64, u: f64) -> f64 {
        let base = jacobi_eval(&self.params, j, t) * jacobi_eval(&self.params, j, u)
            / jacobi_norm_sq(&self.params, j);
        let sandwich = |n: usize| {
            let kt = self.kernel_column(n, t);
            let ku = self.kernel_column(n, u);
            (kt.transpose() * self.lambda_matrix(n as isize) * ku)[(0, 0)]
        };
        let prev = if j >= 1 { sandwich(j - 1) } else { 0.0 };
        base - sandwich(j) + prev
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::jacobi_leading_coeff;
    use approx::assert_relative_eq;

    fn family(a: f64, b: f64, m: (f64, f64, f64), n: usize) -> SobolevFamily1D {
        let m = SobolevMatrix2::new(m.0, m.1, m.2).unwrap();
        SobolevFamily1D::new(JacobiParams::new(a, b).unwrap(), m, n).unwrap()
    }

    #[test]
    fn rejects_indefinite_matrix() {
        assert!(SobolevMatrix2::new(1.0, 2.0, 1.0).is_err());
        assert!(SobolevMatrix2::new(-1.0, 0.0, 1.0).is_err());
        // rank one with round-off noise is admitted
        let k = 3.0f64;
        assert!(SobolevMatrix2::new(k * k, 4.0 * k * (1.0 + 1e-15), 16.0).is_ok());
    }

    #[test]
    fn kappa_examples() {
        let p = JacobiParams::new(0.0, 0.0).unwrap();
        assert_eq!(kappa_matrix(&p, -1), Matrix2::zeros());
        assert_eq!(kappa_matrix(&p, 0), Matrix2::new(0.5, 0.0, 0.0, 0.0));
        let k1 = kappa_matrix(&p, 1);
        let s = kernel_eval(&p, 1, 1.0, 1.0);
        assert_relative_eq!(k1[(0, 0)], 2.0, max_relative = 1e-14);
        assert_relative_eq!(k1[(0, 1)], s.k01, max_relative = 1e-12);
        assert_relative_eq!(k1[(1, 1)], s.k11, max_relative = 1e-12);
    }

    #[test]
    fn zero_matrix_gives_jacobi() {
        let f = family(0.5, 1.5, (0.0, 0.0, 0.0), 8);
        for j in 0..=8 {
            assert_eq!(f.lambda_matrix(j as isize), Matrix2::zeros());
            assert_relative_eq!(f.norm_sq(j), jacobi_norm_sq(f.params(), j));
            for &t in &[-0.9, 0.0, 0.7] {
                assert_relative_eq!(f.eval(j, t), jacobi_eval(f.params(), j, t), max_relative = 1e-14);
            }
        }
    }

    #[test]
    fn rank_one_path_matches_general_inverse() {
        let k = 3.0f64;
        let f = family(0.0, 3.5, (k * k, 4.0 * k, 16.0), 10);
        for j in -1..=10 {
            let g = f.lambda_matrix(j);
            let r = f.lambda_matrix_rank_one(j).unwrap();
            assert!((g - r).norm() <= 1e-12 * g.norm(), "j={j}: {}", (g - r).norm() / g.norm());
        }
        let full = family(0.0, 0.0, (2.0, 0.5, 1.0), 2);
        assert!(full.lambda_matrix_rank_one(0).is_none());
    }

    #[test]
    fn lambda_matches_literal_inverse() {
        let p = JacobiParams::new(0.5, 1.0).unwrap();
        let m = SobolevMatrix2::new(2.0, 0.7, 1.1).unwrap();
        for j in 0..5 {
            let kappa = kappa_matrix(&p, j);
            let lit = (Matrix2::identity() + m.matrix() * kappa).try_inverse().unwrap() * m.matrix();
            let got = lambda_general(&m, &kappa).unwrap();
            assert!((lit - got).norm() <= 1e-13 * lit.norm());
        }
    }

    #[test]
    fn q0_is_one_and_norm_zero() {
        let f = family(0.3, 0.2, (1.7, 0.3, 0.9), 3);
        assert_eq!(f.eval(0, 0.4), 1.0);
        assert_relative_eq!(f.norm_sq(0), jacobi_norm_sq(f.params(), 0) + 1.7, max_relative = 1e-14);
    }

    #[test]
    fn leading_coefficient_is_jacobi() {
        let f = family(0.3, 1.2, (1.0, 0.2, 0.5), 7);
        for j in 0..=7 {
            let c = f.coeffs_shifted(j);
            // leading coefficient in s = (1+t)/2 equals k_j 2^j
            assert_relative_eq!(
                c[j],
                jacobi_leading_coeff(f.params(), j) * 2f64.powi(j as i32),
                max_relative = 1e-11
            );
        }
    }

    #[test]
    fn connection_reduces_to_double_step_without_boundary() {
        let f = family(0.4, 2.0, (0.0, 0.0, 0.0), 6);
        let (a, b) = (0.4, 2.0);
        for j in 2..=6 {
            let c = f.connection_coeffs(j);
            let jf = j as f64;
            assert_relative_eq!(
                c.b_jj,
                (jf + a + b + 1.0) * (jf + a + b + 2.0) / ((2.0 * jf + a + b + 1.0) * (2.0 * jf + a + b + 2.0)),
                max_relative = 1e-14
            );
            assert_relative_eq!(
                c.b_jjm1,
                -2.0 * (jf + a + b + 1.0) * (jf + b) / ((2.0 * jf + a + b + 2.0) * (2.0 * jf + a + b)),
                max_relative = 1e-14
            );
            assert_relative_eq!(
                c.b_jjm2,
                (jf + b) * (jf + b - 1.0) / ((2.0 * jf + a + b + 1.0) * (2.0 * jf + a + b)),
                max_relative = 1e-14
            );
            assert_eq!((c.c_jm1, c.c_jm2), (0.0, 0.0));
        }
    }

    #[test]
    fn b_jj_is_leading_coefficient_ratio() {
        let f = family(1.1, 0.6, (0.5, 0.1, 0.3), 6);
        let p2 = f.params().shifted(2.0, 0.0);
        for j in 0..=6 {
            assert_relative_eq!(
                f.connection_coeffs(j).b_jj,
                jacobi_leading_coeff(f.params(), j) / jacobi_leading_coeff(&p2, j),
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn inverse_norm_form_and_kernel_paths_agree() {
        let f = family(0.0, 2.0, (1.3, 0.4, 0.7), 8);
        for j in 0..=8 {
            assert_relative_eq!(f.norm_sq(j), f.norm_sq_from_inverse(j), max_relative = 1e-11);
            assert!(f.norm_sq(j) >= jacobi_norm_sq(f.params(), j));
        }
        assert_relative_eq!(
            f.kernel(0, 0.2, 0.5),
            1.0 / (jacobi_norm_sq(f.params(), 0) + 1.3),
            max_relative = 1e-13
        );
        for n in 0..=8 {
            let a = f.kernel(n, 0.31, -0.44);
            let b = f.kernel_direct(n, 0.31, -0.44);
            assert!((a - b).abs() <= 1e-10 * a.abs().max(b.abs()).max(1.0), "n={n}: {a} vs {b}");
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let f = family(0.5, 0.5, (1.0, 0.3, 0.2), 6);
        let h = 1e-6;
        for j in 1..=6 {
            let fd = (f.eval(j, 0.3 + h) - f.eval(j, 0.3 - h)) / (2.0 * h);
            assert!((f.deriv(j, 0.3) - fd).abs() <= 1e-5 * fd.abs().max(1.0));
        }
    }
}
