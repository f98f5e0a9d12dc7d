//! Classical Jacobi polynomials `P_n^{(α,β)}` normalized by `P_n(1) = C(n+α, n)`,
//! their norms, derivatives, connection relation and Christoffel–Darboux
//! kernels `K_n(t,u) = Σ_{k≤n} P_k(t) P_k(u) / h_k` with the closed forms at `u = 1`.

use crate::error::{Error, Result};
use crate::special::{binom, ln_gamma, Scaled};
use serde::Serialize;

/// Parameters of the weight `(1−t)^α (1+t)^β` on `[−1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JacobiParams {
    alpha: f64,
    beta: f64,
}

impl JacobiParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > -1.0) || !(beta > -1.0) || !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::ParameterDomain(format!(
                "Jacobi parameters need alpha > -1 and beta > -1, got ({alpha}, {beta})"
            )));
        }
        Ok(JacobiParams { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `(α + da, β + db)`; shifts are nonnegative in every caller so validity is kept.
    pub fn shifted(&self, da: f64, db: f64) -> Self {
        debug_assert!(da >= 0.0 && db >= 0.0);
        JacobiParams { alpha: self.alpha + da, beta: self.beta + db }
    }

    /// Weight `(1−t)^α (1+t)^β`.
    pub fn weight(&self, t: f64) -> f64 {
        (1.0 - t).powf(self.alpha) * (1.0 + t).powf(self.beta)
    }
}

/// Coefficients `(A, B, C)` of `P_n = (A t + B) P_{n−1} − C P_{n−2}`, valid for `n ≥ 2`.
#[inline]
fn raw_step(p: &JacobiParams, n: usize) -> (f64, f64, f64) {
    let (a, b) = (p.alpha, p.beta);
    let n = n as f64;
    let s = 2.0 * n + a + b;
    let denom = 2.0 * n * (n + a + b) * (s - 2.0);
    let big_a = (s - 1.0) * s * (s - 2.0) / denom;
    let big_b = (s - 1.0) * (a * a - b * b) / denom;
    let big_c = 2.0 * (n + a - 1.0) * (n + b - 1.0) * s / denom;
    (big_a, big_b, big_c)
}

#[inline]
fn degree_one(p: &JacobiParams, t: f64) -> f64 {
    (p.alpha + 1.0) + 0.5 * (p.alpha + p.beta + 2.0) * (t - 1.0)
}

/// `P_n^{(α,β)}(t)` by the three-term recurrence.
pub fn jacobi_eval(p: &JacobiParams, n: usize, t: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = degree_one(p, t);
    for k in 2..=n {
        let (ca, cb, cc) = raw_step(p, k);
        let next = (ca * t + cb) * cur - cc * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `P_0(t), …, P_n(t)`.
pub fn jacobi_eval_all(p: &JacobiParams, n: usize, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n == 0 {
        return out;
    }
    out.push(degree_one(p, t));
    for k in 2..=n {
        let (ca, cb, cc) = raw_step(p, k);
        let v = (ca * t + cb) * out[k - 1] - cc * out[k - 2];
        out.push(v);
    }
    out
}

/// Monomial coefficients of `s ↦ P_n^{(α,β)}(2s − 1)`, lowest degree first.
pub fn jacobi_coeffs_shifted(p: &JacobiParams, n: usize) -> Vec<f64> {
    let mut prev = vec![1.0];
    if n == 0 {
        return prev;
    }
    let ab2 = p.alpha + p.beta + 2.0;
    let mut cur = vec![p.alpha + 1.0 - ab2, ab2];
    for k in 2..=n {
        let (ca, cb, cc) = raw_step(p, k);
        // (A(2s − 1) + B) cur − C prev
        let mut next = vec![0.0; k + 1];
        for (i, &c) in cur.iter().enumerate() {
            next[i] += (cb - ca) * c;
            next[i + 1] += 2.0 * ca * c;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] -= cc * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// `P_n^{(α,β)}(t)` for parameters large enough that the value leaves the `f64` range.
pub fn jacobi_eval_scaled(p: &JacobiParams, n: usize, t: f64) -> Scaled {
    if n == 0 {
        return Scaled::from_f64(1.0);
    }
    let mut prev = 1.0;
    let mut cur = degree_one(p, t);
    let mut ln = 0.0;
    for k in 2..=n {
        let (ca, cb, cc) = raw_step(p, k);
        let next = (ca * t + cb) * cur - cc * prev;
        prev = cur;
        cur = next;
        let a = cur.abs().max(prev.abs());
        if a > 1e100 || (a < 1e-100 && a > 0.0) {
            prev /= a;
            cur /= a;
            ln += a.ln();
        }
    }
    Scaled::new(cur, ln)
}

/// `ln h_n^{(α,β)}` where `h_n = ∫ P_n² w`.
pub fn ln_norm_sq(p: &JacobiParams, n: usize) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    let nf = n as f64;
    let head = (a + b + 1.0) * std::f64::consts::LN_2 + ln_gamma(nf + a + 1.0) + ln_gamma(nf + b + 1.0)
        - ln_gamma(nf + 1.0);
    if n == 0 {
        // (2n+α+β+1) Γ(n+α+β+1) = Γ(α+β+2) at n = 0, avoiding Γ at α+β+1 ≤ 0
        head - ln_gamma(a + b + 2.0)
    } else {
        head - (2.0 * nf + a + b + 1.0).ln() - ln_gamma(nf + a + b + 1.0)
    }
}

/// `h_n^{(α,β)}`.
pub fn jacobi_norm_sq(p: &JacobiParams, n: usize) -> f64 {
    ln_norm_sq(p, n).exp()
}

/// Leading coefficient `k_n = 2^{−n} C(2n+α+β, n)`.
pub fn jacobi_leading_coeff(p: &JacobiParams, n: usize) -> f64 {
    binom(2.0 * n as f64 + p.alpha + p.beta, n) / 2f64.powi(n as i32)
}

/// Leading coefficient `γ_n = k_n / √h_n` of the orthonormal polynomial.
pub fn orthonormal_leading_coeff(p: &JacobiParams, n: usize) -> f64 {
    jacobi_leading_coeff(p, n) / jacobi_norm_sq(p, n).sqrt()
}

/// `d/dt P_n^{(α,β)}(t) = (n+α+β+1)/2 · P_{n−1}^{(α+1,β+1)}(t)`.
pub fn jacobi_deriv(p: &JacobiParams, n: usize, t: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    0.5 * (n as f64 + p.alpha + p.beta + 1.0) * jacobi_eval(&p.shifted(1.0, 1.0), n - 1, t)
}

/// Coefficients `(c_n, c_{n−1})` of
/// `P_n^{(α,β)} = c_n P_n^{(α+1,β)} − c_{n−1} P_{n−1}^{(α+1,β)}`.
pub fn connection_step_coeffs(p: &JacobiParams, n: usize) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::DegreeTooSmall { min: 1, got: 0 });
    }
    let (a, b) = (p.alpha, p.beta);
    let nf = n as f64;
    let den = 2.0 * nf + a + b + 1.0;
    Ok(((nf + a + b + 1.0) / den, (nf + b) / den))
}

/// Right-hand side of the `(α,β) → (α+1,β)` connection relation at `t`.
pub fn jacobi_connection_step(p: &JacobiParams, n: usize, t: f64) -> Result<f64> {
    let (c0, c1) = connection_step_coeffs(p, n)?;
    let up = p.shifted(1.0, 0.0);
    Ok(c0 * jacobi_eval(&up, n, t) - c1 * jacobi_eval(&up, n - 1, t))
}

/// `P_n(1) = C(n+α, n)`.
pub fn value_at_one(p: &JacobiParams, n: usize) -> f64 {
    binom(n as f64 + p.alpha, n)
}

/// `P_n'(1)`.
pub fn deriv_at_one(p: &JacobiParams, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    0.5 * (n as f64 + p.alpha + p.beta + 1.0) * binom(n as f64 + p.alpha, n - 1)
}

/// Row vector `(P_n(1), P_n'(1))`.
pub fn boundary_row(p: &JacobiParams, n: usize) -> [f64; 2] {
    [value_at_one(p, n), deriv_at_one(p, n)]
}

/// `(p_n(1), p_n'(1))` for the orthonormal polynomial `p_n = P_n / √h_n`.
///
/// Reconstructed from `P_n(1)`, `P_n'(1)` and `h_n` rather than from a
/// closed Γ-product.
pub fn orthonormal_boundary(p: &JacobiParams, n: usize) -> (f64, f64) {
    let s = (-0.5 * ln_norm_sq(p, n)).exp();
    (value_at_one(p, n) * s, deriv_at_one(p, n) * s)
}

/// Kernel `K_n` and its partial derivatives at one point pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelValue {
    /// `K_n(t,u)`
    pub k00: f64,
    /// `∂_u K_n(t,u)`
    pub k01: f64,
    /// `∂_t K_n(t,u)`
    pub k10: f64,
    /// `∂_t ∂_u K_n(t,u)`
    pub k11: f64,
}

/// Kernel values by direct summation over `k ≤ n`.
pub fn kernel_eval(p: &JacobiParams, n: usize, t: f64, u: f64) -> KernelValue {
    let pt = jacobi_eval_all(p, n, t);
    let pu = jacobi_eval_all(p, n, u);
    let up = p.shifted(1.0, 1.0);
    let dt = if n > 0 { jacobi_eval_all(&up, n - 1, t) } else { Vec::new() };
    let du = if n > 0 { jacobi_eval_all(&up, n - 1, u) } else { Vec::new() };
    let mut kv = KernelValue { k00: 0.0, k01: 0.0, k10: 0.0, k11: 0.0 };
    for k in 0..=n {
        let inv_h = (-ln_norm_sq(p, k)).exp();
        let (dpt, dpu) = if k == 0 {
            (0.0, 0.0)
        } else {
            let c = 0.5 * (k as f64 + p.alpha + p.beta + 1.0);
            (c * dt[k - 1], c * du[k - 1])
        };
        kv.k00 += pt[k] * pu[k] * inv_h;
        kv.k01 += pt[k] * dpu * inv_h;
        kv.k10 += dpt * pu[k] * inv_h;
        kv.k11 += dpt * dpu * inv_h;
    }
    kv
}

/// Log-magnitude prefactor of `K_n(t,1) = c · P_n^{(α+1,β)}(t)`.
fn ln_k_t1_prefactor(p: &JacobiParams, n: usize) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    let nf = n as f64;
    -(a + b + 1.0) * std::f64::consts::LN_2 - ln_gamma(a + 1.0) + ln_gamma(nf + a + b + 2.0)
        - ln_gamma(nf + b + 1.0)
}

/// Log-magnitude prefactor of `K_n^{(0,1)}(t,1)` outside the bracket.
fn ln_k01_t1_prefactor(p: &JacobiParams, n: usize) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    let nf = n as f64;
    -(a + b + 2.0) * std::f64::consts::LN_2 + ln_gamma(nf + a + b + 3.0)
        - ln_gamma(a + 2.0)
        - ln_gamma(nf + b + 1.0)
}

/// Bracket coefficients `(e_n, e_{n−1})` of
/// `K_n^{(0,1)}(t,1) = c · (e_n P_n^{(α+2,β)}(t) − e_{n−1} P_{n−1}^{(α+2,β)}(t))`.
fn k01_bracket(p: &JacobiParams, n: usize) -> (f64, f64) {
    let (a, b) = (p.alpha, p.beta);
    let nf = n as f64;
    let den = 2.0 * nf + a + b + 2.0;
    (nf * (nf + a + b + 1.0) / den, (nf + 1.0) * (nf + b) / den)
}

/// Expansion of the kernel column `(K_n(t,1), K_n^{(0,1)}(t,1))` in the
/// `(α+2, β)` family: entry `[i]` holds the coefficient column of
/// `P_{n−i}^{(α+2,β)}`, for `i = 0, 1`.
pub fn boundary_kernel_expansion(p: &JacobiParams, n: usize) -> [[f64; 2]; 2] {
    let c_k = ln_k_t1_prefactor(p, n).exp();
    let c_d = ln_k01_t1_prefactor(p, n).exp();
    // P_n^{(α+1,β)} = g0 P_n^{(α+2,β)} − g1 P_{n−1}^{(α+2,β)}
    let (g0, g1) = if n == 0 {
        (1.0, 0.0)
    } else {
        connection_step_coeffs(&p.shifted(1.0, 0.0), n).expect("n >= 1")
    };
    let (e0, e1) = k01_bracket(p, n);
    [[c_k * g0, c_d * e0], [-c_k * g1, -c_d * e1]]
}

/// Closed forms `(K_n(t,1), K_n^{(0,1)}(t,1))`.
pub fn kernel_boundary_closed_forms(p: &JacobiParams, n: usize, t: f64) -> (f64, f64) {
    let k = ln_k_t1_prefactor(p, n).exp() * jacobi_eval(&p.shifted(1.0, 0.0), n, t);
    if n == 0 {
        return (k, 0.0);
    }
    let p2 = p.shifted(2.0, 0.0);
    let (e0, e1) = k01_bracket(p, n);
    let bracket = e0 * jacobi_eval(&p2, n, t) - e1 * jacobi_eval(&p2, n - 1, t);
    (k, ln_k01_t1_prefactor(p, n).exp() * bracket)
}

/// Same closed forms in scaled arithmetic, for large `n` or `β`.
pub fn kernel_boundary_scaled(p: &JacobiParams, n: usize, t: f64) -> (Scaled, Scaled) {
    let k = jacobi_eval_scaled(&p.shifted(1.0, 0.0), n, t).mul_ln(ln_k_t1_prefactor(p, n));
    if n == 0 {
        return (k, Scaled::ZERO);
    }
    let p2 = p.shifted(2.0, 0.0);
    let (e0, e1) = k01_bracket(p, n);
    let bracket = jacobi_eval_scaled(&p2, n, t)
        .scale(e0)
        .sub(jacobi_eval_scaled(&p2, n - 1, t).scale(e1));
    (k, bracket.mul_ln(ln_k01_t1_prefactor(p, n)))
}

/// `ln K_n(1,1)`.
pub fn ln_kernel_one(p: &JacobiParams, n: usize) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    let nf = n as f64;
    -(a + b + 1.0) * std::f64::consts::LN_2 - ln_gamma(a + 1.0) + ln_gamma(nf + a + b + 2.0)
        - ln_gamma(nf + b + 1.0)
        + ln_gamma(nf + a + 2.0)
        - ln_gamma(nf + 1.0)
        - ln_gamma(a + 2.0)
}

/// Exact ratio `K_n^{(0,1)}(1,1) / K_n(1,1) = (n+α+β+2) n / (2(α+2))`.
pub fn kernel_one_ratio_01(p: &JacobiParams, n: usize) -> f64 {
    let nf = n as f64;
    (nf + p.alpha + p.beta + 2.0) * nf / (2.0 * (p.alpha + 2.0))
}

/// Exact ratio `K_n^{(1,1)}(1,1) / K_n(1,1)`.
pub fn kernel_one_ratio_11(p: &JacobiParams, n: usize) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    let nf = n as f64;
    (nf + a + b + 2.0) * nf / (4.0 * (a + 1.0) * (a + 2.0) * (a + 3.0))
        * ((a + 2.0) * nf * (nf + a + b + 2.0) + b)
}

/// `(K_n(1,1), K_n^{(0,1)}(1,1), K_n^{(1,1)}(1,1))` from the Γ-product closed forms.
///
/// The derivative forms carry `1/Γ(n)`; at `n = 0` they are 0.
pub fn kernel_at_one(p: &JacobiParams, n: usize) -> (f64, f64, f64) {
    let (a, b) = (p.alpha, p.beta);
    let nf = n as f64;
    let ln2 = std::f64::consts::LN_2;
    let k00 = ln_kernel_one(p, n).exp();
    if n == 0 {
        return (k00, 0.0, 0.0);
    }
    let common = ln_gamma(nf + a + b + 3.0) - ln_gamma(nf + b + 1.0) + ln_gamma(nf + a + 2.0)
        - ln_gamma(nf);
    let k01 = (-(a + b + 2.0) * ln2 - ln_gamma(a + 1.0) - ln_gamma(a + 3.0) + common).exp();
    let k11 = (-(a + b + 3.0) * ln2 - ln_gamma(a + 2.0) - ln_gamma(a + 4.0) + common).exp()
        * ((a + 2.0) * nf * (nf + a + b + 2.0) + b);
    (k00, k01, k11)
}

/// Monic recurrence data `(b_j, a_j²)` with `t π_j = π_{j+1} + b_j π_j + a_j² π_{j−1}`.
pub fn monic_recurrence(p: &JacobiParams, j: usize) -> (f64, f64) {
    let (a, b) = (p.alpha, p.beta);
    let jf = j as f64;
    let s = 2.0 * jf + a + b;
    let diag = if j == 0 {
        (b - a) / (a + b + 2.0)
    } else {
        (b * b - a * a) / (s * (s + 2.0))
    };
    let off = match j {
        0 => 0.0,
        1 => 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b).powi(2) * (3.0 + a + b)),
        _ => 4.0 * jf * (jf + a) * (jf + b) * (jf + a + b) / (s * s * (s + 1.0) * (s - 1.0)),
    };
    (diag, off)
}

/// Jacobi family with cached recurrence data up to a degree bound.
#[derive(Debug, Clone)]
pub struct JacobiFamily {
    params: JacobiParams,
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl JacobiFamily {
    pub fn new(params: JacobiParams, max_degree: usize) -> Self {
        let mut diag = Vec::with_capacity(max_degree + 2);
        let mut off = Vec::with_capacity(max_degree + 2);
        for j in 0..=max_degree + 1 {
            let (d, o) = monic_recurrence(&params, j);
            diag.push(d);
            off.push(o.sqrt());
        }
        JacobiFamily { params, diag, off }
    }

    pub fn params(&self) -> &JacobiParams {
        &self.params
    }

    pub fn max_degree(&self) -> usize {
        self.diag.len() - 2
    }

    /// Orthonormal `p_0(t), …, p_n(t)`.
    pub fn orthonormal_all(&self, n: usize, t: f64) -> Vec<f64> {
        assert!(n <= self.max_degree(), "degree {n} beyond cached bound");
        let mut out = Vec::with_capacity(n + 1);
        out.push((-0.5 * ln_norm_sq(&self.params, 0)).exp());
        if n == 0 {
            return out;
        }
        out.push((t - self.diag[0]) * out[0] / self.off[1]);
        for j in 1..n {
            let v = ((t - self.diag[j]) * out[j] - self.off[j] * out[j - 1]) / self.off[j + 1];
            out.push(v);
        }
        out
    }

    /// Monic-to-`P_n` ratio check: `P_n(1)` rebuilt from the cached
    /// orthonormal recurrence.
    pub fn value_at_one_from_recurrence(&self, n: usize) -> f64 {
        self.orthonormal_all(n, 1.0)[n] * jacobi_norm_sq(&self.params, n).sqrt()
    }

    /// Symmetric tridiagonal Jacobi matrix of order `n` as `(diag, offdiag)`.
    pub fn jacobi_matrix(&self, n: usize) -> (Vec<f64>, Vec<f64>) {
        assert!(n >= 1 && n <= self.max_degree() + 1);
        (self.diag[..n].to_vec(), self.off[1..n].to_vec())
    }
}

/// Running sum of products of two orthonormal sequences, in scaled arithmetic.
///
/// Returns `Σ_{j≤m} p_j(t) p_j(u)` where both sequences start from `p_0` and
/// follow the orthonormal recurrence of `params`.
pub fn kernel_scaled(p: &JacobiParams, m: usize, t: f64, u: f64) -> Scaled {
    let ln_p0 = -0.5 * ln_norm_sq(p, 0);
    let diag_case = t == u;
    // each sequence keeps two mantissas under one shared log scale
    let mut st = OrthoSeq::new(ln_p0);
    let mut su = OrthoSeq::new(ln_p0);
    let mut acc = Scaled::ZERO;
    for j in 0..=m {
        let term = if diag_case {
            let v = st.current();
            v.mul(v)
        } else {
            st.current().mul(su.current())
        };
        acc = acc.add(term);
        if j < m {
            let (d, o_cur) = (monic_recurrence(p, j).0, monic_recurrence(p, j).1.sqrt());
            let o_next = monic_recurrence(p, j + 1).1.sqrt();
            st.step(t, d, o_cur, o_next);
            if !diag_case {
                su.step(u, d, o_cur, o_next);
            }
        }
    }
    acc
}

struct OrthoSeq {
    prev: f64,
    cur: f64,
    ln: f64,
}

impl OrthoSeq {
    fn new(ln_p0: f64) -> Self {
        OrthoSeq { prev: 0.0, cur: 1.0, ln: ln_p0 }
    }

    fn current(&self) -> Scaled {
        Scaled::new(self.cur, self.ln)
    }

    fn step(&mut self, t: f64, diag: f64, off_cur: f64, off_next: f64) {
        let next = ((t - diag) * self.cur - off_cur * self.prev) / off_next;
        self.prev = self.cur;
        self.cur = next;
        let a = self.cur.abs().max(self.prev.abs());
        if a > 1e100 || (a < 1e-100 && a > 0.0) {
            self.prev /= a;
            self.cur /= a;
            self.ln += a.ln();
        }
    }
}
