//! Orthogonal polynomials on the unit ball `B^d`.
//!
//! Classical basis `P_{j,ν}^n(x;μ) = P_j^{(μ,β)}(2‖x‖²−1) Y_ν^{n−2j}(x)` with
//! `β = n−2j+δ`, and the Sobolev basis `Q_{j,ν}^n` obtained by replacing the
//! radial Jacobi factor with `q_j^{(μ,β;M_{n−2j})}`. The Sobolev inner product is
//!
//! `⟨f,g⟩^S = (1/ω_μ)∫_B f g (1−‖x‖²)^μ dx + (λ/σ_d)∫_S ∂_𝐧f ∂_𝐧g dσ`.

use crate::error::{Error, Result};
use crate::jacobi::{
    jacobi_coeffs_shifted, jacobi_eval, jacobi_norm_sq, kernel_one_ratio_01, kernel_one_ratio_11,
    ln_kernel_one, JacobiParams,
};
use crate::poly::MultivariatePolynomial;
use crate::quadrature::gauss_jacobi;
use crate::sobolev1d::{SobolevFamily1D, SobolevMatrix2};
use crate::special::{ln_1p_exp, ln_gamma};
use crate::sphere::{harmonic_dim, sphere_monomial_integral, sphere_quadrature, HarmonicBasis, SphereDim};
use serde::Serialize;
use std::f64::consts::{LN_2, PI};

/// `(d, μ, λ)` with derived `δ`, `ω_μ`, `σ_d`, `A₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BallConfig {
    d: usize,
    mu: f64,
    lambda: f64,
    delta: f64,
    omega: f64,
    sigma: f64,
    a0: f64,
}

/// `ω_μ = π^{d/2} Γ(μ+1) / Γ(μ+d/2+1)`, the mass of `(1−‖x‖²)^μ`.
pub fn omega_mu(d: usize, mu: f64) -> f64 {
    let h = d as f64 / 2.0;
    (h * PI.ln() + ln_gamma(mu + 1.0) - ln_gamma(mu + h + 1.0)).exp()
}

impl BallConfig {
    pub fn new(d: usize, mu: f64, lambda: f64) -> Result<Self> {
        let sphere = SphereDim::new(d)?;
        if !(mu > -1.0) || !mu.is_finite() {
            return Err(Error::ParameterDomain(format!("μ must exceed −1, got {mu}")));
        }
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::ParameterDomain(format!("λ must be positive, got {lambda}")));
        }
        let delta = sphere.delta();
        let omega = omega_mu(d, mu);
        let sigma = sphere.sigma();
        let a0 = lambda * ((delta + mu + 2.0) * LN_2).exp() * omega / sigma;
        Ok(BallConfig { d, mu, lambda, delta, omega, sigma, a0 })
    }

    pub fn d(&self) -> usize {
        self.d
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn omega(&self) -> f64 {
        self.omega
    }
    pub fn sigma(&self) -> f64 {
        self.sigma
    }
    pub fn a0(&self) -> f64 {
        self.a0
    }

    /// `A₀/λ = 2^{δ+μ+2} ω_μ/σ_d`.
    pub fn a0_over_lambda(&self) -> f64 {
        ((self.delta + self.mu + 2.0) * LN_2).exp() * self.omega / self.sigma
    }

    /// Radial Jacobi parameters `(μ + shift, k + δ)`.
    pub fn radial_params(&self, k: usize, mu_shift: f64) -> Result<JacobiParams> {
        JacobiParams::new(self.mu + mu_shift, k as f64 + self.delta)
    }

    /// `M_k = 2^k A₀ [[k², 4k], [4k, 16]]`.
    pub fn boundary_matrix(&self, k: usize) -> SobolevMatrix2 {
        let c = 2f64.powi(k as i32) * self.a0;
        let kf = k as f64;
        SobolevMatrix2::new(c * kf * kf, c * 4.0 * kf, c * 16.0).expect("rank-one PSD")
    }

    /// `ln(2^k A₀)`, the scale of `M_k`.
    pub fn ln_boundary_scale(&self, k: usize) -> f64 {
        k as f64 * LN_2 + self.a0.ln()
    }
}

/// `(n, j, ν)` with `0 ≤ j ≤ n/2` and `1 ≤ ν ≤ a_{n−2j}^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BallIndex {
    pub n: usize,
    pub j: usize,
    pub nu: usize,
}

impl BallIndex {
    pub fn new(d: usize, n: usize, j: usize, nu: usize) -> Result<Self> {
        if 2 * j > n {
            return Err(Error::InvalidIndex(format!("j = {j} exceeds n/2 for n = {n}")));
        }
        let dim = harmonic_dim(d, n - 2 * j);
        if nu == 0 || nu > dim {
            return Err(Error::InvalidIndex(format!("ν = {nu} outside 1..={dim}")));
        }
        Ok(BallIndex { n, j, nu })
    }

    /// Harmonic degree `n − 2j`.
    pub fn k(&self) -> usize {
        self.n - 2 * self.j
    }

    /// `β_j^n = n − 2j + δ`.
    pub fn beta(&self, delta: f64) -> f64 {
        self.k() as f64 + delta
    }
}

/// Every index of total degree `n`, ordered by `j` then `ν`.
pub fn ball_indices(d: usize, n: usize) -> Vec<BallIndex> {
    (0..=n / 2)
        .flat_map(|j| (1..=harmonic_dim(d, n - 2 * j)).map(move |nu| BallIndex { n, j, nu }))
        .collect()
}

/// All indices with total degree `≤ max_n`.
pub fn ball_indices_up_to(d: usize, max_n: usize) -> Vec<BallIndex> {
    (0..=max_n).flat_map(|n| ball_indices(d, n)).collect()
}

fn check_point(cfg: &BallConfig, x: &[f64]) -> Result<()> {
    if x.len() != cfg.d {
        return Err(Error::ParameterDomain(format!("point must have {} coordinates", cfg.d)));
    }
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if r > 1.0 + 1e-12 {
        return Err(Error::OutsideBall(r));
    }
    Ok(())
}

fn norm_sq(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// `P_{j,ν}^n(x; μ + mu_shift)`.
pub fn classical_ball_poly(cfg: &BallConfig, idx: BallIndex, mu_shift: f64, x: &[f64]) -> Result<f64> {
    check_point(cfg, x)?;
    let basis = HarmonicBasis::new(cfg.d, idx.k())?;
    let p = cfg.radial_params(idx.k(), mu_shift)?;
    Ok(jacobi_eval(&p, idx.j, 2.0 * norm_sq(x) - 1.0) * basis.eval_homogeneous(idx.nu, x)?)
}

/// `H_{j,n}^{μ'} = 2^{−μ'−β−2} (σ_d/ω_{μ'}) h_j^{(μ',β)}` with `μ' = μ + mu_shift`.
pub fn classical_ball_norm(cfg: &BallConfig, idx: BallIndex, mu_shift: f64) -> Result<f64> {
    let p = cfg.radial_params(idx.k(), mu_shift)?;
    let mu = cfg.mu + mu_shift;
    let beta = idx.beta(cfg.delta);
    Ok(cfg.sigma / omega_mu(cfg.d, mu) * (-(mu + beta + 2.0) * LN_2).exp() * jacobi_norm_sq(&p, idx.j))
}

/// `P_{j,ν}^n(·; μ + mu_shift)` as an explicit polynomial.
pub fn classical_ball_polynomial(cfg: &BallConfig, idx: BallIndex, mu_shift: f64) -> Result<MultivariatePolynomial> {
    let basis = HarmonicBasis::new(cfg.d, idx.k())?;
    let p = cfg.radial_params(idx.k(), mu_shift)?;
    Ok(basis.polynomial(idx.nu)?.mul_radial(&jacobi_coeffs_shifted(&p, idx.j)))
}

/// `(1/ω_μ)∫_B x^κ (1−‖x‖²)^μ dx = (σ_d/ω_μ) · ½B((|κ|+d)/2, μ+1) · (1/σ_d)∫_S ξ^κ dσ`.
pub fn ball_monomial_moment(d: usize, mu: f64, kappa: &[u32]) -> f64 {
    let s = sphere_monomial_integral(d, kappa);
    if s == 0.0 {
        return 0.0;
    }
    let total: u32 = kappa.iter().sum();
    let a = (total as f64 + d as f64) / 2.0;
    let ln_beta = ln_gamma(a) + ln_gamma(mu + 1.0) - ln_gamma(a + mu + 1.0);
    let sigma = SphereDim::new(d).expect("d >= 2").sigma();
    0.5 * ln_beta.exp() * sigma / omega_mu(d, mu) * s
}

/// `(1/ω_μ)∫_B f g W_μ` through monomial moments.
pub fn ball_inner_product_exact(d: usize, mu: f64, f: &MultivariatePolynomial, g: &MultivariatePolynomial) -> f64 {
    f.mul(g).terms().map(|(k, c)| c * ball_monomial_moment(d, mu, k)).sum()
}

/// `(1/σ_d)∫_S f g dσ` through sphere moments.
pub fn sphere_inner_product_exact(d: usize, f: &MultivariatePolynomial, g: &MultivariatePolynomial) -> f64 {
    f.mul(g).terms().map(|(k, c)| c * sphere_monomial_integral(d, k)).sum()
}

/// `⟨f,g⟩^S` from exact monomial moments.
pub fn sobolev_inner_product(cfg: &BallConfig, f: &MultivariatePolynomial, g: &MultivariatePolynomial) -> f64 {
    let ball = ball_inner_product_exact(cfg.d, cfg.mu, f, g);
    let bdry = sphere_inner_product_exact(cfg.d, &f.normal_derivative(), &g.normal_derivative());
    ball + cfg.lambda * bdry
}

/// `(1/ω_μ)∫_B F W_μ` by a radial Gauss–Jacobi rule in `t = 2r²−1` composed with a sphere rule,
/// for `F` polynomial of degree `≤ degree`. Only `d ∈ {2, 3}`.
pub fn ball_integral_quadrature(
    d: usize,
    mu: f64,
    degree: usize,
    f: impl Fn(&[f64]) -> f64,
) -> Result<f64> {
    let delta = (d as f64 - 2.0) / 2.0;
    let radial = gauss_jacobi(&JacobiParams::new(mu, delta)?, (degree + 2).div_ceil(2) + 2)?;
    let sphere = sphere_quadrature(d, degree + 2)?;
    let sigma = SphereDim::new(d)?.sigma();
    let c = sigma / omega_mu(d, mu) * (-(mu + delta + 2.0) * LN_2).exp();
    let mut total = 0.0;
    let mut x = vec![0.0; d];
    for (&t, &wt) in radial.nodes.iter().zip(&radial.weights) {
        let r = ((1.0 + t) / 2.0).max(0.0).sqrt();
        let mean = sphere.integrate(|xi| {
            for (xi_i, x_i) in xi.iter().zip(x.iter_mut()) {
                *x_i = r * xi_i;
            }
            f(&x)
        });
        total += wt * mean;
    }
    Ok(c * total)
}

/// `⟨f,g⟩^S` by quadrature (`d ∈ {2, 3}`).
pub fn sobolev_inner_product_quadrature(
    cfg: &BallConfig,
    f: &MultivariatePolynomial,
    g: &MultivariatePolynomial,
) -> Result<f64> {
    let deg = (f.degree().unwrap_or(0) + g.degree().unwrap_or(0)) as usize;
    let ball = ball_integral_quadrature(cfg.d, cfg.mu, deg, |x| f.eval(x) * g.eval(x))?;
    let (fn_, gn) = (f.normal_derivative(), g.normal_derivative());
    let sphere = sphere_quadrature(cfg.d, deg + 2)?;
    let bdry = sphere.integrate(|xi| fn_.eval(xi) * gn.eval(xi));
    Ok(ball + cfg.lambda * bdry)
}

/// `Δ_{k,m} = 1 + 2^k A₀ (k² K_m(1,1) + 8k K_m^{(0,1)}(1,1) + 16 K_m^{(1,1)}(1,1))`
/// for the radial family `(μ, k+δ)`.
pub fn delta_km(cfg: &BallConfig, k: usize, m: usize) -> f64 {
    ln_delta_km(cfg, k, m).exp()
}

/// `ln Δ_{k,m}`, assembled from log-magnitudes so that `2^k` and the
/// `2^{−k}` decay of `K_m(1,1)` cancel before exponentiation.
pub fn ln_delta_km(cfg: &BallConfig, k: usize, m: usize) -> f64 {
    let p = cfg.radial_params(k, 0.0).expect("valid radial parameters");
    let kf = k as f64;
    let form = kf * kf + 8.0 * kf * kernel_one_ratio_01(&p, m) + 16.0 * kernel_one_ratio_11(&p, m);
    if form == 0.0 {
        return 0.0;
    }
    ln_1p_exp(cfg.ln_boundary_scale(k) + ln_kernel_one(&p, m) + form.ln())
}

/// Coefficients of `Q_{j,ν}^n` in the `W_{μ+2}` ball basis,
/// `Q = b_{j,j} P_{j,ν}^n + b_{j,j−1} P_{j−1,ν}^{n−2} + b_{j,j−2} P_{j−2,ν}^{n−4}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BallConnection {
    pub b_jj: f64,
    pub b_jjm1: f64,
    pub b_jjm2: f64,
    /// `d_j^n`
    pub d: f64,
    /// `a_{j−1}^{n−2}`
    pub a_prev: f64,
    /// `a_j^n`
    pub a_cur: f64,
}

/// The connection coefficients of `Q_{j,ν}^n`.
///
/// `d_j^n` carries the `1/Δ_{n−2j, j−1}` from the rank-one form of `Λ_{j−1}`, and
/// the harmonic-degree parts of `a` are weighed against `(μ+1)`:
/// `a_j^n = 2((n−2j) + 2j(n−j+μ+δ+1)/(μ+1))`. The Γ-form of `d_j^n`
/// otherwise follows `P_j(1)` and `P_j'(1)` of the radial family.
pub fn ball_connection(cfg: &BallConfig, n: usize, j: usize) -> BallConnection {
    let (mu, dl) = (cfg.mu, cfg.delta);
    let (nf, jf) = (n as f64, j as f64);
    let k = n - 2 * j;
    let kf = k as f64;
    let s = nf + mu + dl;
    let b_jj = (nf - jf + mu + dl + 2.0) * (nf - jf + mu + dl + 1.0) / ((s + 2.0) * (s + 1.0));
    if j == 0 {
        return BallConnection { b_jj, b_jjm1: 0.0, b_jjm2: 0.0, d: 0.0, a_prev: 0.0, a_cur: 0.0 };
    }
    let ln_d = cfg.a0.ln() + ln_gamma(nf - jf + mu + dl + 1.0) + ln_gamma(jf + mu + 1.0)
        - (mu + dl + 2.0) * LN_2
        - ln_gamma(mu + 1.0)
        - ln_gamma(mu + 2.0)
        - ln_gamma(nf - jf + dl)
        - ln_gamma(jf + 1.0);
    let d = ln_d.exp() * ((mu + 1.0) * kf + 2.0 * jf * (nf - jf + mu + dl + 1.0)) / delta_km(cfg, k, j - 1);
    let a_cur = 2.0 * (kf + 2.0 * jf * (nf - jf + mu + dl + 1.0) / (mu + 1.0));
    let a_prev = 2.0 * (kf + 2.0 * (jf - 1.0) * (nf - jf + mu + dl) / (mu + 1.0));
    let b_jjm1 = (nf - jf + mu + dl + 1.0) / s * (-2.0 * (nf - jf + dl) / (s + 2.0) - d * a_prev);
    let b_jjm2 = if j >= 2 {
        (nf - jf + dl - 1.0) / s * ((nf - jf + dl) / (s + 1.0) + d * a_cur)
    } else {
        0.0
    };
    BallConnection { b_jj, b_jjm1, b_jjm2, d, a_prev, a_cur }
}

/// Sobolev ball basis up to total degree `max_n`, caching one univariate
/// family per harmonic degree `k` with parameters `(μ, k+δ; M_k)`.
#[derive(Debug, Clone)]
pub struct SobolevBall {
    cfg: BallConfig,
    max_n: usize,
    families: Vec<SobolevFamily1D>,
}

impl SobolevBall {
    pub fn new(cfg: BallConfig, max_n: usize) -> Result<Self> {
        let families = (0..=max_n)
            .map(|k| SobolevFamily1D::new(cfg.radial_params(k, 0.0)?, cfg.boundary_matrix(k), (max_n - k) / 2))
            .collect::<Result<Vec<_>>>()?;
        Ok(SobolevBall { cfg, max_n, families })
    }

    pub fn config(&self) -> &BallConfig {
        &self.cfg
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    /// Univariate family for harmonic degree `k`.
    pub fn family(&self, k: usize) -> &SobolevFamily1D {
        &self.families[k]
    }

    fn check(&self, idx: BallIndex) -> Result<()> {
        if idx.n > self.max_n {
            return Err(Error::InvalidIndex(format!("degree {} exceeds cached bound {}", idx.n, self.max_n)));
        }
        BallIndex::new(self.cfg.d, idx.n, idx.j, idx.nu).map(|_| ())
    }

    /// `Q_{j,ν}^n(x)`.
    pub fn poly(&self, idx: BallIndex, x: &[f64]) -> Result<f64> {
        self.check(idx)?;
        check_point(&self.cfg, x)?;
        let basis = HarmonicBasis::new(self.cfg.d, idx.k())?;
        let q = self.families[idx.k()].eval(idx.j, 2.0 * norm_sq(x) - 1.0);
        Ok(q * basis.eval_homogeneous(idx.nu, x)?)
    }

    /// `Q_{j,ν}^n` as an explicit polynomial.
    pub fn polynomial(&self, idx: BallIndex) -> Result<MultivariatePolynomial> {
        self.check(idx)?;
        let basis = HarmonicBasis::new(self.cfg.d, idx.k())?;
        Ok(basis.polynomial(idx.nu)?.mul_radial(&self.families[idx.k()].coeffs_shifted(idx.j)))
    }

    /// `H̃ = (λ / (2^{n−2j} A₀)) h̃_j^{(μ,β;M_{n−2j})}`.
    pub fn norm(&self, idx: BallIndex) -> Result<f64> {
        self.check(idx)?;
        let k = idx.k();
        Ok((self.cfg.lambda.ln() - self.cfg.ln_boundary_scale(k)).exp() * self.families[k].norm_sq(idx.j))
    }

    /// `Q_{j,ν}^n(x)` through the `W_{μ+2}` ball basis.
    pub fn connection_eval(&self, idx: BallIndex, x: &[f64]) -> Result<f64> {
        self.check(idx)?;
        check_point(&self.cfg, x)?;
        let c = ball_connection(&self.cfg, idx.n, idx.j);
        let mut v = c.b_jj * classical_ball_poly(&self.cfg, idx, 2.0, x)?;
        if idx.j >= 1 {
            let lower = BallIndex { n: idx.n - 2, j: idx.j - 1, nu: idx.nu };
            v += c.b_jjm1 * classical_ball_poly(&self.cfg, lower, 2.0, x)?;
        }
        if idx.j >= 2 {
            let lower = BallIndex { n: idx.n - 4, j: idx.j - 2, nu: idx.nu };
            v += c.b_jjm2 * classical_ball_poly(&self.cfg, lower, 2.0, x)?;
        }
        Ok(v)
    }
}

/// Which basis and inner product a Gram matrix uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    /// `P_{j,ν}^n(·;μ)` under `(1/ω_μ)∫ f g W_μ`
    Classical,
    /// `Q_{j,ν}^n` under `⟨·,·⟩^S`
    Sobolev,
}

impl std::str::FromStr for BasisKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(BasisKind::Classical),
            "sobolev" => Ok(BasisKind::Sobolev),
            other => Err(Error::ParameterDomain(format!("unknown basis {other:?}"))),
        }
    }
}

/// Gram matrix of a ball basis with the predicted diagonal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramMatrix {
    pub indices: Vec<BallIndex>,
    /// row-major entries
    pub values: Vec<Vec<f64>>,
    /// closed-form norms of the basis elements
    pub norms: Vec<f64>,
}

impl GramMatrix {
    /// Largest `|G_ab|/max(H_a, H_b)` off the diagonal.
    pub fn max_off_diagonal(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, row) in self.values.iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                if a != b {
                    worst = worst.max(v.abs() / self.norms[a].max(self.norms[b]));
                }
            }
        }
        worst
    }

    /// Largest relative gap between `G_aa` and the closed-form norm.
    pub fn max_diagonal_error(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(a, row)| (row[a] - self.norms[a]).abs() / self.norms[a])
            .fold(0.0, f64::max)
    }
}

/// Exact Gram matrix of all basis elements of degree `≤ max_n` (`d ∈ {2, 3}`).
pub fn gram_matrix(cfg: &BallConfig, max_n: usize, kind: BasisKind) -> Result<GramMatrix> {
    use rayon::prelude::*;
    let indices = ball_indices_up_to(cfg.d, max_n);
    let (polys, norms): (Vec<_>, Vec<_>) = match kind {
        BasisKind::Classical => {
            let polys = indices.iter().map(|&i| classical_ball_polynomial(cfg, i, 0.0)).collect::<Result<Vec<_>>>()?;
            let norms = indices.iter().map(|&i| classical_ball_norm(cfg, i, 0.0)).collect::<Result<Vec<_>>>()?;
            (polys, norms)
        }
        BasisKind::Sobolev => {
            let basis = SobolevBall::new(*cfg, max_n)?;
            let polys = indices.iter().map(|&i| basis.polynomial(i)).collect::<Result<Vec<_>>>()?;
            let norms = indices.iter().map(|&i| basis.norm(i)).collect::<Result<Vec<_>>>()?;
            (polys, norms)
        }
    };
    let values = polys
        .par_iter()
        .map(|pa| {
            polys
                .iter()
                .map(|pb| match kind {
                    BasisKind::Classical => ball_inner_product_exact(cfg.d, cfg.mu, pa, pb),
                    BasisKind::Sobolev => sobolev_inner_product(cfg, pa, pb),
                })
                .collect()
        })
        .collect();
    Ok(GramMatrix { indices, values, norms })
}
