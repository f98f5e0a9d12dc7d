//! Reproducing kernels `𝕃_n` (classical) and `L̃_n` (Sobolev) on the ball,
//! the diagonal correction `Ψ_n = 𝕃_n(x,x) − L̃_n(x,x)`, and Christoffel functions.
//!
//! Both kernels collapse the harmonic sum through the addition formula, so
//! the fast paths work for any `d ≥ 2`:
//!
//! `𝕃_n(x,y) = (A₀/λ) Σ_k 2^k (rs)^k Z_k(⟨ξ,ϱ⟩) K_{m}(t,u; μ, k+δ)`, `m = ⌊(n−k)/2⌋`,
//!
//! and the Sobolev kernel subtracts, per `k`,
//! `(A₀/λ) 2^k (rs)^k Z_k · 𝐊_m(t,1)ᵗ Λ_m 𝐊_m(u,1)` with `Λ_m = M_k/Δ_{k,m}`.
//! `Z_k` is `((k+δ)/δ) C_k^δ` for `d ≥ 3` and `1, 2cos(kγ)` for `d = 2`.
//!
//! Every `2^k`, `(rs)^k` factor is carried as a log-magnitude and combined
//! with the scaled kernel values before exponentiation.

use crate::ball::{ball_indices_up_to, classical_ball_poly, classical_ball_norm, ln_delta_km, BallConfig, SobolevBall};
use crate::error::{Error, Result};
use crate::jacobi::{kernel_boundary_scaled, kernel_one_ratio_01, kernel_scaled, ln_kernel_one, JacobiParams};
use crate::special::Scaled;
use crate::sphere::{dot, zonal};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::LN_2;

/// Polar data of a point pair `x = rξ`, `y = sϱ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelPointPair {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub r: f64,
    pub s: f64,
    pub xi: Vec<f64>,
    pub rho: Vec<f64>,
    /// `2r² − 1`
    pub t: f64,
    /// `2s² − 1`
    pub u: f64,
    pub cos_gamma: f64,
}

fn polar(x: &[f64]) -> Result<(f64, Vec<f64>)> {
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if r > 1.0 + 1e-12 {
        return Err(Error::OutsideBall(r));
    }
    let r = r.min(1.0);
    let xi = if r > 0.0 {
        x.iter().map(|v| v / r).collect()
    } else {
        // direction is irrelevant at the origin; every k ≥ 1 term carries r^k
        let mut e = vec![0.0; x.len()];
        e[0] = 1.0;
        e
    };
    Ok((r, xi))
}

impl KernelPointPair {
    pub fn new(x: &[f64], y: &[f64]) -> Result<Self> {
        if x.len() != y.len() || x.is_empty() {
            return Err(Error::ParameterDomain("points must share a positive dimension".into()));
        }
        let (r, xi) = polar(x)?;
        let (s, rho) = polar(y)?;
        let cos_gamma = dot(&xi, &rho).clamp(-1.0, 1.0);
        Ok(KernelPointPair {
            x: x.to_vec(),
            y: y.to_vec(),
            r,
            s,
            t: 2.0 * r * r - 1.0,
            u: 2.0 * s * s - 1.0,
            xi,
            rho,
            cos_gamma,
        })
    }

    pub fn diagonal(x: &[f64]) -> Result<Self> {
        Self::new(x, x)
    }

    pub fn is_diagonal(&self) -> bool {
        self.x == self.y
    }

    fn ln_rs(&self) -> f64 {
        (self.r * self.s).ln()
    }
}

/// Per-`k` data of `Ψ_n(x)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrectionTerms {
    pub n: usize,
    /// `m_k = ⌊(n−k)/2⌋`
    pub m: Vec<usize>,
    /// `Δ_{k,m_k}`
    pub deltas: Vec<f64>,
    /// `ln F_{k,m_k}(t)`; `−∞` where `F` vanishes
    pub ln_f: Vec<f64>,
    /// `k`-th summand of `Ψ_n(x)`
    pub summands: Vec<f64>,
    pub total: f64,
}

impl CorrectionTerms {
    /// `(Ψ_{n,1}, Ψ_{n,2})`: summands with `k ≤ n − ⌊ln n⌋` and the remaining tail.
    pub fn split(&self) -> (f64, f64) {
        let cut = self.n.saturating_sub((self.n.max(1) as f64).ln().floor() as usize);
        let head = self.summands.iter().take(cut + 1).sum();
        let tail = self.summands.iter().skip(cut + 1).sum();
        (head, tail)
    }
}

fn check_dim(cfg: &BallConfig, pair: &KernelPointPair) -> Result<()> {
    if pair.x.len() != cfg.d() {
        return Err(Error::ParameterDomain(format!("points must have {} coordinates", cfg.d())));
    }
    Ok(())
}

fn radial(cfg: &BallConfig, k: usize) -> JacobiParams {
    cfg.radial_params(k, 0.0).expect("valid radial parameters")
}

/// `k K_m(t,1) + 4 K_m^{(0,1)}(t,1)`, which is `𝐊_m(t,1)ᵗ·(k, 4)`.
fn boundary_form(p: &JacobiParams, k: usize, m: usize, t: f64) -> Scaled {
    if t == 1.0 {
        let ratio = k as f64 + 4.0 * kernel_one_ratio_01(p, m);
        return Scaled::from_ln(ln_kernel_one(p, m), 1.0).scale(ratio);
    }
    let (a, b) = kernel_boundary_scaled(p, m, t);
    a.scale(k as f64).add(b.scale(4.0))
}

/// Zonal factor and `ln((rs)^k)`, or `None` when the term vanishes.
fn angular(cfg: &BallConfig, k: usize, pair: &KernelPointPair) -> Option<(f64, f64)> {
    let ln_rs = if k == 0 { 0.0 } else { k as f64 * pair.ln_rs() };
    if ln_rs == f64::NEG_INFINITY {
        return None;
    }
    let z = zonal(cfg.d(), k, pair.cos_gamma);
    if z == 0.0 {
        return None;
    }
    Some((z, ln_rs))
}

fn ordered_sum(terms: Vec<f64>) -> f64 {
    // fixed left-to-right order keeps results independent of scheduling
    terms.into_iter().sum()
}

/// `k`-th radial term of `𝕃_n(x,y)`.
fn classical_term(cfg: &BallConfig, n: usize, k: usize, pair: &KernelPointPair) -> f64 {
    let Some((z, ln_rs)) = angular(cfg, k, pair) else { return 0.0 };
    let p = radial(cfg, k);
    let m = (n - k) / 2;
    let ln_pre = cfg.a0_over_lambda().ln() + k as f64 * LN_2 + ln_rs;
    let kern = if pair.t == 1.0 && pair.u == 1.0 {
        Scaled::from_ln(ln_kernel_one(&p, m), 1.0)
    } else {
        kernel_scaled(&p, m, pair.t, pair.u)
    };
    kern.mul_ln(ln_pre).scale(z).to_f64()
}

/// `k`-th term subtracted from `𝕃_n(x,y)` to obtain `L̃_n(x,y)`.
fn correction_term(cfg: &BallConfig, n: usize, k: usize, pair: &KernelPointPair) -> f64 {
    let Some((z, ln_rs)) = angular(cfg, k, pair) else { return 0.0 };
    let p = radial(cfg, k);
    let m = (n - k) / 2;
    let gt = boundary_form(&p, k, m, pair.t);
    let gu = if pair.u == pair.t { gt } else { boundary_form(&p, k, m, pair.u) };
    let ln_pre = cfg.a0_over_lambda().ln() + k as f64 * LN_2 + ln_rs + cfg.ln_boundary_scale(k) - ln_delta_km(cfg, k, m);
    gt.mul(gu).mul_ln(ln_pre).scale(z).to_f64()
}

/// `𝕃_n(x,y)` via the addition formula (any `d ≥ 2`).
pub fn classical_kernel(cfg: &BallConfig, n: usize, pair: &KernelPointPair) -> Result<f64> {
    check_dim(cfg, pair)?;
    let terms: Vec<f64> = (0..=n).into_par_iter().map(|k| classical_term(cfg, n, k, pair)).collect();
    Ok(ordered_sum(terms))
}

/// `𝕃_n(x,y)` as an explicit basis sum (`d ∈ {2, 3}`).
pub fn classical_kernel_direct(cfg: &BallConfig, n: usize, pair: &KernelPointPair) -> Result<f64> {
    check_dim(cfg, pair)?;
    let mut total = 0.0;
    for idx in ball_indices_up_to(cfg.d(), n) {
        let a = classical_ball_poly(cfg, idx, 0.0, &pair.x)?;
        let b = classical_ball_poly(cfg, idx, 0.0, &pair.y)?;
        total += a * b / classical_ball_norm(cfg, idx, 0.0)?;
    }
    Ok(total)
}

/// `L̃_n(x,y)` as an explicit sum over the Sobolev basis (`d ∈ {2, 3}`).
pub fn sobolev_kernel_direct(basis: &SobolevBall, n: usize, pair: &KernelPointPair) -> Result<f64> {
    check_dim(basis.config(), pair)?;
    let mut total = 0.0;
    for idx in ball_indices_up_to(basis.config().d(), n) {
        total += basis.poly(idx, &pair.x)? * basis.poly(idx, &pair.y)? / basis.norm(idx)?;
    }
    Ok(total)
}

/// `L̃_n(x,y) = 𝕃_n(x,y) − Σ_k (A₀/λ) 2^k (rs)^k Z_k · 𝐊ᵗ (M_k/Δ_{k,m}) 𝐊` (any `d ≥ 2`).
///
/// The overall constant is `A₀/λ`; it is pinned by agreement with
/// [`sobolev_kernel_direct`].
pub fn sobolev_kernel_decomposed(cfg: &BallConfig, n: usize, pair: &KernelPointPair) -> Result<f64> {
    check_dim(cfg, pair)?;
    let terms: Vec<f64> = (0..=n)
        .into_par_iter()
        .map(|k| classical_term(cfg, n, k, pair) - correction_term(cfg, n, k, pair))
        .collect();
    Ok(ordered_sum(terms))
}

/// `Ψ_n(x) = (A₀²/λ) Σ_k 2^{2k} r^{2k} Z_k(1) F_{k,m}(t)` with its per-`k` data.
pub fn psi_correction(cfg: &BallConfig, n: usize, x: &[f64]) -> Result<CorrectionTerms> {
    let pair = KernelPointPair::diagonal(x)?;
    check_dim(cfg, &pair)?;
    let rows: Vec<(usize, f64, f64, f64)> = (0..=n)
        .into_par_iter()
        .map(|k| {
            let p = radial(cfg, k);
            let m = (n - k) / 2;
            let ln_delta = ln_delta_km(cfg, k, m);
            let g = boundary_form(&p, k, m, pair.t);
            // F = (k a + 4 b)² / Δ
            let ln_f = if g.is_zero() { f64::NEG_INFINITY } else { 2.0 * g.ln_abs() - ln_delta };
            // on the diagonal ln_rs already equals ln r^{2k}
            let summand = match angular(cfg, k, &pair) {
                Some((z, ln_rs)) if ln_f.is_finite() => {
                    let ln = 2.0 * cfg.a0().ln() - cfg.lambda().ln() + 2.0 * k as f64 * LN_2 + ln_rs + ln_f;
                    z * ln.exp()
                }
                _ => 0.0,
            };
            (m, ln_delta.exp(), ln_f, summand)
        })
        .collect();
    let total = ordered_sum(rows.iter().map(|r| r.3).collect());
    Ok(CorrectionTerms {
        n,
        m: rows.iter().map(|r| r.0).collect(),
        deltas: rows.iter().map(|r| r.1).collect(),
        ln_f: rows.iter().map(|r| r.2).collect(),
        summands: rows.iter().map(|r| r.3).collect(),
        total,
    })
}

/// Which diagonal kernel a Christoffel function inverts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum KernelVariant {
    Classical,
    Sobolev,
}

impl std::str::FromStr for KernelVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(KernelVariant::Classical),
            "sobolev" => Ok(KernelVariant::Sobolev),
            other => Err(Error::ParameterDomain(format!("unknown kernel variant {other:?}"))),
        }
    }
}

/// Diagonal kernel `𝕃_n(x,x)` or `L̃_n(x,x)`.
pub fn diagonal_kernel(cfg: &BallConfig, n: usize, x: &[f64], variant: KernelVariant) -> Result<f64> {
    let pair = KernelPointPair::diagonal(x)?;
    match variant {
        KernelVariant::Classical => classical_kernel(cfg, n, &pair),
        KernelVariant::Sobolev => sobolev_kernel_decomposed(cfg, n, &pair),
    }
}

/// `1/𝕃_n(x,x)` or `1/L̃_n(x,x)`.
pub fn christoffel(cfg: &BallConfig, n: usize, x: &[f64], variant: KernelVariant) -> Result<f64> {
    let v = diagonal_kernel(cfg, n, x, variant)?;
    if !(v > 0.0) {
        return Err(Error::Singular(format!("diagonal kernel is {v}")));
    }
    Ok(1.0 / v)
}
