//! Limit constants of the diagonal kernels and numerical convergence scans.
//!
//! On the sphere `‖ξ‖ = 1` (for `μ ≥ −1/2`):
//! `𝕃_n(ξ,ξ)/n^{2μ+d+1} → 2/Γ(2μ+d+2)`, `Ψ_n(ξ)/n^{2μ+d+1} → E₀` and
//! `L̃_n(ξ,ξ)/n^{2μ+d+1} → 2/(Γ(2μ+d+2)(μ+2)²)`. In the interior,
//! `L̃_n(x,x)/C(n+d,d) → c_{μ,d} (1−‖x‖²)^{−μ−1/2}`. No rates are known, so the
//! scans only report ratios and relative errors.

use crate::ball::{ln_delta_km, BallConfig};
use crate::error::{Error, Result};
use crate::jacobi::{kernel_at_one, kernel_one_ratio_01, ln_kernel_one, JacobiParams};
use crate::kernels::{classical_kernel, psi_correction, KernelPointPair};
use crate::special::{binom, ln_gamma};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::{LN_2, PI};

/// Limit constants for a ball configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitConstants {
    /// `B₀ = 2^{−μ−δ−1}/(Γ(μ+1)Γ(μ+2))`
    pub b0: f64,
    /// `D₀ = B₀(μ+1)(μ+3)/(A₀(μ+2)²)`
    pub d0: f64,
    /// `E₀ = (2/Γ(2μ+d+2))(μ+1)(μ+3)/(μ+2)²`
    pub e0: f64,
    /// `2/Γ(2μ+d+2)`
    pub boundary_classical_limit: f64,
    /// `2/(Γ(2μ+d+2)(μ+2)²)`
    pub boundary_sobolev_limit: f64,
    /// `Γ(μ+1)Γ((d+1)/2)/(√π Γ(μ+d/2+1))`
    pub interior_limit_prefactor: f64,
    /// Whether the boundary limits are established for this `μ` (`μ ≥ −1/2`).
    pub boundary_proven: bool,
}

pub fn limit_constants(cfg: &BallConfig) -> LimitConstants {
    let (mu, dl, d) = (cfg.mu(), cfg.delta(), cfg.d() as f64);
    let b0 = (-(mu + dl + 1.0) * LN_2 - ln_gamma(mu + 1.0) - ln_gamma(mu + 2.0)).exp();
    let shape = (mu + 1.0) * (mu + 3.0) / (mu + 2.0).powi(2);
    let classical = 2.0 * (-ln_gamma(2.0 * mu + d + 2.0)).exp();
    LimitConstants {
        b0,
        d0: b0 * shape / cfg.a0(),
        e0: classical * shape,
        boundary_classical_limit: classical,
        boundary_sobolev_limit: classical / (mu + 2.0).powi(2),
        interior_limit_prefactor: (ln_gamma(mu + 1.0) + ln_gamma((d + 1.0) / 2.0)
            - 0.5 * PI.ln()
            - ln_gamma(mu + d / 2.0 + 1.0))
        .exp(),
        boundary_proven: mu >= -0.5,
    }
}

/// One row of a ratio scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub n: usize,
    pub ratio: f64,
    pub target: f64,
    pub relative_error: f64,
}

impl ScanRow {
    fn new(n: usize, ratio: f64, target: f64) -> Self {
        ScanRow { n, ratio, target, relative_error: (ratio / target - 1.0).abs() }
    }
}

/// Quantity tracked by [`boundary_ratio_scan`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryQuantity {
    /// `Ψ_n(ξ) = 𝕃_n(ξ,ξ) − L̃_n(ξ,ξ)`, target `E₀`
    Difference,
    /// `L̃_n(ξ,ξ)`, target `2/(Γ(2μ+d+2)(μ+2)²)`
    Sobolev,
}

impl std::str::FromStr for BoundaryQuantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "difference" => Ok(BoundaryQuantity::Difference),
            "sobolev" => Ok(BoundaryQuantity::Sobolev),
            other => Err(Error::ParameterDomain(format!("unknown boundary quantity {other:?}"))),
        }
    }
}

fn north(d: usize) -> Vec<f64> {
    let mut e = vec![0.0; d];
    e[0] = 1.0;
    e
}

/// `𝕃_n(ξ,ξ)`, `Ψ_n(ξ)` at a boundary point (any `d ≥ 2`).
///
/// Both diagonals depend on `ξ` only through `‖ξ‖`, and their radial
/// derivative grows like `n²`, so a unit vector carrying rounding error is
/// evaluated at `e₁` instead.
pub fn boundary_diagonal(cfg: &BallConfig, n: usize, xi: &[f64]) -> Result<(f64, f64)> {
    let r = KernelPointPair::diagonal(xi)?.r;
    if (r - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnitVector(r));
    }
    let e1 = north(xi.len());
    let pair = KernelPointPair::diagonal(&e1)?;
    let classical = classical_kernel(cfg, n, &pair)?;
    let psi = psi_correction(cfg, n, &e1)?.total;
    Ok((classical, psi))
}

/// Ratios `Ψ_n(ξ)/n^{2μ+d+1}` or `L̃_n(ξ,ξ)/n^{2μ+d+1}` at `ξ = e₁`.
pub fn boundary_ratio_scan(cfg: &BallConfig, n_list: &[usize], which: BoundaryQuantity) -> Result<Vec<ScanRow>> {
    let lc = limit_constants(cfg);
    let xi = north(cfg.d());
    let expo = 2.0 * cfg.mu() + cfg.d() as f64 + 1.0;
    n_list
        .par_iter()
        .map(|&n| {
            let (classical, psi) = boundary_diagonal(cfg, n, &xi)?;
            let scale = (n.max(1) as f64).powf(expo);
            Ok(match which {
                BoundaryQuantity::Difference => ScanRow::new(n, psi / scale, lc.e0),
                BoundaryQuantity::Sobolev => ScanRow::new(n, (classical - psi) / scale, lc.boundary_sobolev_limit),
            })
        })
        .collect()
}

/// One row of [`interior_ratio_scan`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InteriorRow {
    pub n: usize,
    pub ratio: f64,
    pub target: f64,
    pub relative_error: f64,
    /// `(𝕃_n − L̃_n)/𝕃_n`
    pub difference_fraction: f64,
    /// `(𝕃_n − L̃_n)/(n^{d−1} ln n)`, the growth-order check
    pub bound_ratio: f64,
}

/// Ratios `L̃_n(x,x)/C(n+d,d)` at an interior point.
pub fn interior_ratio_scan(cfg: &BallConfig, x: &[f64], n_list: &[usize]) -> Result<Vec<InteriorRow>> {
    let pair = KernelPointPair::diagonal(x)?;
    if pair.x.len() != cfg.d() {
        return Err(Error::ParameterDomain(format!("point must have {} coordinates", cfg.d())));
    }
    if pair.r >= 1.0 {
        return Err(Error::OutsideBall(pair.r));
    }
    let lc = limit_constants(cfg);
    let target = lc.interior_limit_prefactor * (1.0 - pair.r * pair.r).powf(-cfg.mu() - 0.5);
    let d = cfg.d();
    n_list
        .par_iter()
        .map(|&n| {
            let classical = classical_kernel(cfg, n, &pair)?;
            let psi = psi_correction(cfg, n, x)?.total;
            let sob = classical - psi;
            let ratio = sob / binom((n + d) as f64, d);
            let nf = n as f64;
            let growth = nf.powi(d as i32 - 1) * nf.ln();
            Ok(InteriorRow {
                n,
                ratio,
                target,
                relative_error: (ratio / target - 1.0).abs(),
                difference_fraction: psi / classical,
                bound_ratio: if growth > 0.0 { psi / growth } else { f64::NAN },
            })
        })
        .collect()
}

/// `Ψ_{n,1}` and `Ψ_{n,2}` (cutoff `n − ⌊ln n⌋`) at `ξ = e₁`, both over `n^{2μ+d+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitRow {
    pub n: usize,
    pub head_ratio: f64,
    pub tail_ratio: f64,
}

pub fn psi_split_scan(cfg: &BallConfig, n_list: &[usize]) -> Result<Vec<SplitRow>> {
    let xi = north(cfg.d());
    let expo = 2.0 * cfg.mu() + cfg.d() as f64 + 1.0;
    n_list
        .par_iter()
        .map(|&n| {
            let (head, tail) = psi_correction(cfg, n, &xi)?.split();
            let scale = (n.max(1) as f64).powf(expo);
            Ok(SplitRow { n, head_ratio: head / scale, tail_ratio: tail / scale })
        })
        .collect()
}

/// Exact kernel values at `(1,1)` against their `m → ∞` asymptotic forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelAsymptoticRow {
    pub m: usize,
    /// `2^k K_m(1,1)/((m+k)^{μ+1} m^{μ+1} B₀)`, tends to 1
    pub k00_limit_ratio: f64,
    /// `(K^{(0,1)}/K) / ((m+μ+k+δ+2)m/(2(μ+2)))`, identically 1
    pub k01_exact_ratio: f64,
    /// `(K^{(0,1)}/K) / ((m+k)m/(2(μ+2)))`, tends to 1
    pub k01_limit_ratio: f64,
    /// `(K^{(1,1)}/K)` over its exact pre-limit form, identically 1
    pub k11_exact_ratio: f64,
    /// `(K^{(1,1)}/K) / ((m+k)²m²/(4(μ+1)(μ+3)))`, tends to 1
    pub k11_limit_ratio: f64,
    /// `2^{2k} F_{k,m}(1) / (D₀ (m+k)^{μ+1} m^{μ+1})`, tends to 1
    pub f_limit_ratio: f64,
}

pub fn kernel_value_asymptotic_check(cfg: &BallConfig, k: usize, m_list: &[usize]) -> Result<Vec<KernelAsymptoticRow>> {
    let lc = limit_constants(cfg);
    let (mu, dl) = (cfg.mu(), cfg.delta());
    let p: JacobiParams = cfg.radial_params(k, 0.0)?;
    let kf = k as f64;
    m_list
        .iter()
        .map(|&m| {
            if m == 0 {
                return Err(Error::DegreeTooSmall { min: 1, got: 0 });
            }
            let mf = m as f64;
            let (k00, k01, k11) = kernel_at_one(&p, m);
            let r01 = k01 / k00;
            let r11 = k11 / k00;
            let exact01 = (mf + mu + kf + dl + 2.0) * mf / (2.0 * (mu + 2.0));
            let exact11 = (mf + mu + kf + dl + 2.0) * mf / (4.0 * (mu + 1.0) * (mu + 2.0) * (mu + 3.0))
                * ((mu + 2.0) * mf * (mf + mu + kf + dl + 2.0) + kf + dl);
            let growth = ((mu + 1.0) * ((mf + kf).ln() + mf.ln())).exp();
            // 2^{2k} F_{k,m}(1) = 2^{2k} K² (k + 4 r01)² / Δ
            let ln_f = 2.0 * kf * LN_2 + 2.0 * ln_kernel_one(&p, m) + 2.0 * (kf + 4.0 * kernel_one_ratio_01(&p, m)).ln()
                - ln_delta_km(cfg, k, m);
            Ok(KernelAsymptoticRow {
                m,
                k00_limit_ratio: (kf * LN_2 + ln_kernel_one(&p, m)).exp() / (growth * lc.b0),
                k01_exact_ratio: r01 / exact01,
                k01_limit_ratio: r01 / ((mf + kf) * mf / (2.0 * (mu + 2.0))),
                k11_exact_ratio: r11 / exact11,
                k11_limit_ratio: r11 / ((mf + kf).powi(2) * mf * mf / (4.0 * (mu + 1.0) * (mu + 3.0))),
                f_limit_ratio: ln_f.exp() / (lc.d0 * growth),
            })
        })
        .collect()
}

/// `|ratio/target − 1|` decreases strictly along the scan.
pub fn strictly_decreasing_errors(errors: &[f64]) -> bool {
    errors.windows(2).all(|w| w[1] < w[0])
}
