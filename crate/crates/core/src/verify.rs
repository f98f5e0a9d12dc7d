//! Invariant suites with measured error against tolerance.
//!
//! Each suite returns one [`CheckResult`] per check; the command-line front
//! end only formats these.

use crate::asymptotics::{boundary_ratio_scan, interior_ratio_scan, strictly_decreasing_errors, BoundaryQuantity};
use crate::ball::{ball_connection, ball_indices_up_to, gram_matrix, BallConfig, BasisKind, SobolevBall};
use crate::error::Result;
use crate::kernels::{classical_kernel, psi_correction, sobolev_kernel_decomposed, sobolev_kernel_direct, KernelPointPair};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, max_error: f64, tolerance: f64) -> Self {
        // NaN never passes
        let passed = max_error <= tolerance;
        CheckResult { name: name.into(), max_error, tolerance, passed }
    }
}

/// Uniform point in the closed unit ball.
pub fn random_ball_point(rng: &mut impl Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if v.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
            return v;
        }
    }
}

/// Named suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Orthogonality,
    KernelIdentity,
    Connection,
    Asymptotics,
    All,
}

impl std::str::FromStr for Suite {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "orthogonality" => Suite::Orthogonality,
            "kernel-identity" => Suite::KernelIdentity,
            "connection" => Suite::Connection,
            "asymptotics" => Suite::Asymptotics,
            "all" => Suite::All,
            other => return Err(crate::Error::ParameterDomain(format!("unknown suite {other:?}"))),
        })
    }
}

/// Tunables shared by the suites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    pub max_n: usize,
    pub n_max_asymptotic: usize,
    pub seed: u64,
    /// overrides every tolerance when set
    pub tol: Option<f64>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { max_n: 5, n_max_asymptotic: 4096, seed: 0, tol: None }
    }
}

impl SuiteOptions {
    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

/// Gram matrix of `{Q_{j,ν}^n : n ≤ max_n}` under the exact Sobolev inner product.
pub fn orthogonality_suite(cfg: &BallConfig, opts: &SuiteOptions) -> Result<Vec<CheckResult>> {
    let g = gram_matrix(cfg, opts.max_n, BasisKind::Sobolev)?;
    let c = gram_matrix(cfg, opts.max_n, BasisKind::Classical)?;
    Ok(vec![
        CheckResult::new("sobolev gram off-diagonal", g.max_off_diagonal(), opts.tol(1e-10)),
        CheckResult::new("sobolev gram diagonal vs norm", g.max_diagonal_error(), opts.tol(1e-10)),
        CheckResult::new("classical gram off-diagonal", c.max_off_diagonal(), opts.tol(1e-10)),
        CheckResult::new("classical gram diagonal vs norm", c.max_diagonal_error(), opts.tol(1e-10)),
    ])
}

/// Decomposed versus direct Sobolev kernel and the diagonal `Ψ_n` identity, 20 pairs per degree.
pub fn kernel_identity_suite(cfg: &BallConfig, opts: &SuiteOptions) -> Result<Vec<CheckResult>> {
    let basis = SobolevBall::new(*cfg, opts.max_n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let d = cfg.d();
    let (mut off, mut diag) = (0.0f64, 0.0f64);
    for n in 0..=opts.max_n {
        for _ in 0..20 {
            let x = random_ball_point(&mut rng, d);
            let y = random_ball_point(&mut rng, d);
            let pair = KernelPointPair::new(&x, &y)?;
            let dx = KernelPointPair::diagonal(&x)?;
            let scale = sobolev_kernel_direct(&basis, n, &dx)?;
            let direct = sobolev_kernel_direct(&basis, n, &pair)?;
            let dec = sobolev_kernel_decomposed(cfg, n, &pair)?;
            off = off.max((direct - dec).abs() / scale);
            let via_psi = classical_kernel(cfg, n, &dx)? - psi_correction(cfg, n, &x)?.total;
            diag = diag.max((via_psi - scale).abs() / scale);
        }
    }
    Ok(vec![
        CheckResult::new("decomposed vs direct sobolev kernel", off, opts.tol(1e-9)),
        CheckResult::new("diagonal identity L~ = L - Psi", diag, opts.tol(1e-9)),
    ])
}

/// `μ+2` ball-polynomial expansion versus direct `Q`, 50 points, plus coefficient agreement.
pub fn connection_suite(cfg: &BallConfig, opts: &SuiteOptions) -> Result<Vec<CheckResult>> {
    let basis = SobolevBall::new(*cfg, opts.max_n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let pts: Vec<_> = (0..50).map(|_| random_ball_point(&mut rng, cfg.d())).collect();
    let mut pointwise = 0.0f64;
    for idx in ball_indices_up_to(cfg.d(), opts.max_n) {
        for x in &pts {
            let a = basis.poly(idx, x)?;
            let b = basis.connection_eval(idx, x)?;
            pointwise = pointwise.max((a - b).abs() / a.abs().max(1.0));
        }
    }
    let mut coeffs = 0.0f64;
    for n in 0..=opts.max_n {
        for j in 0..=n / 2 {
            let c = ball_connection(cfg, n, j);
            let u = basis.family(n - 2 * j).connection_coeffs(j);
            for (x, y) in [(c.b_jj, u.b_jj), (c.b_jjm1, u.b_jjm1), (c.b_jjm2, u.b_jjm2)] {
                coeffs = coeffs.max((x - y).abs() / y.abs().max(1.0));
            }
        }
    }
    Ok(vec![
        CheckResult::new("connection expansion vs direct Q", pointwise, opts.tol(1e-9)),
        CheckResult::new("connection coefficients vs univariate", coeffs, opts.tol(1e-12)),
    ])
}

/// Dyadic list `n_max/16, …, n_max` (deduplicated, at least 2).
pub fn dyadic_list(n_max: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..5).rev().map(|s| (n_max >> s).max(2)).collect();
    v.dedup();
    v
}

fn trend_check(name: &str, errors: &[f64], cap: f64) -> Vec<CheckResult> {
    let trend = if strictly_decreasing_errors(errors) { 0.0 } else { 1.0 };
    vec![
        CheckResult::new(format!("{name}: error strictly decreasing"), trend, 0.0),
        CheckResult::new(format!("{name}: final relative error"), *errors.last().unwrap_or(&f64::NAN), cap),
    ]
}

/// Boundary scans of `Ψ_n` and `L̃_n` and the interior scan at the origin.
pub fn asymptotics_suite(cfg: &BallConfig, opts: &SuiteOptions) -> Result<Vec<CheckResult>> {
    let ns = dyadic_list(opts.n_max_asymptotic);
    let cap = opts.tol(0.10);
    let mut out = Vec::new();
    let diff = boundary_ratio_scan(cfg, &ns, BoundaryQuantity::Difference)?;
    out.extend(trend_check("boundary difference ratio", &diff.iter().map(|r| r.relative_error).collect::<Vec<_>>(), cap));
    let sob = boundary_ratio_scan(cfg, &ns, BoundaryQuantity::Sobolev)?;
    out.extend(trend_check("boundary sobolev ratio", &sob.iter().map(|r| r.relative_error).collect::<Vec<_>>(), cap));
    let origin = vec![0.0; cfg.d()];
    let int = interior_ratio_scan(cfg, &origin, &ns)?;
    out.extend(trend_check("interior ratio at origin", &int.iter().map(|r| r.relative_error).collect::<Vec<_>>(), cap));
    let frac: Vec<f64> = int.iter().map(|r| r.difference_fraction).collect();
    out.push(CheckResult::new(
        "interior difference fraction decreasing",
        if strictly_decreasing_errors(&frac) { 0.0 } else { 1.0 },
        0.0,
    ));
    Ok(out)
}

pub fn run_suite(suite: Suite, cfg: &BallConfig, opts: &SuiteOptions) -> Result<Vec<CheckResult>> {
    Ok(match suite {
        Suite::Orthogonality => orthogonality_suite(cfg, opts)?,
        Suite::KernelIdentity => kernel_identity_suite(cfg, opts)?,
        Suite::Connection => connection_suite(cfg, opts)?,
        Suite::Asymptotics => asymptotics_suite(cfg, opts)?,
        Suite::All => {
            let mut v = orthogonality_suite(cfg, opts)?;
            v.extend(kernel_identity_suite(cfg, opts)?);
            v.extend(connection_suite(cfg, opts)?);
            v.extend(asymptotics_suite(cfg, opts)?);
            v
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_lists() {
        assert_eq!(dyadic_list(4096), vec![256, 512, 1024, 2048, 4096]);
        assert_eq!(dyadic_list(8), vec![2, 4, 8]);
    }

    #[test]
    fn nan_fails() {
        assert!(!CheckResult::new("x", f64::NAN, 1.0).passed);
    }
}
