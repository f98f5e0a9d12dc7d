//! `sobolev-ball`: evaluate bases and kernels, run the invariant suites, and
//! emit convergence scans and Gram matrices as CSV or JSON.
//!
//! Exit codes: 0 on success, 1 when a verification check fails, 2 on a
//! parameter or numerical error (including argument parsing).

mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use output::{Cell, Format, Table};
use sobolev_ball::asymptotics::{boundary_ratio_scan, interior_ratio_scan, BoundaryQuantity};
use sobolev_ball::ball::{classical_ball_poly, gram_matrix, BallConfig, BallIndex, BasisKind, SobolevBall};
use sobolev_ball::jacobi::{jacobi_eval, JacobiParams};
use sobolev_ball::kernels::{
    christoffel, classical_kernel, sobolev_kernel_decomposed, KernelPointPair, KernelVariant,
};
use sobolev_ball::sobolev1d::{SobolevFamily1D, SobolevMatrix2};
use sobolev_ball::verify::{run_suite, Suite, SuiteOptions};
use sobolev_ball::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "sobolev-ball", version, about = "Sobolev orthogonal polynomials on the unit ball")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a polynomial or kernel at the given points
    Eval(EvalArgs),
    /// Run an invariant suite and report measured error against tolerance
    Verify(VerifyArgs),
    /// Emit a boundary or interior ratio scan
    Scan(ScanArgs),
    /// Emit the Gram matrix of a basis under its inner product
    Gram(GramArgs),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Write output to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: machine parallelism)
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct BallArgs {
    /// Dimension of the ball
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Weight exponent μ > −1
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    mu: f64,
    /// Boundary coupling λ > 0
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
}

impl BallArgs {
    fn config(&self) -> Result<BallConfig, Error> {
        BallConfig::new(self.d, self.mu, self.lambda)
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Quantity {
    /// Jacobi polynomial P_n^(α,β)(t)
    Jacobi,
    /// Univariate Sobolev polynomial q_j^(α,β;M)(t)
    Q,
    /// Classical ball polynomial P_{j,ν}^n(x; μ)
    BallPoly,
    /// Sobolev ball polynomial Q_{j,ν}^n(x)
    SobolevBall,
    /// Reproducing kernel of degree n (points taken in pairs unless --diagonal)
    Kernel,
    /// Christoffel function 1/K_n(x,x)
    Christoffel,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Variant {
    Classical,
    Sobolev,
}

impl From<Variant> for KernelVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Classical => KernelVariant::Classical,
            Variant::Sobolev => KernelVariant::Sobolev,
        }
    }
}

/// A point `x,y[,z…]` given on the command line.
#[derive(Debug, Clone, PartialEq)]
struct Point(Vec<f64>);

fn parse_point(s: &str) -> Result<Point, String> {
    let v: Result<Vec<f64>, _> = s.split(',').map(|c| c.trim().parse::<f64>()).collect();
    match v {
        Ok(v) if !v.is_empty() && v.iter().all(|x| x.is_finite()) => Ok(Point(v)),
        Ok(_) => Err("point coordinates must be finite".into()),
        Err(e) => Err(format!("invalid point {s:?}: {e}")),
    }
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(value_enum)]
    quantity: Quantity,
    #[command(flatten)]
    ball: BallArgs,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    beta: f64,
    /// Boundary matrix entries m11,m12,m22 for `q`
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [0.0, 0.0, 0.0])]
    m: Vec<f64>,
    /// Degree n
    #[arg(long, default_value_t = 0)]
    n: usize,
    /// Radial index j
    #[arg(long, default_value_t = 0)]
    j: usize,
    /// Harmonic index ν (1-based)
    #[arg(long, default_value_t = 1)]
    nu: usize,
    /// Univariate evaluation points (comma separated or repeated)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    t: Vec<f64>,
    /// Ball point `x,y[,z…]` (repeatable)
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    point: Vec<Point>,
    /// Kernel variant
    #[arg(long, value_enum, default_value_t = Variant::Sobolev)]
    variant: Variant,
    /// Evaluate kernels on the diagonal K(x,x) for every point
    #[arg(long)]
    diagonal: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum SuiteArg {
    Orthogonality,
    KernelIdentity,
    Connection,
    Asymptotics,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Orthogonality => Suite::Orthogonality,
            SuiteArg::KernelIdentity => Suite::KernelIdentity,
            SuiteArg::Connection => Suite::Connection,
            SuiteArg::Asymptotics => Suite::Asymptotics,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: SuiteArg,
    #[command(flatten)]
    ball: BallArgs,
    /// Largest degree for the algebraic suites
    #[arg(long, default_value_t = 5)]
    max_n: usize,
    /// Largest n of the dyadic asymptotic scan n_max/16 … n_max
    #[arg(long, default_value_t = 4096)]
    n_max: usize,
    /// Override every tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Seed of the random point clouds
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Region {
    Boundary,
    Interior,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Which {
    Difference,
    Sobolev,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(value_enum)]
    region: Region,
    #[command(flatten)]
    ball: BallArgs,
    /// Degrees to scan
    #[arg(long, value_delimiter = ',', default_values_t = [256, 512, 1024, 2048, 4096])]
    n_list: Vec<usize>,
    /// Boundary quantity
    #[arg(long, value_enum, default_value_t = Which::Difference)]
    which: Which,
    /// Interior point (default: the origin)
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    point: Option<Point>,
    /// Append difference_fraction and bound_ratio columns to interior scans
    #[arg(long)]
    extended: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Basis {
    Classical,
    Sobolev,
}

#[derive(Args, Debug)]
struct GramArgs {
    #[command(flatten)]
    ball: BallArgs,
    #[arg(long, default_value_t = 3)]
    max_n: usize,
    #[arg(long, value_enum, default_value_t = Basis::Sobolev)]
    basis: Basis,
    #[command(flatten)]
    common: Common,
}

/// Outcome of a command: rendered output and whether every check passed.
struct Report {
    text: String,
    passed: bool,
}

fn ball_point(cfg: &BallConfig, x: &[f64]) -> Result<(), Error> {
    if x.len() != cfg.d() {
        return Err(Error::ParameterDomain(format!("point {x:?} must have {} coordinates", cfg.d())));
    }
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if r > 1.0 + 1e-12 {
        return Err(Error::OutsideBall(r));
    }
    Ok(())
}

fn coords_header(d: usize) -> Vec<String> {
    (1..=d).map(|i| format!("x{i}")).collect()
}

fn coords(x: &[f64]) -> Vec<Cell> {
    x.iter().map(|&v| Cell::Float(v)).collect()
}

fn eval(a: &EvalArgs) -> Result<Table, Error> {
    match a.quantity {
        Quantity::Jacobi | Quantity::Q => {
            if a.t.is_empty() {
                return Err(Error::ParameterDomain("--t is required".into()));
            }
            if let Some(t) = a.t.iter().find(|t| t.abs() > 1.0) {
                return Err(Error::ParameterDomain(format!("t = {t} outside [-1, 1]")));
            }
            let p = JacobiParams::new(a.alpha, a.beta)?;
            let (name, f): (String, Box<dyn Fn(f64) -> f64>) = if a.quantity == Quantity::Jacobi {
                (format!("jacobi[n={}]", a.n), Box::new(move |t| jacobi_eval(&p, a.n, t)))
            } else {
                let &[m11, m12, m22] = a.m.as_slice() else {
                    return Err(Error::ParameterDomain("--m takes exactly three entries m11,m12,m22".into()));
                };
                let m = SobolevMatrix2::new(m11, m12, m22)?;
                let fam = SobolevFamily1D::new(p, m, a.j)?;
                (format!("q[j={}]", a.j), Box::new(move |t| fam.eval(a.j, t)))
            };
            let mut table = Table::new(["t".to_string(), name]);
            for &t in &a.t {
                table.push(vec![t.into(), f(t).into()]);
            }
            Ok(table)
        }
        Quantity::BallPoly | Quantity::SobolevBall => {
            let cfg = a.ball.config()?;
            let idx = BallIndex::new(cfg.d(), a.n, a.j, a.nu)?;
            let name = match a.quantity {
                Quantity::BallPoly => "ball_poly",
                _ => "sobolev_ball",
            };
            let basis = match a.quantity {
                Quantity::SobolevBall => Some(SobolevBall::new(cfg, a.n)?),
                _ => None,
            };
            let mut header = coords_header(cfg.d());
            header.push(format!("{name}[n={},j={},nu={}]", a.n, a.j, a.nu));
            let mut table = Table::new(header);
            for x in required_points(a)? {
                ball_point(&cfg, x)?;
                let v = match &basis {
                    Some(b) => b.poly(idx, x)?,
                    None => classical_ball_poly(&cfg, idx, 0.0, x)?,
                };
                let mut row = coords(x);
                row.push(v.into());
                table.push(row);
            }
            Ok(table)
        }
        Quantity::Kernel | Quantity::Christoffel => {
            let cfg = a.ball.config()?;
            let pts = required_points(a)?;
            for &x in &pts {
                ball_point(&cfg, x)?;
            }
            let variant = match a.variant {
                Variant::Classical => "classical",
                Variant::Sobolev => "sobolev",
            };
            if a.quantity == Quantity::Christoffel {
                let mut header = coords_header(cfg.d());
                header.push(format!("christoffel_{variant}[n={}]", a.n));
                let mut table = Table::new(header);
                for &x in &pts {
                    let mut row = coords(x);
                    row.push(christoffel(&cfg, a.n, x, a.variant.into())?.into());
                    table.push(row);
                }
                return Ok(table);
            }
            let pairs: Vec<(&[f64], &[f64])> = if a.diagonal {
                pts.iter().map(|&x| (x, x)).collect()
            } else {
                if pts.len() % 2 != 0 {
                    return Err(Error::ParameterDomain(
                        "kernel points come in pairs x,y (or pass --diagonal)".into(),
                    ));
                }
                pts.chunks(2).map(|c| (c[0], c[1])).collect()
            };
            let mut header: Vec<String> = (1..=cfg.d()).map(|i| format!("x{i}")).collect();
            header.extend((1..=cfg.d()).map(|i| format!("y{i}")));
            header.push(format!("kernel_{variant}[n={}]", a.n));
            let mut table = Table::new(header);
            for (x, y) in pairs {
                let pair = KernelPointPair::new(x, y)?;
                let v = match a.variant {
                    Variant::Classical => classical_kernel(&cfg, a.n, &pair)?,
                    Variant::Sobolev => sobolev_kernel_decomposed(&cfg, a.n, &pair)?,
                };
                let mut row = coords(x);
                row.extend(coords(y));
                row.push(v.into());
                table.push(row);
            }
            Ok(table)
        }
    }
}

fn required_points(a: &EvalArgs) -> Result<Vec<&[f64]>, Error> {
    if a.point.is_empty() {
        return Err(Error::ParameterDomain("at least one --point is required".into()));
    }
    Ok(a.point.iter().map(|p| p.0.as_slice()).collect())
}

fn verify(a: &VerifyArgs) -> Result<Report, Error> {
    let cfg = a.ball.config()?;
    if a.tol.is_some_and(|t| !(t >= 0.0)) {
        return Err(Error::ParameterDomain("--tol must be non-negative".into()));
    }
    if a.n_max < 2 {
        return Err(Error::DegreeTooSmall { min: 2, got: a.n_max });
    }
    let opts = SuiteOptions { max_n: a.max_n, n_max_asymptotic: a.n_max, seed: a.seed, tol: a.tol };
    let results = run_suite(a.suite.into(), &cfg, &opts)?;
    let mut table = Table::new(["status", "check", "max_error", "tolerance"]);
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        table.push(vec![status.into(), r.name.clone().into(), r.max_error.into(), r.tolerance.into()]);
    }
    Ok(Report { text: table.render(a.common.format), passed: results.iter().all(|r| r.passed) })
}

fn scan(a: &ScanArgs) -> Result<Table, Error> {
    let cfg = a.ball.config()?;
    if a.n_list.is_empty() {
        return Err(Error::ParameterDomain("--n-list is empty".into()));
    }
    match a.region {
        Region::Boundary => {
            let which = match a.which {
                Which::Difference => BoundaryQuantity::Difference,
                Which::Sobolev => BoundaryQuantity::Sobolev,
            };
            let mut table = Table::new(["n", "ratio", "target", "relative_error"]);
            for r in boundary_ratio_scan(&cfg, &a.n_list, which)? {
                table.push(vec![r.n.into(), r.ratio.into(), r.target.into(), r.relative_error.into()]);
            }
            Ok(table)
        }
        Region::Interior => {
            let x = a.point.clone().map_or_else(|| vec![0.0; cfg.d()], |p| p.0);
            ball_point(&cfg, &x)?;
            let mut header = vec!["n", "ratio", "target", "relative_error"];
            if a.extended {
                header.extend(["difference_fraction", "bound_ratio"]);
            }
            let mut table = Table::new(header);
            for r in interior_ratio_scan(&cfg, &x, &a.n_list)? {
                let mut row = vec![r.n.into(), r.ratio.into(), r.target.into(), r.relative_error.into()];
                if a.extended {
                    row.extend([r.difference_fraction.into(), r.bound_ratio.into()]);
                }
                table.push(row);
            }
            Ok(table)
        }
    }
}

fn gram(a: &GramArgs) -> Result<Table, Error> {
    let cfg = a.ball.config()?;
    let kind = match a.basis {
        Basis::Classical => BasisKind::Classical,
        Basis::Sobolev => BasisKind::Sobolev,
    };
    let g = gram_matrix(&cfg, a.max_n, kind)?;
    let mut table = Table::new(["row_n", "row_j", "row_nu", "col_n", "col_j", "col_nu", "value"]);
    for (ia, row) in g.indices.iter().zip(&g.values) {
        for (ib, v) in g.indices.iter().zip(row) {
            table.push(vec![
                ia.n.into(),
                ia.j.into(),
                ia.nu.into(),
                ib.n.into(),
                ib.j.into(),
                ib.nu.into(),
                (*v).into(),
            ]);
        }
    }
    Ok(table)
}

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::Eval(a) => &a.common,
        Command::Verify(a) => &a.common,
        Command::Scan(a) => &a.common,
        Command::Gram(a) => &a.common,
    }
}

fn dispatch(cmd: &Command) -> Result<Report, Error> {
    let fmt = common(cmd).format;
    let passed = |t: Table| Report { text: t.render(fmt), passed: true };
    match cmd {
        Command::Eval(a) => eval(a).map(passed),
        Command::Verify(a) => verify(a),
        Command::Scan(a) => scan(a).map(passed),
        Command::Gram(a) => gram(a).map(passed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let opts = common(&cli.command).clone();
    if let Some(n) = opts.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let report = match dispatch(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let written = match &opts.out {
        Some(path) => std::fs::write(path, &report.text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{}", report.text);
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        eprintln!("verification failed");
        ExitCode::from(1)
    }
}
