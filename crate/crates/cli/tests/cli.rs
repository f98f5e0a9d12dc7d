use sobolev_ball::asymptotics::limit_constants;
use sobolev_ball::ball::BallConfig;
use sobolev_ball::kernels::{sobolev_kernel_decomposed, KernelPointPair};
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sobolev-ball")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn last_value(csv: &str) -> f64 {
    csv.lines().nth(1).unwrap().rsplit(',').next().unwrap().parse().unwrap()
}

#[test]
fn eval_jacobi_at_one() {
    let o = run(&["eval", "jacobi", "--alpha", "0", "--beta", "0", "--n", "3", "--t", "1"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert_eq!(s.lines().next(), Some("t,jacobi[n=3]"));
    assert_eq!(last_value(&s), 1.0);
}

#[test]
fn eval_sobolev_ball_constant() {
    let o = run(&[
        "eval", "sobolev-ball", "--d", "3", "--mu", "0", "--lambda", "1", "--n", "0", "--j", "0", "--nu", "1", "--point",
        "0,0,0",
    ]);
    assert!(o.status.success());
    assert_eq!(last_value(&stdout(&o)), 1.0);
}

#[test]
fn eval_kernel_matches_library_bit_for_bit() {
    let (x, y) = ([0.1, -0.2, 0.3], [-0.5, 0.25, 0.0]);
    let o = run(&[
        "eval", "kernel", "--variant", "sobolev", "--d", "3", "--mu", "0.5", "--lambda", "2", "--n", "2", "--point",
        "0.1,-0.2,0.3", "--point", "-0.5,0.25,0",
    ]);
    assert!(o.status.success());
    let cfg = BallConfig::new(3, 0.5, 2.0).unwrap();
    let want = sobolev_kernel_decomposed(&cfg, 2, &KernelPointPair::new(&x, &y).unwrap()).unwrap();
    let line = stdout(&o).lines().nth(1).unwrap().to_string();
    assert!(line.ends_with(&format!(",{want:.16e}")), "{line}");
    assert_eq!(last_value(&stdout(&o)).to_bits(), want.to_bits());
}

#[test]
fn verify_orthogonality_passes() {
    let o = run(&["verify", "orthogonality", "--d", "2", "--mu", "0", "--lambda", "1", "--max-n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(s.lines().next(), Some("status,check,max_error,tolerance"));
    for line in s.lines().skip(1) {
        assert!(line.starts_with("PASS,"), "{line}");
        let f: Vec<&str> = line.split(',').collect();
        assert!(f[2].parse::<f64>().unwrap() < 1e-10);
    }
}

#[test]
fn verify_kernel_identity_passes() {
    let o = run(&["verify", "kernel-identity", "--d", "3", "--mu", "1", "--lambda", "0.5", "--max-n", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn verify_asymptotics_passes() {
    let o = run(&["verify", "asymptotics", "--d", "3", "--mu", "0", "--lambda", "1", "--n-max", "4096"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("final relative error"));
}

#[test]
fn failed_check_exits_one() {
    let o = run(&["verify", "connection", "--d", "2", "--max-n", "3", "--tol", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL,"));
}

#[test]
fn parameter_errors_exit_two() {
    for args in [
        &["eval", "jacobi", "--alpha", "-2", "--t", "0"][..],
        &["eval", "ball-poly", "--d", "2", "--point", "1,1"],
        &["eval", "sobolev-ball", "--d", "2", "--n", "1", "--j", "1", "--point", "0,0"],
        &["verify", "orthogonality", "--lambda", "0"],
        &["verify", "nonsense"],
        &["scan", "interior", "--d", "2", "--point", "1,0"],
        &["eval", "q", "--m", "1,2", "--t", "0"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn scan_header_and_target() {
    let o = run(&["scan", "boundary", "--d", "3", "--mu", "0", "--n-list", "16,32,64"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("n,ratio,target,relative_error"));
    let e0 = limit_constants(&BallConfig::new(3, 0.0, 1.0).unwrap()).e0;
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 3);
    for r in &rows {
        assert_eq!(r[2], e0);
    }

    let o = run(&["scan", "interior", "--d", "2", "--mu", "0", "--n-list", "8,16"]);
    let s = stdout(&o);
    assert_eq!(s.lines().next(), Some("n,ratio,target,relative_error"));
    assert!(s.lines().skip(1).all(|l| l.split(',').nth(2).unwrap().parse::<f64>().unwrap() == 0.5));
}

#[test]
fn output_is_deterministic_across_threads() {
    let base = ["verify", "kernel-identity", "--d", "2", "--mu", "0.5", "--max-n", "4", "--seed", "7"];
    let a = run(&[&base[..], &["--threads", "1"]].concat());
    let b = run(&[&base[..], &["--threads", "4"]].concat());
    let c = run(&base);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);

    let scan = ["scan", "boundary", "--d", "3", "--n-list", "100,200,300,400"];
    let a = run(&[&scan[..], &["--threads", "1"]].concat());
    let b = run(&[&scan[..], &["--threads", "3"]].concat());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_mirrors_csv() {
    let args = ["scan", "boundary", "--d", "2", "--n-list", "10,20"];
    let csv = stdout(&run(&args));
    let json = stdout(&run(&[&args[..], &["--format", "json"]].concat()));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    for (i, line) in csv.lines().skip(1).enumerate() {
        let ratio: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(v[i]["ratio"].as_f64().unwrap(), ratio);
        assert_eq!(v[i]["n"].as_u64().unwrap(), [10, 20][i]);
    }
}

#[test]
fn gram_output_and_out_file() {
    let dir = std::env::temp_dir().join(format!("sobolev-ball-gram-{}", std::process::id()));
    let path = dir.with_extension("csv");
    let o = run(&["gram", "--d", "2", "--max-n", "2", "--basis", "sobolev", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let s = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(s.lines().next(), Some("row_n,row_j,row_nu,col_n,col_j,col_nu,value"));
    // 6 basis elements of degree ≤ 2 in two variables
    assert_eq!(s.lines().count(), 1 + 36);
    for line in s.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let v: f64 = f[6].parse().unwrap();
        if f[..3] != f[3..6] {
            assert!(v.abs() < 1e-12, "{line}");
        } else {
            assert!(v > 0.0);
        }
    }
}
