use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn wht(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wht"))
        .args(args)
        .current_dir(dir)
        .env_remove("WHT_MAX_QUBITS")
        .output()
        .expect("run wht")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn numbers(text: &str) -> Vec<f64> {
    text.lines().map(|l| l.trim().parse().unwrap()).collect()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Column `x` of a solution CSV.
fn solution_column(path: &Path) -> Vec<f64> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect()
}

fn ramp_dir() -> TempDir {
    let dir = TempDir::new().unwrap();
    fs::write(
        dir.path().join("ramp.txt"),
        "# midpoint ramp\n0.125\n0.375\n\n0.625\n0.875\n",
    )
    .unwrap();
    dir
}

#[test]
fn transform_backends_agree() {
    let dir = ramp_dir();
    let fast = wht(&["transform", "-i", "ramp.txt"], dir.path());
    assert!(fast.status.success());
    assert!(max_diff(&numbers(&stdout(&fast)), &[1.0, -0.25, -0.5, 0.0]) < 1e-12);

    for backend in ["naive", "hybrid-exact"] {
        let o = wht(
            &["transform", "-i", "ramp.txt", "--backend", backend],
            dir.path(),
        );
        assert!(o.status.success(), "{backend}");
        assert!(max_diff(&numbers(&stdout(&o)), &[1.0, -0.25, -0.5, 0.0]) < 1e-12);
    }
}

#[test]
fn transform_inverse_round_trip() {
    let dir = ramp_dir();
    let o = wht(
        &[
            "transform",
            "-i",
            "ramp.txt",
            "-o",
            "coeffs.txt",
            "--report",
            "r.json",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    let o = wht(&["transform", "-i", "coeffs.txt", "--inverse"], dir.path());
    assert!(max_diff(&numbers(&stdout(&o)), &[0.125, 0.375, 0.625, 0.875]) < 1e-12);

    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(report["subcommand"], "transform");
    assert_eq!(report["op_counts"]["additions"], 8);
    assert_eq!(report["n"], 2);
}

#[test]
fn transform_output_is_reproducible() {
    let dir = ramp_dir();
    for name in ["a.txt", "b.txt"] {
        let o = wht(
            &[
                "transform",
                "-i",
                "ramp.txt",
                "--backend",
                "hybrid-exact",
                "-o",
                name,
            ],
            dir.path(),
        );
        assert!(o.status.success());
    }
    let a = fs::read(dir.path().join("a.txt")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b.txt")).unwrap());
}

#[test]
fn sampled_transform_needs_seed() {
    let dir = ramp_dir();
    let o = wht(
        &[
            "transform",
            "-i",
            "ramp.txt",
            "--backend",
            "hybrid-sampled",
            "--shots",
            "1000",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    let args = [
        "transform",
        "-i",
        "ramp.txt",
        "--backend",
        "hybrid-sampled",
        "--shots",
        "100000",
        "--seed",
        "9",
    ];
    let a = wht(&args, dir.path());
    let b = wht(&args, dir.path());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(max_diff(&numbers(&stdout(&a)), &[1.0, -0.25, -0.5, 0.0]) < 0.05);
}

#[test]
fn transform_input_errors() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("three.txt"), "1\n2\n3\n").unwrap();
    fs::write(dir.path().join("bad.txt"), "1\nfoo\n").unwrap();
    assert_eq!(
        wht(&["transform", "-i", "three.txt"], dir.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        wht(&["transform", "-i", "bad.txt"], dir.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        wht(&["transform", "-i", "missing.txt"], dir.path())
            .status
            .code(),
        Some(4)
    );
    assert_eq!(wht(&["transform"], dir.path()).status.code(), Some(2));
}

#[test]
fn tables() {
    let dir = TempDir::new().unwrap();
    let i4 = wht(&["table", "--kind", "integration", "--n", "2"], dir.path());
    assert_eq!(
        stdout(&i4),
        "0.5,0.125,0.25,0\n-0.125,0,0,0\n-0.25,0,0,0.125\n0,0,-0.125,0\n"
    );
    let d4 = wht(
        &["table", "--kind", "differentiation", "--n", "2"],
        dir.path(),
    );
    assert_eq!(stdout(&d4), "0,-8,0,0\n8,32,0,16\n0,0,0,-8\n0,-16,8,0\n");
    let c = wht(&["table", "--kind", "character", "--n", "1"], dir.path());
    assert_eq!(stdout(&c), "1,1\n1,-1\n");
}

#[test]
fn table_cap_from_environment() {
    let dir = TempDir::new().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_wht"))
        .args(["table", "--kind", "character", "--n", "4"])
        .env("WHT_MAX_QUBITS", "3")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
}

#[test]
fn solve_riccati_sweep_ten() {
    let dir = TempDir::new().unwrap();
    let o = wht(
        &[
            "solve",
            "--problem",
            "riccati",
            "--n",
            "2",
            "--nmax",
            "10",
            "--tol",
            "0",
            "--report",
            "r.json",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let x = solution_column(&dir.path().join("riccati_x1.csv"));
    assert!(max_diff(&x, &[-0.40512, -0.20567, 0.02743, 0.33735]) < 5e-5);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(report["iterations"], 10);
}

#[test]
fn solve_system_sweep_eight() {
    let dir = TempDir::new().unwrap();
    let o = wht(
        &[
            "solve",
            "--problem",
            "beer_system",
            "--n",
            "2",
            "--nmax",
            "8",
            "--tol",
            "0",
            "--trace",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    let x1 = solution_column(&dir.path().join("beer_system_x1.csv"));
    let x2 = solution_column(&dir.path().join("beer_system_x2.csv"));
    assert!(max_diff(&x1, &[0.11960814, 0.33997528, 0.51224524, 0.62590886]) < 1e-7);
    assert!(max_diff(&x2, &[0.95686836, 0.80607053, 0.57178512, 0.33552362]) < 1e-7);
    let trace = fs::read_to_string(dir.path().join("beer_system_trace.csv")).unwrap();
    // header + 8 sweeps x 2 variables x 4 samples
    assert_eq!(trace.lines().count(), 1 + 8 * 2 * 4);
}

#[test]
fn expression_path_matches_builtin() {
    let dir = TempDir::new().unwrap();
    let a = wht(
        &["solve", "--problem", "riccati", "--nmax", "10"],
        dir.path(),
    );
    let b = wht(
        &[
            "solve",
            "--rhs",
            "x1^2+x1+1",
            "--init",
            "-0.5",
            "--nmax",
            "10",
        ],
        dir.path(),
    );
    assert!(a.status.success() && b.status.success());
    let native = solution_column(&dir.path().join("riccati_x1.csv"));
    let parsed = solution_column(&dir.path().join("custom_x1.csv"));
    assert_eq!(native, parsed);
}

#[test]
fn solve_errors() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        wht(&["solve", "--rhs", "2x1", "--init", "1"], dir.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        wht(&["solve", "--rhs", "x3", "--init", "1"], dir.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        wht(&["solve", "--problem", "lorenz"], dir.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        wht(&["solve", "--rhs", "x1", "--init", "1", "2"], dir.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        wht(
            &["solve", "--problem", "riccati", "--nmax", "0"],
            dir.path()
        )
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        wht(
            &[
                "solve",
                "--problem",
                "riccati",
                "--backend",
                "hybrid-sampled",
                "--shots",
                "10"
            ],
            dir.path()
        )
        .status
        .code(),
        Some(2)
    );
    let blowup = wht(
        &[
            "solve", "--rhs", "x1^2", "--init", "1", "--domain", "0", "4", "--nmax", "50",
            "--trace",
        ],
        dir.path(),
    );
    assert_eq!(blowup.status.code(), Some(3));
    assert!(dir.path().join("custom_trace.csv").exists());
    let domain = wht(&["solve", "--rhs", "log(x1)", "--init", "-1"], dir.path());
    assert_eq!(domain.status.code(), Some(3));
}

#[test]
fn bench_counts() {
    let dir = TempDir::new().unwrap();
    let o = wht(
        &[
            "bench",
            "--sizes",
            "2,1024,2048",
            "--backend",
            "fast,hybrid-exact",
            "--repeats",
            "1",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<Vec<String>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    let find = |n: &str, b: &str| {
        rows.iter()
            .find(|r| r[0] == n && r[1] == b)
            .unwrap()
            .clone()
    };
    assert_eq!(find("2", "fast")[2], "2");
    assert_eq!(find("1024", "fast")[2], "10240");
    let t1: f64 = find("1024", "hybrid-exact")[5].parse().unwrap();
    let t2: f64 = find("2048", "hybrid-exact")[5].parse().unwrap();
    assert!((t2 / t1 - 2.0).abs() <= 0.02);
    assert_eq!(
        wht(&["bench", "--sizes", "3"], dir.path()).status.code(),
        Some(2)
    );
}
