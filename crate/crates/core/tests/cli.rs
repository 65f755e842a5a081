//! End-to-end runs of the `quasilin` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use quasilin::cli::{run_args, AlgebraFile, BUILTINS};

fn quasilin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quasilin")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("quasilin-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &std::path::Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn every_builtin_exports_and_reloads_identically() {
    let dir = scratch("export");
    for name in BUILTINS {
        let out = quasilin(&["export", name, "--out", dir.to_str().unwrap()]);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        for path in stdout(&out).lines() {
            let text = std::fs::read_to_string(path).unwrap();
            let file = AlgebraFile::from_json(&text).unwrap();
            // Reloading and exporting again reproduces the file byte for byte.
            let again = quasilin(&["export", path]);
            assert!(again.status.success(), "{path}");
            assert_eq!(stdout(&again), text, "{path}");
            assert_eq!(file.load().unwrap().export(), vec![file], "{path}");
        }
    }
}

#[test]
fn verify_is_deterministic_across_thread_counts() {
    let single = Command::new(env!("CARGO_BIN_EXE_quasilin"))
        .args(["verify", "--suite", "all", "--seed", "3"])
        .env("QUASILIN_THREADS", "1")
        .output()
        .unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_quasilin"))
        .args(["verify", "--suite", "all", "--seed", "3"])
        .env("QUASILIN_THREADS", "4")
        .output()
        .unwrap();
    assert!(single.status.success());
    assert_eq!(single.stdout, many.stdout);
    let json = quasilin(&["verify", "--suite", "onsager", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(value["checks"].as_array().unwrap().len(), 18);
}

#[test]
fn exit_codes() {
    let zero_q = quasilin(&["verify", "--suite", "aw", "--param", "q=0"]);
    assert_eq!(zero_q.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&zero_q.stderr).contains("parameter error"));
    assert!(zero_q.stdout.is_empty());

    assert_eq!(quasilin(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(quasilin(&["verify", "--suite", "qosc", "--param", "zeta=1"]).status.code(), Some(2));
    assert_eq!(quasilin(&["verify", "--suite", "qosc", "--param", "q=3/4"]).status.code(), Some(0));

    // A failing check is exit 1, distinct from input errors.
    let random = quasilin(&["detect", "--rep", "random_tridiagonal:10:4"]);
    assert_eq!(random.status.code(), Some(1));
    assert!(stdout(&random).contains("FAIL  closure"));
    assert!(stdout(&random).contains("FAIL  tridiagonal relations"));
}

#[test]
fn poisson_files() {
    let dir = scratch("poisson");
    let nambu = write(
        &dir,
        "nambu.json",
        r#"{"kind": "poisson", "vars": ["x", "y", "z"], "brackets": {"y,z": "y*z", "z,x": "x*z", "x,y": "x*y"}}"#,
    );
    assert!(quasilin(&["jacobi", &nambu]).status.success());

    let cyclic = write(
        &dir,
        "cyclic.json",
        r#"{"kind": "poisson", "vars": ["x", "y", "z"], "brackets": {"y,z": "z", "z,x": "x", "x,y": "y"}}"#,
    );
    let out = quasilin(&["jacobi", &cyclic]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("defect = "));
    let out = quasilin(&["classify", &cyclic]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("unclassified (Jacobi identity violated"));

    let aw = write(
        &dir,
        "aw.json",
        r#"{"kind": "poisson", "vars": ["x", "y", "z"], "params": {"a": "2"},
            "brackets": {"y,z": "a*y*z + x + 1", "z,x": "a*x*z + y - 3", "x,y": "a*x*y + z + 5"}}"#,
    );
    let out = quasilin(&["classify", &aw]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("note: case (i)"));

    let q = write(&dir, "q.json", r#"{"kind": "poisson", "vars": ["x", "y"], "brackets": {"x,y": "3*x*y - 1"}}"#);
    let out = quasilin(&["classify", &q]);
    assert!(stdout(&out).contains("(2,0): canonical q-oscillator bracket"));
    assert!(quasilin(&["jacobi", &q]).status.success());

    let out = quasilin(&["flow", &q, "--hamiltonian", "y", "--t", "0,0.5", "--h", "1/2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let broken = write(&dir, "broken.json", "{\n  \"kind\": \"poisson\",\n  \"vars\": [\"x\"],\n  \"brackets\": 7\n}");
    let out = quasilin(&["jacobi", &broken]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));
}

#[test]
fn flow_tables() {
    let out = run_args(["quasilin", "flow", "qosc", "--t", "0.1", "--rep", "qosc:40:1/2", "--tol", "1e-12", "--format", "csv"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let mut lines = out.stdout.lines();
    assert_eq!(lines.next(), Some("t,target,component,value_re,value_im,oracle_dev"));
    for line in lines {
        let dev: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(dev < 1e-12, "{line}");
    }
    let out = run_args(["quasilin", "flow", "dg_pauli", "--hamiltonian", "A1", "--t", "-1:1:21", "--format", "csv"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let rows: Vec<&str> = out.stdout.lines().filter(|l| l.contains(",A0,proj:A0,")).collect();
    assert_eq!(rows.len(), 21);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        let (t, v): (f64, f64) = (cols[0].parse().unwrap(), cols[3].parse().unwrap());
        assert!((v - (2.0 * t).cosh()).abs() < 1e-10, "{row}");
    }
    let out = run_args(["quasilin", "flow", "dg_pauli", "--hamiltonian", "A7"]);
    assert_eq!(out.code, 2);
}

#[test]
fn difference_operator_file() {
    let dir = scratch("difference");
    let file = write(
        &dir,
        "q_racah_like.json",
        r#"{"kind": "difference_op", "d": 10, "params": {"q": "1/2"},
            "A": "1 - q^s", "B": "0", "C": "1 - q^-s",
            "grid": {"kind": "q_quadratic", "q": "1/2", "c1": "1", "c2": "1"}}"#,
    );
    let out = quasilin(&["detect", &file]);
    assert!(stdout(&out).contains("grid: q-quadratic"), "{}", stdout(&out));
    let out = quasilin(&["detect", "krawtchouk", "--deg", "2,1,2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("linear (degenerate AW)"));
}
