use std::fs;
use std::path::PathBuf;
use std::process::Command as Process;

use arstat::{run, EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_PASS};
use serde_json::Value;

fn arstat(line: &str) -> arstat::RunResult {
    run(std::iter::once("arstat").chain(line.split_whitespace()))
}

fn report(line: &str) -> Value {
    let out = arstat(line);
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{line}: {e}\n{}", out.stderr))
}

/// Compares against `tests/golden/<name>`; `UPDATE_GOLDEN=1` rewrites it.
fn golden(name: &str, line: &str) {
    let out = arstat(line);
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, &out.stdout).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(out.stdout, expected, "{line} no longer matches {name}");
}

#[test]
fn golden_reports() {
    golden(
        "basis_bosonic.json",
        "--sector bosonic --modes 2 --k 3 --cutoff 2 basis",
    );
    golden(
        "algebra_fermionic.json",
        "--sector fermionic --modes 2 --k 3 verify-algebra --samples 4",
    );
    golden(
        "heisenberg_bosonic.json",
        "--sector bosonic --modes 2 --k 2 --cutoff 4 --energies 1,2.5 verify-heisenberg",
    );
    golden(
        "bargmann_two.json",
        "--modes 1 --k 3 --cutoff 5 verify-bargmann --kind II",
    );
    golden(
        "coherent_kp.json",
        "--modes 1 --k 2 --cutoff 12 coherent --family kp --point 0.3+0.2i --overlap-with -0.1i",
    );
    golden(
        "measure_ball.json",
        "--modes 1 --k 3 verify-measure --family ball",
    );
    golden(
        "bose_limit.csv",
        "--sector fermionic --modes 2 --format csv bose-limit",
    );
}

#[test]
fn report_shape() {
    let rep = report("--sector fermionic --modes 2 --k 3 verify-heisenberg");
    assert_eq!(rep["schema_version"], 1);
    assert_eq!(rep["command"], "verify-heisenberg");
    assert_eq!(rep["config"]["sector"], "fermionic");
    assert_eq!(rep["config"]["modes"], 2);
    assert_eq!(rep["pass"], true);
    let checks = rep["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        for key in ["name", "pass", "residual", "tolerance", "mask", "instances"] {
            assert!(c.get(key).is_some(), "check lacks {key}");
        }
    }
}

#[test]
fn exit_codes() {
    assert_eq!(
        arstat("--sector fermionic --modes 2 --k 3 verify-algebra").code,
        EXIT_PASS
    );
    // Klauder-Perelomov states are not annihilator eigenvectors
    let kp = arstat("--modes 1 --k 3 verify-eigenstate --family kp --point 0.4");
    assert_eq!(kp.code, EXIT_CHECK_FAILED);
    assert!(kp.stderr.starts_with("FAIL "));
    // n_1 = k makes the projective moment diverge
    assert_eq!(
        arstat("--modes 1 --k 2 verify-measure --family projective --n 2").code,
        EXIT_CHECK_FAILED
    );

    for bad in [
        "verify-algebra",
        "--modes 2 verify-algebra",
        "--sector bosonic --modes 2 --k 2 verify-bargmann --kind fermionic",
        "--modes 2 --k 3 --energies 1 verify-heisenberg --sector fermionic",
        "--modes 1 --k 3 coherent --family gk --point nonsense",
        "--modes 2 --k 3 coherent --family cpr --point 0.1",
        "--modes 1 --k 1 verify-measure --family ball",
        "--modes 3 --k 4 verify-measure --family bessel",
        "--modes 1 --k 2 --tol -1 verify-algebra --sector fermionic",
        // an explicit cutoff too small for the requested tail
        "--modes 1 --k 2 --cutoff 2 verify-eigenstate --point 1.4",
        "no-such-command",
    ] {
        let out = arstat(bad);
        assert_eq!(out.code, EXIT_CONFIG, "{bad}: {}", out.stderr);
        assert!(out.stdout.is_empty());
    }
    assert_eq!(arstat("--help").code, EXIT_PASS);
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_arstat");
    let ok = Process::new(bin)
        .args([
            "--sector",
            "fermionic",
            "--modes",
            "1",
            "--k",
            "2",
            "verify-algebra",
        ])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let rep: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(rep["pass"], true);
    let bad = Process::new(bin).args(["verify-algebra"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(!bad.stderr.is_empty());
}

#[test]
fn config_file_merges_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(
        &cfg,
        "sector = \"fermionic\"\nmodes = 2\nk = 4\ntol = 1e-9\nsamples = 3\n",
    )
    .unwrap();
    let path = cfg.display().to_string();

    let rep = report(&format!("--config {path} verify-algebra"));
    assert_eq!(rep["config"]["k"], 4);
    assert_eq!(rep["config"]["samples"], 3);
    assert_eq!(rep["config"]["tol"].as_f64(), Some(1e-9));

    let rep = report(&format!("--config {path} --k 5 verify-algebra --samples 2"));
    assert_eq!(rep["config"]["k"], 5);
    assert_eq!(rep["config"]["samples"], 2);

    fs::write(&cfg, "modes = 2\nbogus = 1\n").unwrap();
    assert_eq!(
        arstat(&format!("--config {path} verify-algebra")).code,
        EXIT_CONFIG
    );
    assert_eq!(
        arstat("--config /nonexistent/run.toml verify-algebra").code,
        EXIT_CONFIG
    );
}

#[test]
fn output_file_receives_report() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.json");
    let line = "--sector fermionic --modes 1 --k 3 spectrum";
    let out = arstat(&format!("{line} --output {}", target.display()));
    assert_eq!(out.code, EXIT_PASS);
    assert!(out.stdout.is_empty());
    assert_eq!(fs::read_to_string(&target).unwrap(), arstat(line).stdout);
}

#[test]
fn thread_count_does_not_change_reports() {
    for line in [
        "--modes 2 --k 3 verify-measure --family projective",
        "--modes 1 --k 3 verify-measure --family bessel",
        "--sector bosonic --modes 2 bose-limit",
        "--sector bosonic --modes 2 --k 3 --cutoff 6 verify-algebra --seed 7",
    ] {
        let one = arstat(&format!("--threads 1 {line}"));
        let many = arstat(&format!("--threads 4 {line}"));
        assert_eq!(one, many, "{line}");
        assert_eq!(one.code, EXIT_PASS, "{line}: {}", one.stderr);
    }
}

#[test]
fn csv_table_has_header_and_rows() {
    let out = arstat("--sector bosonic --modes 2 --k 3 --cutoff 2 --format csv basis");
    let mut lines = out.stdout.lines();
    let header = lines.next().unwrap();
    assert!(header.contains(','));
    // total occupation <= 2 over two modes
    assert_eq!(lines.count(), 6);
}

#[test]
fn fermionic_algebra_example() {
    let out = arstat("--sector fermionic --modes 2 --k 3 --tol 1e-10 verify-algebra");
    assert_eq!(out.code, EXIT_PASS);
    let rep: Value = serde_json::from_str(&out.stdout).unwrap();
    assert!(rep["checks"][0]["residual"].as_f64().unwrap() < 1e-12);
}

#[test]
fn projective_coherent_norm_example() {
    let rep = report("--modes 1 --k 3 coherent --family cpr --point 1");
    assert!((rep["data"]["norm_check"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}
