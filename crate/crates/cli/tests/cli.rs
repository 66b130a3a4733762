use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use std::io::Write;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_graphwh"))
}

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

#[test]
fn validate_d1_passes_with_small_identity_residuals() {
    let cfg = config("f2_d1.json");
    let out = run(&["validate", "--json", "--config", cfg.to_str().unwrap()]);
    let r = json(&out);
    for family in ["axioms", "alpha_beta", "theta_norm", "alpha_avg"] {
        assert!(r["residuals"][family].as_f64().unwrap() < 1e-12, "{family}");
    }
    let failing: Vec<_> = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["asserted"] == true && c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap().to_string())
        .collect();
    // Order-12 truncation is the only check that can miss its tolerance.
    assert!(failing.iter().all(|n| n == "expo_truncation"), "{failing:?}");
    assert_eq!(out.status.code(), Some(if failing.is_empty() { 0 } else { 2 }));
}

#[test]
fn invariance_test_on_free_product() {
    let cfg = config("f2_d1.json");
    let out = run(&["invariance-test", "--json", "--seed", "42", "--pairs", "200", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["status"], "pass");
    assert!(r["residuals"]["invariance"].as_f64().unwrap() < 1e-9);
}

#[test]
fn malformed_cayley_table_is_a_structural_error() {
    let cfg = config("malformed_cayley.json");
    let out = run(&["reduce", "--json", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let r = json(&out);
    assert_eq!(r["status"], "error");
    assert!(r["error"]["code"].as_str().unwrap().starts_with("structural."));
    let human = run(&["reduce", "--config", cfg.to_str().unwrap()]);
    assert_eq!(human.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&human.stdout).contains("structural."));
}

#[test]
fn config_errors_exit_with_three() {
    let out = run(&["validate", "--json", "--config", "/nonexistent/config.json"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["error"]["code"], "io");

    let mut child = bin()
        .args(["validate", "--json"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(br#"{"schema_version":"1","graph":{"vertex_count":1},"extra":0}"#).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["error"]["code"], "schema");
}

#[test]
fn unknown_command_and_bad_flags_exit_with_three() {
    let out = run(&["frobnicate", "--json"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["error"]["code"], "unknown_command");
    assert_eq!(run(&["b2-audit", "--grid", "x"]).status.code(), Some(3));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn reports_and_sidecars_are_byte_identical_across_runs() {
    let cfg = config("f3_d1.json");
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for cmd in ["kernel-report", "walls-audit", "b2-audit", "convergence", "invariance-test"] {
        let outs: Vec<Output> = dirs
            .iter()
            .map(|d| {
                run(&[cmd, "--json", "--config", cfg.to_str().unwrap(), "--out-dir", d.path().to_str().unwrap()])
            })
            .collect();
        let strip = |o: &Output, d: &tempfile::TempDir| {
            String::from_utf8(o.stdout.clone()).unwrap().replace(d.path().to_str().unwrap(), "OUT")
        };
        assert_eq!(strip(&outs[0], &dirs[0]), strip(&outs[1], &dirs[1]), "{cmd}");
        assert_eq!(outs[0].status.code(), Some(0), "{cmd}");
    }
    let mut names: Vec<_> = std::fs::read_dir(dirs[0].path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    for n in &names {
        let a = std::fs::read(dirs[0].path().join(n)).unwrap();
        let b = std::fs::read(dirs[1].path().join(n)).unwrap();
        assert_eq!(a, b, "{n:?}");
    }
    assert!(names.iter().any(|n| n == "walls-audit_walls.csv"));
    assert!(names.iter().any(|n| n == "kernel-report_phi_gram.csv"));
}

#[test]
fn walls_csv_has_the_documented_columns() {
    let cfg = config("f2_d1.json");
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["walls-audit", "--radius", "2", "--config", cfg.to_str().unwrap(), "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_path(dir.path().join("walls-audit_walls.csv")).unwrap();
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        ["x", "y", "reduced_length", "wall_count", "radius", "stable"]
    );
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let len: usize = rec[2].parse().unwrap();
        let count: usize = rec[3].parse().unwrap();
        assert_eq!(count, 2 * len);
        assert_eq!(&rec[5], "true");
    }
}

#[test]
fn b2_audit_flags_override_the_schedule() {
    let cfg = config("f2_d1.json");
    let out = run(&["b2-audit", "--json", "--n", "20", "--grid", "20,40", "--radius", "1", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["details"]["audit"]["n"], 20);
    assert_eq!(r["details"]["audit"]["grid"].as_array().unwrap().len(), 2);
}

#[test]
fn invariant_failure_exits_with_two() {
    // Well-formed shapes, but `‖S(s)‖²` is off the sphere of radius `φ(1)/4`.
    let text = br#"{"schema_version":"1","graph":{"vertex_count":2},
        "vertex_data":[{"cayley":[[0,1],[1,0]],"inverse":[0,1],"R":[[0],[1]],"S":[[0],[1]]},
                       {"cayley":[[0,1],[1,0]],"inverse":[0,1],"R":[[0],[1]],"S":[[0],[0]]}]}"#;
    let mut child = bin()
        .args(["validate", "--json"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(text).unwrap();
    let out = child.wait_with_output().unwrap();
    let r = json(&out);
    assert_eq!(out.status.code(), Some(2), "{r}");
    assert_eq!(r["status"], "fail");
    let axioms = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "vertex_data_axioms").unwrap();
    assert_eq!(axioms["passed"], false);
}
