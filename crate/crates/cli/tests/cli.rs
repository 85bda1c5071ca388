use std::path::PathBuf;
use std::process::{Command, Output};

fn jtk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jtk"))
        .args(args)
        .env_remove("JTK_DEFAULT_ORDER")
        .output()
        .expect("failed to run jtk")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("jtk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn rmatrix_spin_half_json() {
    let o = jtk(&["rmatrix", "--two-j1", "1", "--two-j2", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let m = jtk_core::matrix_from_json(stdout(&o).trim()).unwrap();
    let p = |c: &[i64]| jtk_core::HPoly::from_ints(c);
    let expected = jtk_core::PolyMatrix::from_rows(vec![
        vec![p(&[1]), p(&[0, 1]), p(&[0, -1]), p(&[0, 0, 1])],
        vec![p(&[]), p(&[1]), p(&[]), p(&[0, 1])],
        vec![p(&[]), p(&[]), p(&[1]), p(&[0, -1])],
        vec![p(&[]), p(&[]), p(&[]), p(&[1])],
    ]);
    assert_eq!(m, expected);
}

#[test]
fn similarity_contraction_to_minimal() {
    let o = jtk(&[
        "similarity",
        "--from",
        "contraction",
        "--to",
        "minimal",
        "--order",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let coeffs: Vec<&str> = v["coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap())
        .collect();
    assert_eq!(coeffs, ["1/2", "1/4", "1/8", "1/24", "-1/96"]);
}

#[test]
fn build_irrep_emits_five_generators() {
    let o = jtk(&["build-irrep", "--map", "diag", "--two-j", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["H", "T", "Tinv", "X", "Y"]);
    assert_eq!(v["T"]["rows"], 3);
}

#[test]
fn verify_pass_fail_and_determinism() {
    let args = ["verify", "--suite", "all", "--two-j", "1,1"];
    let a = jtk(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&jtk(&args)));
    let report = jtk_core::CheckReport::from_json(&stdout(&a)).unwrap();
    assert!(report.passed());

    let bad = jtk(&[
        "verify",
        "--suite",
        "twist",
        "--map",
        "contraction",
        "--two-j",
        "1,1",
        "--sabotage",
        "zero-mu",
    ]);
    assert_eq!(bad.status.code(), Some(1));
    let report = jtk_core::CheckReport::from_json(&stdout(&bad)).unwrap();
    assert!(!report.passed());
}

#[test]
fn verify_triple_by_flags() {
    let o = jtk(&[
        "verify", "--suite", "ybe", "--two-j1", "1", "--two-j2", "2", "--two-j3", "1", "--format",
        "text",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("yang-baxter[1,2,1]"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["eval", "exp(H)"][..],
        &["eval", "w + +", "--scalar"],
        &["verify", "--suite", "nonsense"],
        &["solve-map", "--map", "no-such-map"],
        &["solve-map", "--phi", "2*w"],
        &["build-irrep", "--two-j", "-1"],
        &["rmatrix"],
    ] {
        assert_eq!(jtk(args).status.code(), Some(2), "{args:?}");
    }
    let o = jtk(&["eval", "w + +", "--scalar"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("position 5"));
}

#[test]
fn map_file_and_out_flag() {
    let map = scratch("sinh.phi");
    std::fs::write(&map, "# contraction written out\nsinh(w)\n").unwrap();
    let out = scratch("solve.json");
    let o = jtk(&[
        "solve-map",
        "--map",
        map.to_str().unwrap(),
        "--order",
        "6",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    let from_file: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let builtin: serde_json::Value = serde_json::from_str(&stdout(&jtk(&[
        "solve-map",
        "--map",
        "contraction",
        "--order",
        "6",
    ])))
    .unwrap();
    assert_eq!(from_file["f3"], builtin["f3"]);
    assert_eq!(from_file["v_bar"], builtin["v_bar"]);
    assert_eq!(from_file["map"], "sinh");
}

#[test]
fn default_order_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_jtk"))
        .args(["solve-map", "--map", "minimal"])
        .env("JTK_DEFAULT_ORDER", "5")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["order"], 5);
    assert_eq!(v["f2"].as_array().unwrap().len(), 5);
    let v: serde_json::Value = serde_json::from_str(&stdout(&jtk(&["solve-map"]))).unwrap();
    assert_eq!(v["order"], 16);
}

#[test]
fn eval_minimal_j_minus_expression_is_classical() {
    let e = "T*Y - (1/2)*h*(T*H)^2 - (1/8)*h*(T^2 - 1)";
    let o = jtk(&["eval", e, "--map", "minimal", "--two-j", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let m = jtk_core::matrix_from_json(stdout(&o).trim()).unwrap();
    assert_eq!(m, jtk_core::classical_irrep(2).unwrap().jm);
    let o = jtk(&["eval", "T*Tinv", "--two-j", "3"]);
    assert!(jtk_core::matrix_from_json(stdout(&o).trim())
        .unwrap()
        .is_identity());
}
