use std::process::Command;

fn hpt_bv(args: &[&str], env: &[(&str, &str)]) -> (i32, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hpt-bv"));
    cmd.args(args).env_remove("HPT_BV_BUDGET");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn cohomology_dimensions() {
    let (code, out) = hpt_bv(&["cohomology", "--algebra", "su2", "--format", "json"], &[]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], "hpt-bv/1");
    assert_eq!(v["report"]["cohomology_dims"], serde_json::json!([1, 0, 0, 1]));
}

#[test]
fn validate_reports_non_unimodular() {
    let (code, out) = hpt_bv(&["validate", "--algebra", "affine2"], &[]);
    assert_eq!(code, 0);
    assert!(out.contains("unimodular"));
}

#[test]
fn partial_retract_has_a_triple_product() {
    let (code, out) = hpt_bv(&["transfer", "--isotrope", "e3", "--scalar", "--arity", "3"], &[]);
    assert_eq!(code, 0);
    assert!(out.contains("⋆ of the witness value"));
}

#[test]
fn outputs_are_deterministic() {
    let args = ["transfer", "--isotrope", "e3", "--coefficients", "su2", "--arity", "3..5", "--format", "json"];
    let a = hpt_bv(&args, &[]);
    let b = hpt_bv(&args, &[]);
    assert_eq!(a, b);
}

#[test]
fn small_budget_gives_a_partial_report() {
    let (code, out) = hpt_bv(&["transfer", "--isotrope", "e3", "--scalar", "--arity", "3..4"], &[("HPT_BV_BUDGET", "1")]);
    assert_eq!(code, 3, "{out}");
    assert!(out.contains("partial report"));
}

#[test]
fn exit_codes() {
    assert_eq!(hpt_bv(&["validate", "--algebra", "nope"], &[]).0, 2);
    assert_eq!(hpt_bv(&["transfer", "--arity", "3..9"], &[]).0, 2);
    // the obstruction is expected there, so the equivalence still holds
    assert_eq!(hpt_bv(&["qme", "--coefficients", "affine2", "--pairing", "identity"], &[]).0, 0);
    assert_eq!(hpt_bv(&["qme", "--coefficients", "su2", "--pairing", "killing"], &[]).0, 0);
    assert_eq!(hpt_bv(&["hpl-check", "--words", "7"], &[]).0, 2);

    let dir = std::env::temp_dir().join(format!("hpt-bv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let broken = dir.join("broken.json");
    std::fs::write(&broken, r#"{"dim": 3, "brackets": [[1,2,[[3,"1"]]], [2,1,[[3,"1"]]], [2,3,[[1,"1"]]], [3,1,[[2,"1"]]]]}"#).unwrap();
    let (code, _) = hpt_bv(&["validate", "--algebra", broken.to_str().unwrap()], &[]);
    assert_eq!(code, 1);
}

#[test]
fn emits_tree_diagrams() {
    let dir = std::env::temp_dir().join(format!("hpt-bv-dot-{}", std::process::id()));
    let (code, _) = hpt_bv(&["transfer", "--isotrope", "e3", "--scalar", "--arity", "3", "--emit-trees", dir.to_str().unwrap()], &[]);
    assert_eq!(code, 0);
    let files = std::fs::read_dir(&dir).unwrap().count();
    assert_eq!(files, 2);
    let dot = std::fs::read_to_string(dir.join("arity3_tree1.dot")).unwrap();
    assert!(dot.starts_with("digraph"));
}
