use std::process::Command;

fn s6lag(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_s6lag")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

#[test]
fn verify_passes_with_zero() {
    let (code, out) = s6lag(&["verify", "L0"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("L0: pass"));
}

#[test]
fn failing_checks_exit_with_one() {
    let (code, _) = s6lag(&["verify", "L4_boruvka", "--tol-lag", "1e-14"]);
    assert_eq!(code, 1);
}

#[test]
fn configuration_errors_exit_with_two() {
    assert_eq!(s6lag(&["verify", "L9"]).0, 2);
    assert_eq!(s6lag(&["verify", "L0", "--grid", "3"]).0, 2);
    assert_eq!(s6lag(&["sweep", "everything"]).0, 2);
    assert_eq!(s6lag(&["classify-cubic", "--params", "1,2"]).0, 2);
    assert_eq!(s6lag(&["tube", "--base", "L0", "--bundle", "N1", "--gamma", "pi/2"]).0, 2);
}

#[test]
fn classify_cubic_reads_normal_form_parameters() {
    let (code, out) = s6lag(&["classify-cubic", "--params", "2,2,0,0"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["class"], "S3");
}

#[test]
fn tube_over_boruvka() {
    let (code, out) = s6lag(&["tube", "--base", "boruvka", "--bundle", "N2", "--gamma", "asin(2/3)"]);
    assert_eq!(code, 0, "{out}");
}
