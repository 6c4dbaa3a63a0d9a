use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn mvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mvar")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mvar-tests-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn decompose_reports_blocks_and_h_dividers() {
    let o = mvar(&["--json", "decompose", "xtyzxy"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dividers"], serde_json::json!(["t", "z"]));
    assert_eq!(v["blocks"], serde_json::json!(["x", "y", "xy"]));
    assert_eq!(v["h"]["x"], serde_json::json!(["t0", "z"]));
}

#[test]
fn catalog_check_uses_the_criterion() {
    let o = mvar(&["catalog", "check", "Q", "xyxztx = xyxzxtx"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("false"), "{out}");
    assert!(out.contains("Q-criterion: block content mismatch"), "{out}");
}

#[test]
fn unknown_verdicts_exit_with_two() {
    assert_eq!(mvar(&["derive", "xy", "yx", "--basis", "xyx=xyxx", "--len-cap", "4"]).status.code(), Some(2));
    assert_eq!(mvar(&["catalog", "includes", "J", "P"]).status.code(), Some(2));
}

#[test]
fn errors_exit_with_one() {
    let o = mvar(&["decompose", "x^"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    assert_eq!(mvar(&["catalog", "check", "Nope", "x = x"]).status.code(), Some(1));
    assert_eq!(mvar(&["replay", "no-such-chain"]).status.code(), Some(1));
}

#[test]
fn replay_all_passes() {
    let o = mvar(&["replay", "all"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("21/21 chains verified"));
}

#[test]
fn rees_table_file_feeds_check() {
    let path = scratch("sxyx.tbl");
    let o = mvar(&["rees", "xyx", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let held = mvar(&["check", "x^2 = x^3", "--table", path.to_str().unwrap()]);
    assert!(stdout(&held).starts_with("true"));
    let failed = mvar(&["--json", "check", "xy = yx", "--table", path.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&failed)).unwrap();
    assert_eq!(v["value"], "false");
    assert_eq!(v["size"], 7);
}

#[test]
fn derived_trace_verifies_from_file() {
    let basis = "xyx=xyxx; xxy=xxyx; xxyy=yyxx; xyzxy=yxzxy";
    let o = mvar(&["derive", "xybxcy", "yxbxcy", "--basis", basis, "--len-cap", "9"]);
    assert_eq!(o.status.code(), Some(0));
    let path = scratch("alpha.trace");
    fs::write(&path, stdout(&o)).unwrap();
    let v = mvar(&["derive", "xybxcy", "yxbxcy", "--basis", basis, "--verify", path.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0), "{}", String::from_utf8_lossy(&v.stderr));
    let wrong = mvar(&["derive", "xybxcy", "xybxcy", "--basis", basis, "--verify", path.to_str().unwrap()]);
    assert_eq!(wrong.status.code(), Some(1));
}

#[test]
fn free_closure_decides_in_bound() {
    let o = mvar(&["free", "--basis", "x=xx; xy=yx", "--oracle-len", "3", "--identity", "xyx = yx"]);
    assert_eq!(o.status.code(), Some(0));
    let u = mvar(&["free", "--basis", "x=xx; xy=yx", "--oracle-len", "3", "--identity", "x = y"]);
    assert_eq!(u.status.code(), Some(2));
}

#[test]
fn custom_catalog_entries_are_usable() {
    let path = scratch("extra.cat");
    fs::write(&path, "variety BandC\nbasis: x = xx; xy = yx\n").unwrap();
    let p = path.to_str().unwrap();
    let list = mvar(&["--catalog", p, "catalog", "list"]);
    assert!(stdout(&list).lines().any(|l| l == "BandC"));
    let inc = mvar(&["--catalog", p, "catalog", "includes", "SL", "BandC"]);
    assert!(stdout(&inc).starts_with("true"), "{}", stdout(&inc));
}

#[test]
fn json_reports_are_reproducible() {
    let args = ["--json", "derive", "xyzxy", "yxzxy", "--basis", "xyx=xyxx; xxyy=yyxx; xyxn[2]", "--len-cap", "8"];
    let a = mvar(&args);
    let b = mvar(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn lattice_bottom_is_definite() {
    let o = mvar(&["lattice", "verify", "bottom"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("ok")).count(), 10);
}
