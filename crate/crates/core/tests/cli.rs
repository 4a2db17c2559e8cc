use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn tame3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tame3")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path_arg(p: &PathBuf) -> &str {
    p.to_str().unwrap()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("tame3-cli-{}-{}", std::process::id(), name));
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn deg_and_wedge_on_cubic_fixture() {
    let f = fixture("cubic_k.auto");
    let o = tame3(&["deg", path_arg(&f)]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("deg f1 = (9,0,0)") && s.contains("deg f2 = (6,0,0)") && s.contains("deg f3 = (7,0,1)"), "{}", s);
    let o = tame3(&["wedge", path_arg(&f)]);
    assert!(stdout(&o).contains("deg df1^df2 = (4,0,1)"));
}

#[test]
fn certify_nontame() {
    let o = tame3(&["certify-nontame", path_arg(&fixture("nagata.auto"))]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("degrees: (2,0,3) (1,0,2) (0,0,1)"), "{}", s);
    assert!(s.contains("no 2δ pairing: true"));
    let o = tame3(&["certify-nontame", path_arg(&fixture("cubic_k.auto"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn path_and_json() {
    let f = fixture("cubic_k.auto");
    let o = tame3(&["path", path_arg(&f)]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("kind: elementary-K") && s.contains("terminal: [[x1, x2, x3]]"), "{}", s);
    let o = tame3(&["path", "--json", path_arg(&f)]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"], "complete");
    assert_eq!(v["steps"][0]["kind"], "elementary-K");
    assert_eq!(v["degrees"]["top"], serde_json::json!([9, 0, 0]));
    let o = tame3(&["path", "--json", path_arg(&fixture("nagata.auto"))]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"], "non-reducible");
}

#[test]
fn reduce_exit_codes() {
    assert_eq!(tame3(&["reduce", path_arg(&fixture("nagata.auto"))]).status.code(), Some(2));
    assert_eq!(tame3(&["reduce", path_arg(&fixture("id.auto"))]).status.code(), Some(1));
    assert_eq!(tame3(&["reduce", "/nonexistent/file"]).status.code(), Some(1));
    assert_eq!(tame3(&["bogus"]).status.code(), Some(1));
    assert_eq!(tame3(&["--help"]).status.code(), Some(0));
    let o = tame3(&["reduce", path_arg(&fixture("quintic_k.auto"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("kind: elementary-K"));
}

#[test]
fn syntax_errors_report_positions() {
    let p = scratch("bad.auto", "x1\nx2\nx3 + x5\n");
    let o = tame3(&["deg", path_arg(&p)]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("at 3:6"), "{}", err);
}

#[test]
fn gen_then_path() {
    let o = tame3(&["gen", "--seed", "11", "--len", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let p = scratch("gen.auto", &stdout(&o));
    let again = tame3(&["gen", "--seed", "11", "--len", "6"]);
    assert_eq!(o.stdout, again.stdout);
    assert_eq!(tame3(&["path", path_arg(&p)]).status.code(), Some(0));
    assert_eq!(stdout(&tame3(&["vertex-eq", path_arg(&p), path_arg(&p)])).trim(), "equal");
}

#[test]
fn compose_parachute_two_maxima() {
    let a = scratch("a.auto", "x1 + x2^2\nx2\nx3\n");
    let b = scratch("b.auto", "x1\nx2 + x3^2\nx3\n");
    let o = tame3(&["compose", path_arg(&a), path_arg(&b)]);
    assert_eq!(stdout(&o), "x3^4 + 2*x2*x3^2 + x2^2 + x1\nx3^2 + x2\nx3\n");
    let o = tame3(&["parachute", path_arg(&a), "--phi", "y - z^2"]);
    let s = stdout(&o);
    assert!(s.contains("multiplicity = 1") && s.contains("holds: true"), "{}", s);
    let o = tame3(&["two-maxima", path_arg(&fixture("cubic_k.auto"))]);
    assert!(stdout(&o).contains("holds: true"));
    let o = tame3(&["vertex-eq", path_arg(&a), path_arg(&b)]);
    assert_eq!(stdout(&o).trim(), "different");
}
