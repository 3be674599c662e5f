use lms::report::Report;
use std::path::PathBuf;
use std::process::Command;

fn lms(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lms")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lms-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn passing_run_exits_zero() {
    let (code, out) = lms(&["verify", "moufang", "--ring", "zmod:9", "--family", "projective"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("LM2"));
    assert!(!out.contains("FAIL"));
}

#[test]
fn failed_check_exits_one() {
    let (code, out) = lms(&["verify", "moufang", "--ring", "zmod:4", "--suite", "reconstruct-ring"]);
    assert_eq!(code, 1);
    assert!(out.lines().any(|l| l.contains("FAIL") && l.contains("R4")), "{out}");
    let (code, _) = lms(&["orthogonal", "build", "--ring", "zmod:5", "--q", "x1^2+x2^2"]);
    assert_eq!(code, 1);
}

#[test]
fn parse_errors_exit_two() {
    assert_eq!(lms(&["ring", "info", "zmod:10"]).0, 2);
    assert_eq!(lms(&["ring", "info", "nosuch:3"]).0, 2);
    assert_eq!(lms(&["jordan", "axioms", "--pair", "bogus"]).0, 2);
    assert_eq!(lms(&["verify", "moufang"]).0, 2);
}

#[test]
fn cap_exceeded_exits_three() {
    let (code, _) = lms(&["--cap", "10", "verify", "moufang", "--ring", "zmod:9", "--suite", "hua-theorem"]);
    assert_eq!(code, 3);
}

#[test]
fn json_report_is_written_and_stable() {
    let (a, b) = (tmp("a.json"), tmp("b.json"));
    for p in [&a, &b] {
        let (code, _) = lms(&["--json", p.to_str().unwrap(), "tree", "verify-iso", "--p", "3", "--level", "2"]);
        assert_eq!(code, 0);
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let rep = Report::from_json(std::str::from_utf8(&ta).unwrap()).unwrap();
    assert!(rep.all_passed());
    assert_eq!(rep.orders.get("points"), Some(&12));
    assert!(rep.checks.iter().any(|c| c.name == "sphere_isomorphism"));
}

#[test]
fn jordan_and_hermitian_commands() {
    assert_eq!(lms(&["jordan", "axioms", "--pair", "ring:zmod:25"]).0, 0);
    assert_eq!(lms(&["jordan", "verify-extra", "--ring", "zmod:25"]).0, 0);
    // 3 is not invertible in Z/9
    assert_eq!(lms(&["jordan", "roundtrip", "--pair", "ring:zmod:9"]).0, 1);
    assert_eq!(lms(&["hermitian", "mu-check", "--ring", "gf:9:frob"]).0, 0);
    assert_eq!(lms(&["hermitian", "build", "--ring", "gf:9"]).0, 2);
}

#[test]
fn dot_output() {
    let p = tmp("t.dot");
    let (code, out) = lms(&["tree", "spheres", "--p", "2", "--depth", "3", "--dot", p.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    let dot = std::fs::read_to_string(&p).unwrap();
    assert!(dot.starts_with("graph") || dot.starts_with("digraph"));
}
