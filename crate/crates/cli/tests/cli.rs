use std::process::{Command, Output};

fn kangaroo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kangaroo")).args(args).env_remove("KANGAROO_WORKERS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn replay_reports_the_kangaroo() {
    let script = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/kangaroo_p2.json");
    let o = kangaroo(&["replay", script]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "KANGAROO at step 3: shade 2 -> 3"), "{out}");
}

#[test]
fn shade_prints_witness() {
    let o = kangaroo(&["shade", "-p", "2", "-e", "1", "-r", "0,6", "z^6*(y^5+y^4+y^3+y^2)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "shade=3 witness=y*z^3");
}

#[test]
fn integral_oblique_value() {
    let o = kangaroo(&["oblique", "--mode", "integral", "-p", "2", "-r", "3", "-s", "3", "-k", "2", "-t", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "y^3*z^3*(y^2+z^2)");
}

#[test]
fn detect_finds_the_jump() {
    let o = kangaroo(&["detect", "-p", "2", "-r", "3,3", "--chart", "z", "--t", "y=1", "y^3*z^3*(y^2+z^2)"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("shade: 2 -> 3") && out.contains("classification: KANGAROO"), "{out}");
}

#[test]
fn small_scans_pass() {
    for args in [
        &["scan", "kangaroo", "--rmax", "3", "--kmax", "2"][..],
        &["scan", "moh", "--trials", "200", "--seed", "5"],
        &["scan", "fact", "--rmax", "3", "--kmax", "2", "--prefixes", "4"],
        &["scan", "zwickel", "--primes", "2", "--max-m", "2", "--max-c", "2", "--max-deg", "4"],
    ] {
        let o = kangaroo(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
    }
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(kangaroo(&["shade", "-p", "4", "y"]).status.code(), Some(2));
    assert_eq!(kangaroo(&["detect", "-p", "2", "y^3", "--chart", "q"]).status.code(), Some(2));
    assert_eq!(kangaroo(&["replay", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(kangaroo(&["shade", "-p", "2", "y^"]).status.code(), Some(2));
}

#[test]
fn atlas_emits_json_lines() {
    let o = kangaroo(&["atlas", "-p", "2", "--rmax", "1", "--kmax", "1"]);
    assert_eq!(o.status.code(), Some(0));
    for line in stdout(&o).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["p"], 2);
    }
}
