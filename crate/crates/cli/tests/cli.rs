use std::process::{Command, Output};

use serde_json::Value;

fn fano(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fano"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn envelope(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = fano(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn ring_eval_prints_points() {
    let o = fano(&["ring", "eval", "h^3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "54*pt");
    let o = fano(&["-m", "f0", "ring", "eval", "(3*xi + 2*f)^3"]);
    assert_eq!(stdout(&o).trim(), "54*pt");
    let o = fano(&["ring", "eval", "E*h^2"]);
    assert_eq!(stdout(&o).trim(), "6*pt");
}

#[test]
fn invalid_input_exits_2() {
    assert_eq!(fano(&["-m", "f0", "ring", "eval", "E"]).status.code(), Some(2));
    assert_eq!(fano(&["ring", "eval", "xi^-2"]).status.code(), Some(2));
    assert_eq!(fano(&["monad", "build", "--alpha", "1", "--beta", "0"]).status.code(), Some(2));
    assert_eq!(fano(&["serre", "segre", "--alpha", "3", "--beta", "3", "-m", "f1"]).status.code(), Some(2));
    assert_eq!(fano(&["chern", "--complex", "not json"]).status.code(), Some(2));
    assert_eq!(fano(&["stability", "--summand", "oops"]).status.code(), Some(2));
}

#[test]
fn envelope_shape() {
    let v = envelope(&["cohom", "1", "-3"]);
    assert_eq!(v["command"], "cohom");
    assert_eq!(v["model"], "F1");
    assert_eq!(v["result"]["cohomology"]["h"][1], 5);
    assert!(v["notes"].is_array());
    let text = serde_json::to_string(&v).unwrap();
    assert!(!text.contains('.'), "no floats expected: {text}");
}

#[test]
fn json_is_deterministic() {
    let a = stdout(&fano(&["--json", "charges", "--max-degree", "20"]));
    let b = stdout(&fano(&["--json", "charges", "--max-degree", "20"]));
    assert_eq!(a, b);
}

#[test]
fn cotangent_vanishing() {
    let v = envelope(&["cotangent", "1", "-2"]);
    assert_eq!(v["result"]["h"][1]["exact"], 0);
    assert_eq!(v["result"]["h"][2]["exact"], 0);
}

#[test]
fn chern_of_complex_from_json() {
    let complex = r#"[{"degree":0,"summands":[{"bundle":{"kind":"cotangent","a":0,"b":-1},"mult":1}]}]"#;
    let o = fano(&["chern", "--complex", complex]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("c2 = 3*xi^2 + xi*f"), "{}", stdout(&o));
}

#[test]
fn monad_commands() {
    let o = fano(&["monad", "build", "--alpha", "2", "--beta", "2"]);
    assert_eq!(stdout(&o).trim(), "C^-1 = 0\nC^0 = O(-2*xi) + O(-xi)^2\nC^1 = O(-xi + f)");
    let v = envelope(&["monad", "verify", "--alpha", "5", "--beta", "3", "--gamma", "1", "--delta", "2"]);
    assert_eq!(v["result"]["ok"], true);
    let o = fano(&["monad", "table", "--symbolic"]);
    assert!(stdout(&o).contains("-α+β+δ+2"));
    let v = envelope(&["-m", "f0", "monad", "table", "--alpha", "3", "--beta", "3"]);
    assert_eq!(v["result"]["entries"][2][3], 1);
}

#[test]
fn serre_and_stability() {
    let v = envelope(&["serre", "instanton", "--alpha", "3", "--beta", "1"]);
    assert_eq!(v["result"]["det_compatible"], true);
    let v = envelope(&["stability", "earnest", "--alpha", "2", "--beta", "3"]);
    assert_eq!(v["result"]["verdict"], "stable_verified");
    let v = envelope(&["stability", "--summand=-2,0", "--summand=-1,-1"]);
    assert_eq!(v["result"]["verdict"], "unstable");
}

#[test]
fn charges_csv() {
    let o = fano(&["-m", "f1", "charges", "--max-degree", "15", "--csv"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("model,alpha,beta,degree"));
    assert!(lines.any(|l| l.starts_with("F1,3,1,15,true,true,true,true,0")));
}

#[test]
fn selftest_single_criterion() {
    let o = fano(&["selftest", "--criterion", "7"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("[PASS] 7."));
    assert_eq!(fano(&["selftest", "--criterion", "42"]).status.code(), Some(2));
}
