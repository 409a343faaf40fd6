use std::process::{Command, Output};

use serde_json::Value;

fn tropint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropint"))
        .args(args)
        .env_remove("TROPINT_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let o = tropint(&a);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn orbit_of_worked_example() {
    let o = tropint(&["bbs", "orbit", "11100100000"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("77"));
}

#[test]
fn extract_with_svg() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("line.svg");
    let v = json(&[
        "curve",
        "extract",
        "--poly",
        "min(X,Y,1)",
        "--svg",
        path.to_str().unwrap(),
    ]);
    let r = &v["result"];
    assert_eq!(r["vertices"].as_array().unwrap().len(), 1);
    let edges = r["edges"].as_array().unwrap();
    assert_eq!(edges.len(), 3);
    assert!(r["lengths"].as_array().unwrap().iter().all(|l| l == "inf"));
    let svg = std::fs::read_to_string(path).unwrap();
    assert!(svg.starts_with("<svg"));
}

#[test]
fn seed_is_recorded() {
    let v = json(&["bbs", "content", "11100100000", "--seed", "7"]);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["result"]["lambda"], serde_json::json!([1, 3]));
}

#[test]
fn simulate_prints_requested_rows() {
    let o = tropint(&[
        "toda", "simulate", "--state", "1,2,2,3", "--steps", "5", "--C", "1,3,8",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 5);
    assert!(text.lines().next().unwrap().contains("image"));
}

#[test]
fn theta_eval_matrix_syntax() {
    let v = json(&["theta", "eval", "--omega", "2,1;1,2", "--z", "1,0"]);
    assert_eq!(v["result"]["value"], "0");
    assert_eq!(v["result"]["generic"], false);
}

#[test]
fn cj_commands_agree() {
    let v = json(&["bbs", "cj-oracle", "11100100000"]);
    let want = serde_json::json!(["4", "1", "0", "0", "0", "0"]);
    assert_eq!(v["result"]["C"], want);
    assert_eq!(v["result"]["tiling"], want);
    assert_eq!(
        json(&["bbs", "cj", "1,1,1,0,0,1,0,0,0,0,0"])["result"]["C"],
        want
    );
}

#[test]
fn level_commands() {
    let v = json(&["bbs", "quotient-check", "--L", "11", "--lambda", "1,3"]);
    assert_eq!(v["result"]["covolume"], "77");
    let v = json(&["bbs", "enumerate", "--L", "8", "--lambda", "1,2"]);
    assert_eq!(v["result"]["count"], 32);
    let v = json(&["bbs", "omega", "--L", "13", "--lambda", "1,2,3"]);
    assert_eq!(v["result"]["agree"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(tropint(&["bbs", "orbit", "1x1"]).status.code(), Some(2));
    assert_eq!(tropint(&["bbs", "nonsense"]).status.code(), Some(2));
    assert_eq!(
        tropint(&["bbs", "enumerate", "--L", "40", "--lambda", "1,3,5"])
            .status
            .code(),
        Some(3)
    );
    let o = Command::new(env!("CARGO_BIN_EXE_tropint"))
        .args(["bbs", "orbit", "11100100000"])
        .env("TROPINT_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(
        tropint(&["toda", "step", "--state", "1,0,2,0"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn verify_single_criterion() {
    let o = tropint(&["verify", "8"]);
    assert!(o.status.success());
    assert!(stdout(&o).split_whitespace().take(2).eq(["PASS", "8"]));
}
