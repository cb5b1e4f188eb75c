use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn instance(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../instances").join(name)
}

fn inst(name: &str) -> String {
    instance(name).to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rectmotion")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn scratch(name: &str, contents: &[u8]) -> PathBuf {
    let p = std::env::temp_dir().join(format!("rectmotion-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, contents).unwrap();
    p
}

fn path(p: &PathBuf) -> &str {
    p.to_str().unwrap()
}

#[test]
fn swap_makespan_is_four() {
    let out = run(&["plan", &inst("swap3.json"), "--objective", "makespan"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["value"], "4");
    assert_eq!(v["makespan_measured"], "4");
}

#[test]
fn plans_pass_verification() {
    for (file, objective) in [
        ("swap3.json", "makespan"),
        ("swap3.json", "sum"),
        ("three_robots.json", "makespan"),
        ("configurations.json", "sum"),
        ("cover_two_rooms.json", "exposure"),
    ] {
        let out = run(&["plan", &inst(file), "--objective", objective]);
        assert_eq!(out.status.code(), Some(0), "{file} {objective}");
        let plan = scratch(&format!("{file}-{objective}"), &out.stdout);
        let out = run(&["verify", &inst(file), "--schedule", path(&plan)]);
        let v = json(&out);
        assert_eq!(out.status.code(), Some(0), "{file} {objective}: {v}");
        assert_eq!(v["passed"], true);
        assert_eq!(v["value_matches"], true, "{file} {objective}: {v}");
    }
}

#[test]
fn exposure_without_cover_equals_makespan() {
    let m = json(&run(&["plan", &inst("swap3.json"), "--objective", "makespan"]));
    let e = json(&run(&["plan", &inst("swap3.json"), "--objective", "exposure"]));
    assert_eq!(e["value"], m["value"]);
}

#[test]
fn output_is_deterministic() {
    let args = ["plan", &inst("cover_two_rooms.json"), "--objective", "exposure"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["plan", &inst("three_robots.json"), "--objective", "sum"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn feasibility_exit_codes() {
    let out = run(&["feasibility", &inst("corridor.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["feasible"], false);

    let out = run(&["feasibility", &inst("wide_corridor.json")]);
    assert_eq!(out.status.code(), Some(0));
    let witness = scratch("wide-witness", &out.stdout);
    let v = json(&run(&["verify", &inst("wide_corridor.json"), "--schedule", path(&witness)]));
    assert_eq!(v["in_domain"], true);
    assert_eq!(v["passed"], true);
}

#[test]
fn feasibility_from_flags() {
    let domain = scratch("room.json", br#"{"outer": [["0","0"],["6","0"],["6","6"],["0","6"]]}"#);
    let out = run(&["feasibility", "--domain", path(&domain), "--start", "1/2,1/2;11/2,11/2", "--target", "11/2,11/2;1/2,1/2"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn plan_ignoring_the_domain_fails_verification() {
    let inst = instance("corridor.json");
    let out = run(&["plan", path(&inst)]);
    let plan = scratch("corridor-plan", &out.stdout);
    let out = run(&["verify", path(&inst), "--schedule", path(&plan)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["in_domain"], false);
}

#[test]
fn input_errors_exit_one() {
    let bad = scratch("missing-target.json", br#"{"robots": [{"start": ["0", "0"]}]}"#);
    let out = run(&["plan", path(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("robots[0]"));

    let bad = scratch("syntax.json", b"{\"robots\": [\n");
    let out = run(&["plan", path(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains(":2:"));

    let out = run(&["plan", &inst("three_robots.json"), "--objective", "exposure"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn oracle_agrees_on_the_swap() {
    let v = json(&run(&["oracle", &inst("swap3.json"), "--objective", "sum"]));
    assert_eq!(v["value"], "8");
}

#[test]
fn render_and_graph_outputs() {
    let out = run(&["render", &inst("cover_two_rooms.json")]);
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("class=\"cover\""));

    let out = run(&["graph", "--kind", "transition", "--k", "2"]);
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("graph transitions"));
    // left-of and right-of never share a configuration
    assert_eq!(dot.matches(" -- ").count(), 4);

    let out = run(&["graph", "--kind", "exposure", &inst("cover_two_rooms.json")]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("graph exposure"));
}

#[test]
fn threads_flag_is_accepted() {
    let out = run(&["--threads", "1", "plan", &inst("swap3.json")]);
    assert_eq!(out.status.code(), Some(0));
}
