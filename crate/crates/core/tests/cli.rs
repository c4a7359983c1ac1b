use std::fs;
use std::path::Path;
use std::process::Command;

use ioselect::cli::{run, EXIT_INFEASIBLE, EXIT_OK, EXIT_USAGE};
use ioselect::fixtures::four_state_example;
use ioselect::io::write_instance;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ioselect").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn example_file(dir: &Path) -> String {
    let path = dir.join("example.json");
    fs::write(&path, write_instance(&four_state_example())).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn select_reports_the_example_solution() {
    let dir = tempfile::tempdir().unwrap();
    let f = example_file(dir.path());
    let (code, out, _) = call(&["select", &f]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["selection"]["inputs"], serde_json::json!([1, 3]));
    assert_eq!(v["selection"]["outputs"], serde_json::json!([1]));
    assert_eq!(v["total_cost"], "3");
    assert_eq!(v["lower_bound"], "2");
    assert_eq!(v["no_sfm"], true);
}

#[test]
fn select_exact_includes_the_optimum() {
    let dir = tempfile::tempdir().unwrap();
    let f = example_file(dir.path());
    let (code, out, _) = call(&["select", &f, "--exact"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("\"2\""), "{out}");
    let (_, table, _) = call(&["select", &f, "--format", "table"]);
    assert!(table.contains("total"), "{table}");
}

#[test]
fn select_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let f = example_file(dir.path());
    let a = call(&["select", &f, "--trace"]);
    let b = call(&["select", &f, "--trace"]);
    assert_eq!(a, b);
}

#[test]
fn check_names_both_failures() {
    let dir = tempfile::tempdir().unwrap();
    let f = example_file(dir.path());
    let (code, out, _) = call(&["check", &f, "--inputs", "3", "--outputs", "2"]);
    assert_eq!(code, EXIT_INFEASIBLE);
    assert!(out.contains("Type-1 and Type-2"), "{out}");
    let (code, _, _) = call(&["check", &f, "--inputs", "1,3", "--outputs", "1"]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn dumps_are_written_to_files() {
    let dir = tempfile::tempdir().unwrap();
    let f = example_file(dir.path());
    let g = dir.path().join("graph.txt");
    let m = dir.path().join("matching.txt");
    let (code, _, _) = call(&[
        "select",
        &f,
        "--dump-graph",
        g.to_str().unwrap(),
        "--dump-matching",
        m.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(!fs::read_to_string(g).unwrap().is_empty());
    let matching = fs::read_to_string(m).unwrap();
    assert!(matching.contains("EK"), "{matching}");
}

#[test]
fn bad_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"n\": 2,").unwrap();
    let (code, _, err) = call(&["select", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(!err.is_empty());
    let (code, _, _) = call(&["check", &example_file(dir.path()), "--inputs", "0"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _, _) = call(&["frobnicate"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn infeasible_system_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("dead.json");
    fs::write(
        &f,
        r#"{"n":2,"m":1,"p":1,"A":[],"B":[[1,1]],"C":[[1,1]],"K":"complete","cost_u":["1"],"cost_y":["1"]}"#,
    )
    .unwrap();
    let (code, _, err) = call(&["select", f.to_str().unwrap()]);
    assert_eq!(code, EXIT_INFEASIBLE, "{err}");
}

#[test]
fn set_cover_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let f = example_file(dir.path());
    let wsc = dir.path().join("wsc.json");
    let (code, _, _) = call(&["reduce-setcover", &f, "-o", wsc.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let (code, out, _) = call(&["solve-setcover", wsc.to_str().unwrap(), "--exact"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["weight"], "1");
    assert_eq!(v["exact"]["weight"], "1");

    let forced = dir.path().join("forced.json");
    fs::write(&forced, r#"{"N":3,"sets":[[1,2,3],[1],[2],[3]],"weights":["5","1","1","1"]}"#).unwrap();
    let (code, out, _) = call(&["solve-setcover", forced.to_str().unwrap(), "--exact"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["cover"], serde_json::json!([2, 3, 4]));
    assert_eq!(v["exact"]["weight"], "3");

    let (code, out, _) = call(&["reduce-setcover", &f, "--dual"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("{\"N\":1"), "{out}");
}

#[test]
fn gen_and_bench_are_reproducible() {
    let args = ["gen", "--n", "8", "--m", "3", "--p", "3", "--seed", "11"];
    let a = call(&args);
    assert_eq!(a.0, EXIT_OK);
    assert_eq!(a, call(&args));

    let bench = ["bench", "--n", "5", "--m", "2", "--p", "2", "--trials", "5", "--oracle", "--csv"];
    let (code, csv, _) = call(&bench);
    assert_eq!(code, EXIT_OK);
    assert!(csv.starts_with("config,trial,seed,digest"));
    assert_eq!(csv.lines().count(), 6);
    assert_eq!(csv, call(&bench).1);
}

#[test]
fn binary_reads_stdin() {
    let exe = env!("CARGO_BIN_EXE_ioselect");
    let mut child = Command::new(exe)
        .args(["select", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    use std::io::Write;
    child.stdin.take().unwrap().write_all(write_instance(&four_state_example()).as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8(out.stdout).unwrap().contains("\"total_cost\":\"3\""));
}
