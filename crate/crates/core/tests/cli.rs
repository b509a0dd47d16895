use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_geodesic-clt"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("GEODESIC_CLT_OUT_DIR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn count_trace_of_f2() {
    let o = run(&["count", "--trace", "-n", "6", "--free", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "732");
    let o = run(&["count", "--primitive", "-n", "6"]);
    assert_eq!(stdout(&o).trim(), "116");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["count", "--trace", "-n", "3"]).status.code(), Some(0));
    // Usage errors: unknown subcommand, missing required group.
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["count", "-n", "3"]).status.code(), Some(2));
    // Runtime errors: rank 1 graph, unreadable file, too few samples.
    assert_eq!(run(&["graph", "info", "--free", "1"]).status.code(), Some(1));
    assert_eq!(run(&["graph", "info", "--graph", "/nonexistent/g.txt"]).status.code(), Some(1));
    let o = run(&["clt", "-n", "10", "--samples", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("at least"));
}

#[test]
fn graph_info_lines() {
    let o = run(&["graph", "info", "--free", "2"]);
    let text = stdout(&o);
    for line in ["vertices=4", "edges=12", "lambda=3.0", "aperiodic=true"] {
        assert!(text.lines().any(|l| l == line), "missing {line} in {text}");
    }
    assert!(text.lines().any(|l| l.starts_with("hash=") && l.len() == 5 + 64));
}

#[test]
fn graph_export_round_trips_through_graph_flag() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f3.txt");
    assert!(run(&["graph", "export", "--free", "3", "--out", path.to_str().unwrap()]).status.success());
    let from_file = stdout(&run(&["count", "--trace", "-n", "5", "--graph", path.to_str().unwrap()]));
    let built = stdout(&run(&["count", "--trace", "-n", "5", "--free", "3"]));
    assert_eq!(from_file, built);
}

fn report_bytes(dir: &Path, name: &str, args: &[&str]) -> Vec<u8> {
    let out = dir.join(name);
    let mut full = args.to_vec();
    full.extend(["--out", out.to_str().unwrap()]);
    let o = run(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    fs::read(out).unwrap()
}

#[test]
fn reports_are_byte_identical_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    let clt = ["clt", "-n", "40", "--samples", "3000", "--seed", "5"];
    let one = report_bytes(dir.path(), "a.json", &[&clt[..], &["--threads", "1"]].concat());
    let three = report_bytes(dir.path(), "b.json", &[&clt[..], &["--threads", "3"]].concat());
    assert_eq!(one, three);
    let decay = ["gromov-decay", "-n", "20,40", "--samples", "2000", "--format", "csv"];
    let one = report_bytes(dir.path(), "a.csv", &[&decay[..], &["--threads", "1"]].concat());
    let four = report_bytes(dir.path(), "b.csv", &[&decay[..], &["--threads", "4"]].concat());
    assert_eq!(one, four);
}

#[test]
fn seed_changes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let a = report_bytes(dir.path(), "a.json", &["clt", "-n", "30", "--samples", "500", "--seed", "1"]);
    let b = report_bytes(dir.path(), "b.json", &["clt", "-n", "30", "--samples", "500", "--seed", "2"]);
    assert_ne!(a, b);
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .args(["tv", "-n", "4,6"])
        .env("GEODESIC_CLT_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("tv.json")).unwrap()).unwrap();
    assert_eq!(report["report"], "tv");
    assert_eq!(report["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn clt_writes_normalized_samples() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("z.csv");
    let out = dir.path().join("clt.json");
    let o = run(&[
        "clt",
        "-n",
        "20",
        "--samples",
        "200",
        "--statistic",
        "displacement",
        "--basepoint",
        "-0.5,1.5",
        "--samples-csv",
        csv.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count(), 201);
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(report["statistic_kind"], "displacement");
    assert_eq!(report["basepoint"]["x"], -0.5);
}

#[test]
fn rep_export_loads_back() {
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("rep.txt");
    assert!(run(&["rep", "export", "--pants", "1,2,3", "--out", rep.to_str().unwrap()]).status.success());
    let a = report_bytes(dir.path(), "a.json", &["clt", "-n", "20", "--samples", "300", "--pants", "1,2,3"]);
    let b = report_bytes(dir.path(), "b.json", &["clt", "-n", "20", "--samples", "300", "--rep", rep.to_str().unwrap()]);
    assert_eq!(a, b);
}

#[test]
fn diagnose_subcommands_run() {
    for args in [
        &["diagnose", "tau-residual", "-n", "10,20", "--samples", "200"][..],
        &["diagnose", "holder", "--max-k", "6", "--samples", "50"],
        &["diagnose", "defect", "-n", "10,20", "--length", "40", "--samples", "50"],
        &["rn", "--pairs", "10:5,20:10"],
        &["estimate", "-n", "20,40", "--samples", "300"],
        &["sample", "--markov", "-n", "5", "--samples", "3"],
        &["enumerate", "-n", "2"],
    ] {
        let o = run(args);
        assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}
