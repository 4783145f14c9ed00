use std::fs;
use std::path::Path;
use std::process::Command;

use gasvol::io::Manifest;

fn gasvol(args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_gasvol")).args(args).output().unwrap().status.code().unwrap()
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

#[test]
fn simulate_writes_series_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("sim");
    let code = gasvol(&[
        "simulate", "--model", "garch", "--a0", "0.1", "--a1", "0.3", "--beta", "0.2", "--n", "1000", "--seed", "7",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = fs::read_to_string(out.join("returns.csv")).unwrap();
    assert_eq!(text.lines().count(), 1001);
    let m = Manifest::parse(&fs::read_to_string(out.join("manifest.txt")).unwrap()).unwrap();
    assert_eq!(m.get("seed"), Some("7"));
    assert_eq!(m.get("command"), Some("simulate"));
}

#[test]
fn usage_and_runtime_errors_have_distinct_codes() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(gasvol(&["frobnicate"]), 1);
    assert_eq!(gasvol(&["simulate", "--no-such-flag"]), 1);
    assert_eq!(gasvol(&["simulate", "--model", "garch", "--a1", "0.9", "--out", tmp.path().to_str().unwrap()]), 1);
    let missing = tmp.path().join("missing.csv");
    assert_eq!(gasvol(&["estimate", "--in", missing.to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]), 2);
    let empty = tmp.path().join("empty.csv");
    fs::write(&empty, "").unwrap();
    assert_eq!(gasvol(&["bands", "--in", empty.to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]), 2);
    assert_eq!(gasvol(&["--help"]), 0);
}

#[test]
fn symtest_reports_statistics_and_decision() {
    let tmp = tempfile::tempdir().unwrap();
    let sim = tmp.path().join("sim");
    let out = tmp.path().join("sym");
    assert_eq!(gasvol(&["simulate", "--model", "ht", "--n", "800", "--seed", "3", "--out", sim.to_str().unwrap()]), 0);
    let data = sim.join("returns.csv");
    let code =
        gasvol(&["symtest", "--in", data.to_str().unwrap(), "--alpha", "0.01", "--nx", "20", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    let rows = fs::read_to_string(out.join("symtest.csv")).unwrap();
    assert!(rows.starts_with("x,statistic,"));
    assert!(rows.lines().count() > 1);
    let summary = fs::read_to_string(out.join("symtest_summary.csv")).unwrap();
    assert!(summary.contains("critical_value") && summary.contains("reject"));
}

#[test]
fn estimate_can_save_the_pilot() {
    let tmp = tempfile::tempdir().unwrap();
    let sim = tmp.path().join("sim");
    let out = tmp.path().join("est");
    assert_eq!(gasvol(&["simulate", "--n", "600", "--seed", "2", "--out", sim.to_str().unwrap()]), 0);
    let data = sim.join("returns.csv");
    assert_eq!(gasvol(&["estimate", "--in", data.to_str().unwrap(), "--save-pilot", "--out", out.to_str().unwrap()]), 0);
    let net = fs::read_to_string(out.join("pilot.txt")).unwrap();
    assert!(gasvol::pilot::PilotNetwork::<f64>::from_kv_str(&net).is_ok());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let sim = tmp.path().join("sim");
    assert_eq!(gasvol(&["simulate", "--model", "ht", "--n", "500", "--seed", "9", "--out", sim.to_str().unwrap()]), 0);
    let data = sim.join("returns.csv");
    let d = data.to_str().unwrap();
    let commands: Vec<Vec<&str>> = vec![
        vec!["simulate", "--model", "garch", "--n", "400", "--seed", "1"],
        vec!["estimate", "--in", d, "--seed", "2"],
        vec!["bands", "--in", d, "--seed", "2", "--bias", "pilot"],
        vec!["symtest", "--in", d, "--seed", "2"],
        vec!["nic", "--n", "600", "--seed", "3", "--oracle-path", "100000"],
        vec!["mle", "--in", d, "--seed", "4"],
        vec!["mc-ise", "--model", "ht", "--n", "300", "--reps", "2", "--seed", "5", "--estimators", "gas,mle,global"],
        vec!["mc-sym", "--model", "garch", "--n", "300", "--reps", "2", "--seed", "6"],
        vec!["analyze", "--in", d, "--rv", d, "--a", "0.3", "--seed", "7"],
    ];
    for args in commands {
        let out = tmp.path().join(args[0]);
        let o = out.to_str().unwrap().to_string();
        let mut full = args.clone();
        full.extend(["--out", &o]);
        let run = || {
            assert_eq!(gasvol(&full), 0, "{args:?}");
            let snap = snapshot(&out);
            fs::remove_dir_all(&out).unwrap();
            snap
        };
        let (a, b) = (run(), run());
        assert!(a.len() >= 2);
        assert_eq!(a, b, "{args:?}");
    }
}
