use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use zerogap::config::{format_family_spec, format_gap_config, parse_family_spec, parse_gap_config};

const CONFIG_A: &str = "r = 2\neta = 1/2\nJ = 30\np0 = 30:1\np2 = 0\n";
const CONFIG_B: &str = "r = 2\neta = 1/2\nJ = 30\nprecision = 50\np0 = 30:1\np2 = 165:-31.4\n";

fn zerogap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zerogap"))
        .args(args)
        .output()
        .expect("spawn zerogap")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn config_round_trip() {
    for text in [
        CONFIG_A,
        CONFIG_B,
        "r = 3\neta = 2/5\np0 = 0:1, 2:-3/7\np2 = 1:0.125\n",
    ] {
        let cfg = parse_gap_config(text).unwrap();
        assert_eq!(parse_gap_config(&format_gap_config(&cfg)).unwrap(), cfg);
    }
    let spec = parse_family_spec(
        "r_values = 2, 3\np0_degrees = 20, 30\np2_degrees = 165\np2_coeff_lo = -40\np2_coeff_hi = 0\nbudget = 9\n",
    )
    .unwrap();
    assert_eq!(parse_family_spec(&format_family_spec(&spec)).unwrap(), spec);
}

#[test]
fn ratio_reports_reference_value_with_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "a.cfg", CONFIG_A);
    let out = zerogap(&["ratio", "--config", &cfg, "--c", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["command"], "ratio");
    assert_eq!(doc["config"]["r"], 2);
    assert_eq!(doc["config"]["p0"], "30:1");
    let f: f64 = doc["report"]["f_value"].as_str().unwrap().parse().unwrap();
    assert!((f - 0.999481).abs() < 2e-6);
    assert_eq!(doc["report"]["admissible"], true);
    assert_eq!(doc["report"]["lambda_bound"], "3");
}

#[test]
fn scan_emits_one_csv_row_per_step() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "b.cfg", CONFIG_B);
    let out = zerogap(&[
        "--format", "csv", "scan", "--config", &cfg, "--c-lo", "2.8", "--c-hi", "3.2", "--steps",
        "64",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header = rdr.headers().unwrap().clone();
    assert_eq!(&header[0], "c_over_pi");
    assert_eq!(&header[4], "admissible");
    let rows: Vec<_> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 64);
    let flags: Vec<bool> = rows.iter().map(|r| &r[4] == "true").collect();
    // admissible on a prefix, then never again
    let flip = flags.iter().position(|a| !a).unwrap();
    assert!(flip > 0 && flags[flip..].iter().all(|a| !a));
    let first_bad: f64 = rows[flip][1].parse().unwrap();
    let last_good: f64 = rows[flip - 1][1].parse().unwrap();
    assert!(
        last_good < 3.0502 && first_bad > 3.0502,
        "{last_good} {first_bad}"
    );
}

#[test]
fn euler_json_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("euler.json");
    let out = zerogap(&["euler", "--r", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    let v: f64 = doc["value"].as_str().unwrap().parse().unwrap();
    assert!((v - 6.0 / std::f64::consts::PI.powi(2)).abs() < 1e-8);
    assert_eq!(doc["primes_used"], 78_498);
}

#[test]
fn user_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.cfg", "r = 2\np0 = 30:1\np2 = 165:1/3.5\n");
    assert_eq!(
        zerogap(&["ratio", "--config", &bad, "--c", "3"])
            .status
            .code(),
        Some(1)
    );
    let unknown = write(
        dir.path(),
        "unknown.cfg",
        "r = 2\np0 = 30:1\np2 = 0\ncolour = red\n",
    );
    assert_eq!(
        zerogap(&["ratio", "--config", &unknown, "--c", "3"])
            .status
            .code(),
        Some(1)
    );
    let missing = dir.path().join("nope.cfg");
    assert_eq!(
        zerogap(&["ratio", "--config", missing.to_str().unwrap(), "--c", "3"])
            .status
            .code(),
        Some(1)
    );
    let good = write(dir.path(), "a.cfg", CONFIG_A);
    assert_eq!(
        zerogap(&["ratio", "--config", &good, "--c", "-1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(zerogap(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(zerogap(&["euler", "--r", "0"]).status.code(), Some(1));
    assert_eq!(
        zerogap(&["--jobs", "0", "euler", "--r", "2"]).status.code(),
        Some(1)
    );
}

#[test]
fn failed_verification_exits_one_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let table = write(
        dir.path(),
        "t.txt",
        "a | 2 | 1/2 | 30 | 30:1 | 0 | 3 | 0.999481 | yes\n",
    );
    let path = dir.path().join("v.json");
    let out = zerogap(&[
        "verify",
        "--table",
        &table,
        "--tol",
        "1e-12",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let doc: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(doc["passed"], false);
    assert_eq!(doc["rows"][0]["status"], "FAIL");

    let out = zerogap(&["verify", "--table", &table]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], true);
}

#[test]
fn corrupt_table_is_internal_error() {
    let dir = tempfile::tempdir().unwrap();
    let table = write(dir.path(), "t.txt", "only | three | fields\n");
    assert_eq!(
        zerogap(&["verify", "--table", &table]).status.code(),
        Some(2)
    );
}

#[test]
fn optimize_single_candidate() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "f.spec",
        "r_values = 2\np0_degrees = 30\np2_degrees = 165\np2_coeff_lo = 0\np2_coeff_hi = 0\nc_lo = 2.8\nc_hi = 3.2\n",
    );
    let out = zerogap(&["optimize", "--config", &spec]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc = json(&out);
    assert_eq!(doc["command"], "optimize");
    assert_eq!(doc["evaluations"], 1);
    let lambda: f64 = doc["best_report"]["c_over_pi_decimal"]
        .as_str()
        .unwrap()
        .parse()
        .unwrap();
    assert!(lambda >= 3.0);
}
