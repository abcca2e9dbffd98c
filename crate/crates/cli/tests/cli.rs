use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_zerorep"));
    c.env_remove("ZEROREP_OUTPUT_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    let out = bin().args(args).output().expect("spawn");
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn read_dir(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect()
}

fn csv_rows(path: &Path) -> Vec<BTreeMap<String, String>> {
    let mut rdr = csv::Reader::from_path(path).unwrap();
    rdr.deserialize().map(|r| r.unwrap()).collect()
}

#[test]
fn same_seed_gives_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let args = [
        "simulate",
        "--size",
        "5",
        "--samples",
        "3000",
        "--seed",
        "11",
        "--svg",
        "-o",
        out,
    ];
    run(&args);
    let first = read_dir(dir.path());
    run(&args);
    assert_eq!(first, read_dir(dir.path()));
    assert_eq!(first.len(), 4);

    let mut one_thread = args.to_vec();
    one_thread.extend(["--threads", "1"]);
    run(&one_thread);
    let again = read_dir(dir.path());
    assert_eq!(
        first["simulate_histogram.csv"],
        again["simulate_histogram.csv"]
    );

    let mut other = args.to_vec();
    other[6] = "12";
    run(&other);
    assert_ne!(
        first["simulate_histogram.csv"],
        read_dir(dir.path())["simulate_histogram.csv"]
    );
}

#[test]
fn simulate_summary_embeds_config_and_statistics() {
    let dir = tempfile::tempdir().unwrap();
    run(&[
        "simulate",
        "--group",
        "so",
        "--size",
        "4",
        "--samples",
        "23040",
        "--seed",
        "7",
        "-o",
        dir.path().to_str().unwrap(),
    ]);
    let s: Value =
        serde_json::from_slice(&fs::read(dir.path().join("simulate_summary.json")).unwrap())
            .unwrap();
    assert_eq!(s["config"]["seed"], 7);
    assert_eq!(s["config"]["command"], "simulate");
    assert_eq!(s["summary"]["n"], 23040);
    let median = s["summary"]["median"].as_f64().unwrap();
    assert!((median - 0.357).abs() < 0.01, "{median}");

    let hist = csv_rows(&dir.path().join("simulate_histogram.csv"));
    assert_eq!(hist.len(), 60);
    let total: u64 = hist
        .iter()
        .map(|r| r["count"].parse::<u64>().unwrap())
        .sum();
    let over = s["overflow"].as_u64().unwrap() + s["underflow"].as_u64().unwrap();
    assert_eq!(total + over, 23040);
}

#[test]
fn independent_model_reports_forced_multiplicity() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "simulate",
        "--model",
        "independent",
        "--pairs",
        "3",
        "--forced",
        "1",
        "--samples",
        "500",
        "-o",
        dir.path().to_str().unwrap(),
    ]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("forced 2"));
    let s: Value =
        serde_json::from_slice(&fs::read(dir.path().join("simulate_summary.json")).unwrap())
            .unwrap();
    // one forced pair is two eigenvalues
    assert_eq!(s["summary"]["forced_multiplicity"], 2);
    assert!(s["summary"]["median"].as_f64().unwrap() > 0.0);
}

#[test]
fn invalid_spec_fails_with_one_line() {
    let out = bin().args(["simulate", "--size", "1"]).output().unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("error:"), "{err}");
    assert_eq!(err.trim_end().lines().count(), 1, "{err}");
}

#[test]
fn ttest_summary_example() {
    let v = stdout_json(&run(&[
        "ttest",
        "--summary",
        "350,1.97,0.37",
        "388,1.90,0.40",
        "--unpooled",
    ]));
    let t = v["result"]["statistic"].as_f64().unwrap();
    assert!((t - 2.5).abs() < 0.05, "{t}");
    assert_eq!(v["result"]["kind"], "unpooled-t");
    assert_eq!(v["config"]["command"], "ttest");
}

#[test]
fn ttest_from_csv_columns_matches_summaries() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.csv");
    fs::write(&path, "a,b\n1,2\n2,4\n3,5\n4,\n").unwrap();
    let v = stdout_json(&run(&[
        "ttest",
        "--csv",
        path.to_str().unwrap(),
        "--columns",
        "a,b",
    ]));
    let sd_a = (5.0f64 / 3.0).sqrt();
    let sd_b = (7.0f64 / 3.0).sqrt();
    let w = stdout_json(&run(&[
        "ttest",
        "--summary",
        &format!("4,2.5,{sd_a}"),
        &format!("3,{},{sd_b}", 11.0 / 3.0),
    ]));
    let (x, y) = (
        v["result"]["statistic"].as_f64().unwrap(),
        w["result"]["statistic"].as_f64().unwrap(),
    );
    assert!((x - y).abs() < 1e-12, "{x} {y}");
}

#[test]
fn theory_examples() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let v = stdout_json(&run(&[
        "theory", "--ft", "--m", "2", "--u", "0.5", "-o", out,
    ]));
    assert!((v["result"]["smooth"].as_f64().unwrap() - 1.5).abs() < 1e-12);

    let v = stdout_json(&run(&["theory", "--mean", "--m", "0", "-o", out]));
    let mean = v["result"]["mean"].as_f64().unwrap();
    assert!((mean - 0.321).abs() < 0.003, "{mean}");

    run(&[
        "theory",
        "--density",
        "--m",
        "0",
        "--grid",
        "0:5:0.01",
        "-o",
        out,
    ]);
    let rows = csv_rows(&dir.path().join("theory_density.csv"));
    assert_eq!(rows.len(), 500);
    for r in rows.iter().skip(1) {
        let x: f64 = r["x"].parse().unwrap();
        let y: f64 = r["smooth"].parse().unwrap();
        let px = std::f64::consts::PI * x;
        let expected = 1.0 + (2.0 * px).sin() / (2.0 * px);
        assert!((y - expected).abs() < 1e-10, "x = {x}: {y} vs {expected}");
    }
    assert_eq!(rows[0]["smooth"], "2.0");
}

#[test]
fn theory_rejects_unsupported_hardness() {
    let out = bin()
        .args(["theory", "--ft", "--m", "9", "--u", "0.2"])
        .output()
        .unwrap();
    assert!(!out.status.success());
}

#[test]
fn analyze_reproduces_fixture_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    run(&[
        "analyze",
        "--data",
        fixture("family_zeros.csv").to_str().unwrap(),
        "--rank",
        "0",
        "--logcond",
        "15:16",
        "--dedup",
        "-o",
        out,
    ]);
    let got = csv_rows(&dir.path().join("analyze_table.csv"));
    let golden = csv_rows(&fixture("family_zeros_golden.csv"));
    assert_eq!(got.len(), golden.len());
    for (g, e) in got.iter().zip(&golden) {
        assert_eq!(g["label"], e["label"]);
        assert_eq!(g["count"], e["count"]);
        for key in [
            "median",
            "mean",
            "stdev",
            "log_conductor_min",
            "log_conductor_max",
        ] {
            let (x, y): (f64, f64) = (g[key].parse().unwrap(), e[key].parse().unwrap());
            assert!(
                (x - y).abs() < 1e-12,
                "{key} in row {}: {x} vs {y}",
                e["label"]
            );
        }
    }
    let all = got.iter().find(|r| r["label"] == "All Curves").unwrap();
    let distinct = got
        .iter()
        .find(|r| r["label"] == "Distinct Curves")
        .unwrap();
    assert_ne!(all["count"], distinct["count"]);
    let dups: Value =
        serde_json::from_slice(&fs::read(dir.path().join("analyze_duplicates.json")).unwrap())
            .unwrap();
    assert!(!dups.as_array().unwrap().is_empty());

    run(&[
        "analyze",
        "--data",
        fixture("rank_spacing.csv").to_str().unwrap(),
        "--rank",
        "0",
        "--spacing",
        "--versus-rank",
        "2",
        "-o",
        out,
    ]);
    let got = csv_rows(&dir.path().join("analyze_spacing.csv"));
    let golden = csv_rows(&fixture("rank_spacing_golden.csv"));
    assert_eq!(got.len(), golden.len());
    for (g, e) in got.iter().zip(&golden) {
        assert_eq!(g["quantity"], e["quantity"]);
        assert_eq!(g["group"], e["group"]);
        assert_eq!(g["median"], e["median"]);
        assert_eq!(g["mean"], e["mean"]);
    }
}

#[test]
fn analyze_empty_selection_warns_and_writes_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "analyze",
        "--data",
        fixture("family_zeros.csv").to_str().unwrap(),
        "--logcond",
        "40:41",
        "-o",
        dir.path().to_str().unwrap(),
    ]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let text = fs::read_to_string(dir.path().join("analyze_table.csv")).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("label,"));
}

#[test]
fn failed_run_leaves_no_files() {
    let dir = tempfile::tempdir().unwrap();
    // the rank-5 comparison group is empty, after the main table is staged
    let out = bin()
        .args([
            "analyze",
            "--data",
            fixture("rank_spacing.csv").to_str().unwrap(),
            "--rank",
            "0",
            "--spacing",
            "--versus-rank",
            "5",
            "-o",
            dir.path().to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(read_dir(dir.path()).is_empty());
}

#[test]
fn explicit_prime_side_is_complete_at_default_cutoff() {
    let v = stdout_json(&run(&[
        "explicit",
        "--curve",
        "0,-1,1,-10,-20",
        "--log-conductor",
        "7",
        "--sigma",
        "1",
    ]));
    assert_eq!(v["prime_side"]["complete"], true);
    assert_eq!(v["config"]["params"]["prime_cutoff"], 1097);
    let more = stdout_json(&run(&[
        "explicit",
        "--curve",
        "0,-1,1,-10,-20",
        "--log-conductor",
        "7",
        "--prime-cutoff",
        "5000",
    ]));
    assert_eq!(v["prime_side"]["value"], more["prime_side"]["value"]);
}

#[test]
fn explicit_zero_side_from_dataset() {
    let v = stdout_json(&run(&[
        "explicit",
        "--data",
        fixture("rank_spacing.csv").to_str().unwrap(),
        "--index",
        "1",
        "--sigma",
        "0.5",
    ]));
    assert!(v["zero_side"]["value"].as_f64().unwrap() > 0.0);
    assert_eq!(v["zero_side"]["zeros_used"], 3);
}
