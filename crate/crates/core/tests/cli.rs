//! End-to-end runs of the `varlat` binary.

use std::path::Path;
use std::process::{Command, Output};

use varlat::cli::parse_report_json;

fn varlat(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_varlat"))
        .args(args)
        .env("VARLAT_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn reduction_constant_prints_one_half() {
    let dir = tempfile::tempdir().unwrap();
    let o = varlat(&["reduction-constant"], &dir.path().join("c.json"));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "0.5");
    let o = varlat(&["reduction-constant", "--nodes", "8"], &dir.path().join("c.json"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    assert_eq!(varlat(&["lr-growth", "--bogus"], &cache).status.code(), Some(2));
    assert_eq!(varlat(&["no-such-command"], &cache).status.code(), Some(2));
    assert_eq!(varlat(&["variation"], &cache).status.code(), Some(2));
    assert_eq!(varlat(&["key-estimate", "--a", "4", "--kmin", "-3"], &cache).status.code(), Some(2));
    let o = varlat(&["lr-growth", "--p", "0.5", "--a", "4"], &cache);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn variation_of_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let values = dir.path().join("v.txt");
    std::fs::write(&values, "0, 1, 0.9, 2\n").unwrap();
    let o = varlat(&["variation", "--q", "2", "--values", values.to_str().unwrap()], &dir.path().join("c.json"));
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines, ["2", "0 3"]);
}

#[test]
fn key_estimate_with_a_weak_base_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    let o = varlat(&["key-estimate", "--a", "1.05"], &cache);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
    let o = varlat(&["key-estimate", "--a", "4"], &cache);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("C=0.17388"));
}

#[test]
fn searched_parameters_are_cached() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("params.json");
    let o = varlat(&["key-estimate"], &cache);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&cache).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["a"], serde_json::json!(4.0));
    // a planted cache entry is trusted as long as its truncation is valid
    let planted = text.replace("\"j0\": 2", "\"j0\": 3");
    assert_ne!(planted, text);
    std::fs::write(&cache, &planted).unwrap();
    let out = dir.path().join("out");
    let o = varlat(&["key-estimate", "--out", out.to_str().unwrap()], &cache);
    assert_eq!(o.status.code(), Some(0));
    let report = parse_report_json(&std::fs::read_to_string(out.join("key-estimate.json")).unwrap()).unwrap();
    assert_eq!(report.config.unwrap().lacunary.j0, 3);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# small run\np = 3\nseed = 7\ntrials = 2\nr_list = 2, 4\n").unwrap();
    let out = dir.path().join("out");
    let args = ["norm-transfer", "--config", cfg.to_str().unwrap(), "--p", "2.5", "--out", out.to_str().unwrap()];
    let o = varlat(&args, &cache);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report = parse_report_json(&std::fs::read_to_string(out.join("norm-transfer.json")).unwrap()).unwrap();
    assert_eq!(report.manifest.seed, 7);
    assert_eq!(report.rows.len(), 4);
    assert_eq!(report.rows[0].param, 7.0);
    assert!(report.pass);

    std::fs::write(&cfg, "bogus = 1\n").unwrap();
    assert_eq!(varlat(&["norm-transfer", "--config", cfg.to_str().unwrap()], &cache).status.code(), Some(2));
}

#[test]
fn no_timing_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = varlat(
            &["lr-growth", "--a", "4", "--r-list", "2,3,4", "--grid-points", "601", "--no-timing", "--out", out.to_str().unwrap()],
            &cache,
        );
        assert!(matches!(o.status.code(), Some(0 | 1)), "{}", String::from_utf8_lossy(&o.stderr));
        out
    };
    let a = run("a");
    let b = run("b");
    for file in ["lr-growth.csv", "lr-growth.svg"] {
        assert_eq!(std::fs::read(a.join(file)).unwrap(), std::fs::read(b.join(file)).unwrap(), "{file}");
    }
    let csv = std::fs::read_to_string(a.join("lr-growth.csv")).unwrap();
    assert!(csv.starts_with("param,numerator,denominator,ratio,seconds\n"));
    assert_eq!(csv.lines().count(), 4);
    let ja = parse_report_json(&std::fs::read_to_string(a.join("lr-growth.json")).unwrap()).unwrap();
    let jb = parse_report_json(&std::fs::read_to_string(b.join("lr-growth.json")).unwrap()).unwrap();
    assert_eq!(ja.rows, jb.rows);
    assert_eq!(ja.manifest.wall_clock_seconds, 0.0);
    let svg = std::fs::read_to_string(a.join("lr-growth.svg")).unwrap();
    assert!(svg.contains(&format!("slope = {:.3}", ja.fit.unwrap().slope)));
}
