use std::process::{Command, Output};

use serde_json::Value;

fn lrc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrc")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const EXAMPLE: [&str; 6] = ["--lambda", "2,1,0", "--mu", "2,1,0", "--nu", "3,2,1"];

#[test]
fn exact_prints_two() {
    let o = lrc(&[&["exact"], &EXAMPLE[..]].concat());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "2");
}

#[test]
fn positivity_of_empty_triple_is_false() {
    let o = lrc(&["positivity", "--lambda", "2,1,0", "--mu", "2,1,0", "--nu", "6,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "false");
}

#[test]
fn increasing_partition_is_invalid_input() {
    let o = lrc(&["exact", "--lambda", "1,2", "--mu", "1,0", "--nu", "2,1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not weakly decreasing"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(lrc(&["exact", "--lambda", "2,1,0"]).status.code(), Some(1));
    assert_eq!(lrc(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(lrc(&["--help"]).status.code(), Some(0));
}

#[test]
fn budget_exceeded_exits_four() {
    let o = lrc(&["exact", "--lambda", "4,2,1,0", "--mu", "3,2,1,0", "--nu", "6,4,2,1", "--budget", "1"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn empty_domain_exits_two() {
    let o = lrc(&["estimate", "--lambda", "2,0", "--mu", "0,0", "--nu", "1,1"]);
    assert_eq!(o.status.code(), Some(0), "zero-dimensional path reads the count off");
    assert_eq!(lrc(&["volume", "--lambda", "2,1,0", "--mu", "2,1,0", "--nu", "6,0,0", "--kind", "p"]).status.code(), Some(2));
}

#[test]
fn json_envelope_is_reproducible() {
    let args = [&["--json", "--no-timing", "--seed", "5", "estimate"], &EXAMPLE[..], &["--eps", "0.2"]].concat();
    let a = lrc(&args);
    let b = lrc(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    for key in ["command", "input", "result", "diagnostics"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let r = &v["result"];
    for key in ["estimate", "volume_Q", "f", "s", "eps", "delta", "applicable", "seed"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    assert!(r.get("elapsed_ms").is_none());
    assert_eq!(v["input"]["seed"], 5);
    assert_eq!(v["diagnostics"]["exact_count"], 2);
}

#[test]
fn seeds_change_the_sample() {
    let run = |seed: &str| lrc(&["--seed", seed, "sample", "--lambda", "2,1,0", "--mu", "2,1,0", "--nu", "3,2,1", "--count", "5"]).stdout;
    assert_eq!(run("3"), run("3"));
    assert_ne!(run("3"), run("4"));
    let o = lrc(&["--seed", "random", "--json", "ballcheck", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn volume_from_body_file() {
    let dir = std::env::temp_dir().join(format!("lrc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("square.json");
    // the square [0, 2]²
    std::fs::write(&path, r#"{"rows": [[[0, 1]], [[0, -1]], [[1, 1]], [[1, -1]]], "b": [2, 0, 2, 0], "slack": 0}"#).unwrap();
    let o = lrc(&["--json", "volume", "--body", path.to_str().unwrap(), "--eps", "0.2", "--oracle", "20000"]);
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let vol = v["result"]["volume"].as_f64().unwrap();
    assert!((vol - 4.0).abs() < 0.6, "{vol}");
    assert_eq!(v["diagnostics"]["oracle"]["volume"], 4.0);
}

#[test]
fn experiment_subcommands_run() {
    let o = lrc(&["ballcheck", "--n", "4", "--eps-inv", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let o = lrc(&["--json", "logconcavity", "--t1", "2,1,0;2,1,0;3,2,1", "--t2", "6,3,0;6,3,0;9,6,3", "--theta", "1/2", "--pairs", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["containment_failures"], 0);
    let o = lrc(&["fraction", "--n", "3", "--gamma", "433", "--trials", "20"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(lrc(&["fraction", "--n", "3", "--gamma", "10"]).status.code(), Some(1));
}
