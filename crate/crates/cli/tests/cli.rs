use std::process::{Command, Output};

use serde_json::Value;

fn fairgame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fairgame"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("one JSON object per line"))
        .collect()
}

fn coords(v: &Value) -> Vec<String> {
    v["coords"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap().to_string())
        .collect()
}

#[test]
fn enumerate_ternary_prefix() {
    let out = fairgame(&["enumerate", "--n", "3", "--depth", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    assert_eq!(recs.len(), 3);
    assert_eq!(coords(&recs[2]), ["0", "1", "3"]);
    assert!(recs.iter().all(|r| r["kind"] == "vertex"));
    assert_eq!(recs[2]["depth"], "2");

    let out = fairgame(&["enumerate", "--n", "3", "--depth", "0"]);
    assert_eq!(records(&out).len(), 1);
}

#[test]
fn enumerate_four_colors() {
    let out = fairgame(&[
        "enumerate",
        "--n",
        "4",
        "--root",
        "-1,1,2,2",
        "--depth",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let got: Vec<Vec<String>> = records(&out).iter().map(coords).collect();
    let want: Vec<Vec<String>> = [
        ["-1", "1", "2", "2"],
        ["-1", "1", "2", "3"],
        ["-1", "2", "2", "6"],
        ["1", "2", "2", "12"],
    ]
    .iter()
    .map(|r| r.iter().map(|s| s.to_string()).collect())
    .collect();
    assert_eq!(got, want);
}

#[test]
fn invalid_root_and_missing_bound() {
    let out = fairgame(&["enumerate", "--n", "3", "--root", "1,2,3", "--depth", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let out = fairgame(&["enumerate", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = fairgame(&["enumerate", "--n", "3", "--depth", "1", "--height", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ternary_roots() {
    let out = fairgame(&["roots", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let got: Vec<Vec<String>> = records(&out).iter().map(coords).collect();
    assert_eq!(got, vec![vec!["-1", "-1", "-1"], vec!["0", "0", "0"]]);
    let out = fairgame(&["roots", "--n", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn count_max_agrees() {
    let out = fairgame(&["count-max", "45"]);
    let r = &records(&out)[0];
    assert_eq!(r["formula"], "2");
    assert_eq!(r["listed"], "2");
    assert_eq!(fairgame(&["count-max", "2"]).status.code(), Some(2));
}

#[test]
fn c3_commands() {
    let r = &records(&fairgame(&["c3", "check", "10"]))[0];
    assert_eq!(r["member"], true);
    let list: Vec<String> = records(&fairgame(&["c3", "list", "13"]))
        .iter()
        .map(|r| r["c"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(list, ["0", "1", "3", "6", "9", "10"]);
    let r = &records(&fairgame(&["c3", "density", "13"]))[0];
    assert_eq!(r["density"], "6/13");
    assert_eq!(fairgame(&["c3", "density", "0"]).status.code(), Some(2));
}

#[test]
fn lorentz_commands() {
    let r = &records(&fairgame(&["lorentz", "map", "0,1,3"]))[0];
    let w: Vec<&str> = r["w"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert_eq!(w, ["-4", "-9", "10"]);
    let r = &records(&fairgame(&["lorentz", "inverse", "-4,-9,10"]))[0];
    let x: Vec<&str> = r["x"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert_eq!(x, ["0", "1", "3"]);
    let r = &records(&fairgame(&["lorentz", "count", "100"]))[0];
    let points: u64 = r["points"].as_str().unwrap().parse().unwrap();
    let s3: u64 = r["s3"].as_str().unwrap().parse().unwrap();
    assert_eq!(points, 2 * s3);
    assert_eq!(
        fairgame(&["lorentz", "inverse", "-9,-4,10"]).status.code(),
        Some(2)
    );
}

#[test]
fn simulation_is_reproducible() {
    let args = ["simulate", "1,3,9", "--trials", "20000", "--seed", "5"];
    let a = fairgame(&args);
    let b = fairgame(&args);
    assert_eq!(a.stdout, b.stdout);
    let par = fairgame(&[
        "--jobs", "2", "simulate", "1,3,9", "--trials", "20000", "--seed", "5",
    ]);
    assert_eq!(a.stdout, par.stdout);
    let r = &records(&a)[0];
    assert_eq!(r["exact"], "1/2");
    assert_eq!(r["trials"], "20000");
}

#[test]
fn verify_suites() {
    let out = fairgame(&["verify", "mod3", "--height", "1000"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(records(&out)[0]["passed"], true);
    let out = fairgame(&[
        "verify", "all", "--height", "300", "--limit", "300", "--colors", "3,4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(records(&out).len(), 12);
    assert_eq!(fairgame(&["verify", "nonsense"]).status.code(), Some(2));
}

#[test]
fn csv_and_parallel_output_match() {
    let seq = fairgame(&[
        "--format",
        "csv",
        "enumerate",
        "--n",
        "4",
        "--root",
        "-1,-1,-1,0",
        "--height",
        "200",
    ]);
    let par = fairgame(&[
        "--jobs",
        "3",
        "--format",
        "csv",
        "enumerate",
        "--n",
        "4",
        "--root",
        "-1,-1,-1,0",
        "--height",
        "200",
    ]);
    assert_eq!(seq.status.code(), Some(0));
    assert_eq!(seq.stdout, par.stdout);
    let text = String::from_utf8(seq.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("kind,coords,depth,height,norm_sq,fair,sign")
    );
    assert_eq!(lines.next(), Some("vertex,-1 -1 -1 0,0,2,3,false,negative"));
}
