use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn neighborly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_neighborly")).args(args).output().expect("binary runs")
}

fn certificates(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn strip_runtime(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("runtime_ms");
    v
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn prop_llom_exhaustive_at_3x4() {
    let out = neighborly(&["verify", "prop-llom", "--rank", "3", "--cols", "4", "--mode", "exhaustive"]);
    assert_eq!(out.status.code(), Some(0));
    let c = &certificates(&out)[0];
    assert_eq!(c["schema"], "v1");
    assert_eq!(c["coverage"]["checked"], 4096);
    assert_eq!(c["coverage"]["total"], 4096);
    assert_eq!(c["verified"], true);
}

#[test]
fn family_verify_reports_shapes_and_set_size() {
    let out = neighborly(&["family", "verify", "--rank", "3", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let c = &certificates(&out)[0];
    assert_eq!(c["claim"], "lemma-lbase");
    assert_eq!(c["witness"]["max_set_size"], 2);
    assert!(!c["witness"]["shapes"].as_array().unwrap().is_empty());
}

#[test]
fn family_build_prints_the_board() {
    let out = neighborly(&["family", "build", "--rank", "8", "--k", "3", "--l", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let c = &certificates(&out)[0];
    assert_eq!(c["claim"], "family-board");
    assert_eq!(c["witness"]["board"].as_array().unwrap().len(), 7);
}

#[test]
fn divide_refutes_four_collinear_points() {
    let dir = tempfile::tempdir().unwrap();
    let pts = write(dir.path(), "pts.json", "[[0],[1],[2],[3]]");
    let out = neighborly(&["divide", "--points", &pts, "--k", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let c = &certificates(&out)[0];
    assert_eq!(c["witness"]["refutations"].as_array().unwrap().len(), 7);
    for r in c["witness"]["refutations"].as_array().unwrap() {
        assert!(r["hyperplane"]["normal"].is_array());
    }
}

#[test]
fn divide_finds_a_witness_partition() {
    let dir = tempfile::tempdir().unwrap();
    let pts = write(dir.path(), "pts.json", "[[0],[1],[2],[3],[4]]");
    let out = neighborly(&["divide", "--points", &pts, "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let c = &certificates(&out)[0];
    assert_eq!(c["witness"]["divisible"], true);
}

#[test]
fn geometry_subcommands_emit_replayable_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let pts = write(dir.path(), "pts.json", "[[0,0],[1,1],[2,4],[3,9],[4,16],[5,25]]");
    let signs = write(dir.path(), "signs.json", "[1,1,1,1,1,-1]");
    let out_path = dir.path().join("all.jsonl");
    let mut stream = String::new();
    for args in [
        vec!["gale", "--points", &pts],
        vec!["neighbourly", "--points", &pts, "--k", "1"],
        vec!["signflip", "--points", &pts, "--k", "1"],
        vec!["projective", "--points", &pts, "--signs", &signs],
    ] {
        let out = neighborly(&args);
        assert!(matches!(out.status.code(), Some(0 | 1)), "{args:?}");
        stream.push_str(&String::from_utf8_lossy(&out.stdout));
    }
    fs::write(&out_path, stream).unwrap();
    let out = neighborly(&["replay", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(certificates(&out).iter().all(|r| r["replay"] == true));
}

#[test]
fn gale_inverse_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let pts = write(dir.path(), "pts.json", "[[0,0],[1,0],[0,1],[1,1],[3,5]]");
    let out = neighborly(&["gale", "--points", &pts]);
    let c = &certificates(&out)[0];
    let vectors = write(dir.path(), "g.json", &c["witness"]["vectors"].to_string());
    let out = neighborly(&["gale", "--points", &vectors, "--invert"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(certificates(&out)[0]["claim"], "gale-inverse");
}

#[test]
fn travel_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.txt", "+++\n+++\n");
    let out = neighborly(&["travel", "--matrix", &m, "--kind", "top"]);
    assert_eq!(out.status.code(), Some(0));
    let c = &certificates(&out)[0];
    assert_eq!(c["witness"]["cyclic"], false);
    assert_eq!(c["witness"]["travel"]["breakpoints"], serde_json::json!([3]));
}

#[test]
fn bounds_table() {
    let dir = tempfile::tempdir().unwrap();
    let table = r#"{"facts":[{"quantity":"lambda","k":1,"d_min":1,"slope":2,"intercept":3,"direction":"upper","source":"rule"}],"d_max":6}"#;
    let t = write(dir.path(), "t.json", table);
    let out = neighborly(&["bounds", "--table", &t]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!certificates(&out)[0]["witness"]["derived"].as_array().unwrap().is_empty());
}

#[test]
fn budgets_give_partial_certificates_and_exit_two() {
    let out = neighborly(&["--max-cases", "5", "verify", "prop-pt", "--rank", "3", "--cols", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let c = &certificates(&out)[0];
    assert_eq!(c["coverage"]["checked"], 5);
    assert_eq!(c["verified"], false);
}

#[test]
fn usage_and_input_errors_exit_two() {
    assert_eq!(neighborly(&["verify", "prop-llom"]).status.code(), Some(2));
    assert_eq!(neighborly(&["divide", "--points", "/nonexistent/pts.json", "--k", "1"]).status.code(), Some(2));
    assert_eq!(neighborly(&["family", "verify", "--rank", "3", "--k", "9"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.txt", "++\n+\n");
    assert_eq!(neighborly(&["travel", "--matrix", &m, "--kind", "top"]).status.code(), Some(2));
    let bad = Command::new(env!("CARGO_BIN_EXE_neighborly"))
        .args(["family", "build", "--rank", "3", "--k", "2"])
        .env("NEIGHBORLY_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn sampled_runs_are_deterministic() {
    let args = ["verify", "prop-pt", "--rank", "3", "--cols", "5", "--mode", "sampled", "--count", "200", "--seed", "7"];
    let a = certificates(&neighborly(&args)).remove(0);
    let b = certificates(&neighborly(&args)).remove(0);
    assert_eq!(strip_runtime(a.clone()), strip_runtime(b));
    assert_eq!(a["seed"], 7);
}

#[test]
fn replay_detects_tampering_and_schema_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = neighborly(&["family", "verify", "--rank", "3", "--k", "2"]);
    let mut c = certificates(&out).remove(0);
    let good = write(dir.path(), "good.jsonl", &c.to_string());
    assert_eq!(neighborly(&["replay", &good]).status.code(), Some(0));

    let entry = &mut c["witness"]["entries"][0][1];
    let first = entry[0].as_u64().unwrap();
    entry[0] = (if first == 1 { 2 } else { 1 }).into();
    let bad = write(dir.path(), "bad.jsonl", &c.to_string());
    let out = neighborly(&["replay", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(certificates(&out)[0]["replay"], false);

    c["schema"] = "v9".into();
    let wrong = write(dir.path(), "wrong.jsonl", &c.to_string());
    assert_eq!(neighborly(&["replay", &wrong]).status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.jsonl");
    let out = neighborly(&["--out", path.to_str().unwrap(), "family", "build", "--rank", "3", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(path).unwrap();
    assert_eq!(text.lines().count(), 1);
}
