use std::process::{Command, Output};

use serde_json::Value;

fn graphon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphon")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = graphon(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    serde_json::from_str(&stdout(&all)).unwrap()
}

#[test]
fn nonlip_example_is_exact() {
    let v = json(&["examples", "nonlip", "--eps", "1/100"]);
    assert_eq!(v["t_a"], "97/300");
    assert_eq!(v["rbar_within_three_eps"], true);
    assert!(stdout(&["examples", "nonlip", "--eps", "1/100"]).contains("97/300"));
}

#[test]
fn dyadic_example_reports_quarter_and_eighth() {
    let v = json(&["examples", "dyadic", "--depth", "6"]);
    let bands = v["bands"].as_array().unwrap();
    assert_eq!(bands.len(), 6);
    assert!(bands.iter().all(|b| b["t_double_edge"] == "1/4"));
    assert_eq!(v["residual_t_double_edge"], "1/8");
    assert_eq!(v["rbar_strictly_decreasing"], true);
}

#[test]
fn converge_writes_shrinking_gaps() {
    let csv = stdout(&["converge", "--family", "cyclic", "--alpha", "1/4", "--ns", "40,80,160", "--motifs", "K2,P3,C4"]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,motif,density,limit_density,gap,product_residual"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r[5] == "0"));
    let gaps: Vec<f64> = rows.iter().filter(|r| r[1] == "C4").map(|r| r[4].parse().unwrap()).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    assert!(gaps[2] < 0.02);
}

#[test]
fn converge_can_write_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("series.csv");
    let p = path.to_str().unwrap();
    let out = stdout(&["converge", "--ns", "8,16", "--motifs", "K2", "--limit-steps", "32", "-o", p]);
    assert!(out.is_empty());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn exit_codes() {
    let missing = graphon(&["--graphon", "/no/such/file.json", "metrics"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(!missing.stderr.is_empty());
    assert!(missing.stdout.is_empty());

    assert_eq!(graphon(&["--generate", "nonsense:1", "metrics"]).status.code(), Some(2));
    assert_eq!(graphon(&["examples", "nonlip", "--eps", "2"]).status.code(), Some(2));
    assert_eq!(graphon(&["--generate", "graph:C5", "density", "--motif", "K9"]).status.code(), Some(3));
    assert_eq!(graphon(&["--generate", "random:13:1", "aut"]).status.code(), Some(3));
    assert_eq!(graphon(&["metrics"]).status.code(), Some(2));
}

#[test]
fn output_does_not_depend_on_thread_count() {
    for args in [
        vec!["--generate", "random:7:3", "metrics"],
        vec!["--generate", "random:5:2", "connrank", "--k", "1"],
        vec!["--generate", "graph:P4", "orbits", "--k", "2", "--oracle"],
        vec!["--generate", "dyadic:3", "--mode", "float", "spectral", "--threshold", "0.2"],
    ] {
        let mut one = args.clone();
        one.extend(["--threads", "1", "--json"]);
        let mut four = args.clone();
        four.extend(["--threads", "4", "--json"]);
        assert_eq!(stdout(&one), stdout(&four), "{args:?}");
    }
}

#[test]
fn graphon_and_graph_files() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.json");
    std::fs::write(&w, r#"{"weights": ["1/2", "1/2"], "matrix": [["0", "1"], ["1", "0"]]}"#).unwrap();
    let f = dir.path().join("path.txt");
    std::fs::write(&f, "3 1 simple\n1 2\n2 3\n").unwrap();
    let (w, f) = (w.to_str().unwrap(), f.to_str().unwrap());

    let v = json(&["--graphon", w, "density", "--graph", f]);
    assert_eq!(v["labels"], 1);
    let values = v["values"].as_array().unwrap();
    assert_eq!(values.len(), 2);
    assert!(values.iter().all(|x| x["density"] == "1/4"));

    assert_eq!(json(&["--graphon", w, "density", "--motif", "C3"])["density"], "0");
    assert_eq!(json(&["--graphon", w, "--mode", "float", "density", "--motif", "K2"])["density"], 0.5);
    let h = json(&["--graphon", w, "density", "--builtin", "h", "--anchor", "0,1"]);
    assert_eq!(h["density"], "1");
}

#[test]
fn purify_merges_twins() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.json");
    std::fs::write(
        &w,
        r#"{"weights": ["1/4", "1/4", "1/2", "0"], "matrix": [["1/2","1/2","1/3","1"],["1/2","1/2","1/3","0"],["1/3","1/3","1","0"],["1","0","0","0"]]}"#,
    )
    .unwrap();
    let v = json(&["--graphon", w.to_str().unwrap(), "purify"]);
    assert_eq!(v["input_pure"], false);
    assert_eq!(v["partition"], serde_json::json!([0, 0, 1, null]));
    assert_eq!(v["graphon"]["weights"], serde_json::json!(["1/2", "1/2"]));
}

#[test]
fn cayley_builds_and_recovers() {
    let built = json(&["cayley", "--group", "cyclic:5", "--f", "0,1,0,0,1"]);
    assert_eq!(built["graphon"]["matrix"][0], serde_json::json!(["0", "1", "0", "0", "1"]));
    let t = json(&["--generate", "graph:C5", "transitive"]);
    assert_eq!(t["verdicts_agree"], true);
    assert_eq!(t["aut_transitive"], true);
    let back = json(&["--generate", "graph:petersen", "cayley", "--from-graphon", "--max-nodes", "3"]);
    assert_eq!(back["densities_match"], true);
    assert_eq!(back["group"]["order"], 120);
    assert_eq!(graphon(&["--generate", "graph:P3", "cayley", "--from-graphon"]).status.code(), Some(2));
}

#[test]
fn sampling_is_seeded() {
    let a = stdout(&["--generate", "random:4:1", "--seed", "9", "sample", "--n", "12"]);
    let b = stdout(&["--generate", "random:4:1", "--seed", "9", "sample", "--n", "12"]);
    assert_eq!(a, b);
    assert!(a.starts_with("12 0 simple\n"));
}

#[test]
fn approx_errors_shrink() {
    let v = json(&["--generate", "random:4:3", "approx", "--ns", "1,10,100"]);
    let errs: Vec<f64> = v["rows"].as_array().unwrap().iter().map(|r| r["l1_error"].as_f64().unwrap()).collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    assert!(stdout(&["--generate", "random:4:3", "approx", "--ns", "2"]).starts_with("n,l1_error\n2,"));
}
