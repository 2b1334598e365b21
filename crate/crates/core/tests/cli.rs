use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn treecount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treecount"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn without_timing(path: &Path) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    v.as_object_mut().unwrap().remove("timing");
    v
}

#[test]
fn count_on_triangle() {
    let dir = TempDir::new().unwrap();
    let graph = write(dir.path(), "k3.txt", "3 3\n0 1\n1 2\n0 2\n");
    let out = treecount(&[
        "count",
        "--graph",
        &graph,
        "--template",
        "u3",
        "--iters",
        "2000",
        "--seed",
        "5",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let est = v["result"]["estimate"].as_f64().unwrap();
    assert!((est - 3.0).abs() < 0.5, "{est}");
    assert_eq!(v["graph"]["n"], 3);
    assert!(v["timing"]["total_seconds"].as_f64().is_some());
}

#[test]
fn count_is_deterministic_modulo_timing() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (path, workers) in [(&a, "1"), (&b, "3")] {
        let out = treecount(&[
            "count",
            "--graph",
            "er:n=80,p=0.1,seed=4",
            "--template",
            "u5",
            "--iters",
            "5",
            "--seed",
            "9",
            "--workers",
            workers,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(without_timing(&a), without_timing(&b));

    let csv_a = dir.path().join("a.csv");
    let csv_b = dir.path().join("b.csv");
    for path in [&csv_a, &csv_b] {
        let out = treecount(&[
            "count",
            "--graph",
            "er:n=50,p=0.1,seed=2",
            "--template",
            "u5",
            "--iters",
            "4",
            "--format",
            "csv",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let text = fs::read_to_string(&csv_a).unwrap();
    assert_eq!(text, fs::read_to_string(&csv_b).unwrap());
    assert_eq!(text.lines().count(), 5);
    assert!(text.starts_with("iteration,rooted_total,estimate,stderr"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let graph = write(dir.path(), "g.txt", "0 1\n1 2\n");
    let bad = write(dir.path(), "cycle.txt", "0 1\n1 2\n2 0\n");
    let out = treecount(&["count", "--graph", &graph, "--template", &bad]);
    assert_eq!(out.status.code(), Some(1));
    let out = treecount(&["count", "--graph", &graph, "--template", "u5", "--mem-budget", "10"]);
    assert_eq!(out.status.code(), Some(2));
    let out = treecount(&["verify", "--graph", "er:n=60,p=0.1", "--template", "u3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = treecount(&[
        "count",
        "--graph",
        dir.path().join("missing.txt").to_str().unwrap(),
        "--template",
        "u3",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_small_instance() {
    let out = treecount(&[
        "verify",
        "--graph",
        "er:n=20,p=0.3,seed=1",
        "--template",
        "u3",
        "--iters",
        "3000",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["relative_error"].as_f64().unwrap() < 0.1);
}

#[test]
fn bench_grid_and_model() {
    let dir = TempDir::new().unwrap();
    let config = write(
        dir.path(),
        "grid.conf",
        "graph = er:n=200,p=0.02,seed=1\ngraph = er:n=200,p=0.15,seed=2\ntemplate = u3, u7\nengines = baseline, pruned, vectorized\nworkers = 1\n",
    );
    let csv = dir.path().join("bench.csv");
    let out = treecount(&["bench", "--config", &config, "--out", csv.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 13);
    let header = text.lines().next().unwrap();
    for col in [
        "seconds",
        "rooted_total",
        "column_passes",
        "flops",
        "speedup_vs_baseline",
        "plan_shape",
    ] {
        assert!(header.contains(col), "missing {col}");
    }

    let out = treecount(&["model", "--input", csv.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["predictions"].as_array().unwrap().len(), 12);
    assert_eq!(v["bounds"].as_array().unwrap().len(), 4);
}

#[test]
fn generate_and_plan() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("rmat.txt");
    let out = treecount(&[
        "generate",
        "rmat",
        "--scale",
        "8",
        "--edges",
        "1000",
        "--skew",
        "4",
        "--seed",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let header = fs::read_to_string(&path).unwrap();
    assert!(header.starts_with("256 "));

    let out = treecount(&["plan", "--template", "u5"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["nodes"].as_array().unwrap().len(), 9);
}

#[test]
fn dump_table_sums_to_rooted_total() {
    let dir = TempDir::new().unwrap();
    let table = dir.path().join("table.csv");
    let out = treecount(&[
        "count",
        "--graph",
        "er:n=40,p=0.2,seed=6",
        "--template",
        "u5",
        "--seed",
        "2",
        "--dump-table",
        table.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let total = v["result"]["rooted_totals"][0].as_f64().unwrap();
    let mut reader = csv::Reader::from_path(&table).unwrap();
    let sum: f64 = reader.records().map(|r| r.unwrap()[2].parse::<f64>().unwrap()).sum();
    assert_eq!(sum, total);
}
