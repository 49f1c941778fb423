use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn trident(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trident")).args(args).output().expect("binary runs")
}

fn trident_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trident")).args(args).env(key, value).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

const K4_EL: &str = "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";

/// 2K4 plus a triangle: 11 vertices, 9 triangles, the bound for d = 3.
const TIGHT_EL: &str = "11 15\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n4 5\n4 6\n4 7\n5 6\n5 7\n6 7\n8 9\n8 10\n9 10\n";

#[test]
fn count_k4_graph6() {
    let path = scratch("k4.g6", "C~\n");
    let o = trident(&["count", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "triangles=4\n");
}

#[test]
fn count_json_and_cliques() {
    let path = scratch("k4.el", K4_EL);
    let o = trident(&["count", path.to_str().unwrap(), "-t", "4", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["count"], 1);
    assert_eq!(v["t"], 4);
    assert_eq!(v["m"], 6);
}

#[test]
fn bound_prints_decomposition() {
    let o = trident(&["bound", "11", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "q=2 r=3 bound=9\n");
    let o = trident(&["bound", "11", "3", "4", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((v["q"].as_u64(), v["r"].as_u64(), v["bound"].as_u64()), (Some(2), Some(3), Some(2)));
}

#[test]
fn bound_rejects_bad_arguments() {
    assert_eq!(trident(&["bound", "11", "0"]).status.code(), Some(2));
    assert_eq!(trident(&["bound", "11", "3", "2"]).status.code(), Some(2));
    assert_eq!(trident(&["bound", "eleven", "3"]).status.code(), Some(2));
}

#[test]
fn certify_then_verify() {
    let graph = scratch("tight.el", TIGHT_EL);
    let cert = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests").join("tight.cert.json");
    let o = trident(&["certify", graph.to_str().unwrap(), "-d", "3", "-o", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(v["header"]["bound"], 9);
    assert_eq!(v["totals"]["total_triangles"], 9);

    let o = trident(&["verify", graph.to_str().unwrap(), cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "valid\n");
}

#[test]
fn verify_rejects_tampered_certificate() {
    let graph = scratch("k4-tamper.el", K4_EL);
    let o = trident(&["certify", graph.to_str().unwrap(), "-d", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let mut cert: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    cert["totals"]["total_triangles"] = serde_json::json!(3);
    let path = scratch("k4-tampered.json", &cert.to_string());
    let o = trident(&["verify", graph.to_str().unwrap(), path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("total mismatch"), "{}", stderr(&o));

    let o = trident(&["verify", graph.to_str().unwrap(), path.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["valid"], false);
    assert_eq!(v["failure"]["reason"], "total_mismatch");
}

#[test]
fn verify_rejects_certificate_for_other_graph() {
    let k4 = scratch("k4-other.el", K4_EL);
    let tight = scratch("tight-other.el", TIGHT_EL);
    let o = trident(&["certify", k4.to_str().unwrap(), "-d", "3"]);
    let cert = scratch("k4-other.json", &stdout(&o));
    let o = trident(&["verify", tight.to_str().unwrap(), cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("hash mismatch"));
}

#[test]
fn certify_rejects_degree_above_d() {
    let graph = scratch("k4-deg.el", K4_EL);
    let o = trident(&["certify", graph.to_str().unwrap(), "-d", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!stderr(&o).is_empty());
}

#[test]
fn enumerate_small_cell() {
    let o = trident(&["enumerate", "-n", "7", "-d", "3", "--json", "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["bound"], 5);
    assert_eq!(v["max_cliques_found"], 5);
    assert_eq!(v["violation_found"], false);
    assert_eq!(v["uniqueness_verdict"], "unique-as-predicted");
    assert_eq!(v["extremal_graphs"].as_array().unwrap().len(), 1);
}

#[test]
fn enumerate_writes_report_file() {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests-report.json");
    let o = trident(&["enumerate", "-n", "4", "-d", "3", "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("max cliques found   4"));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["extremal_graphs"][0], "C~");
}

#[test]
fn enumerate_honors_limit_env() {
    let o = trident_env(&["enumerate", "-n", "5", "-d", "2"], "TRIDENT_MAX_EXHAUSTIVE_N", "4");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("limit of 4"));
    let o = trident(&["enumerate", "-n", "9", "-d", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = trident_env(&["enumerate", "-n", "5", "-d", "2"], "TRIDENT_MAX_EXHAUSTIVE_N", "five");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn complement_check_and_report() {
    let graph = scratch("k4-report.el", K4_EL);
    let o = trident(&["complement-check", graph.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "T(G)+T(Gc)=4 formula=4\n");

    let o = trident(&["report", graph.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["w_count"], 12);
    assert_eq!(v["omega_count"], 96);
    assert_eq!(v["degree_cube_sum"], 108);
    assert_eq!(v["min_slack"], 0);
}

#[test]
fn random_source_is_seeded() {
    let a = trident(&["report", "random:40:4", "--seed", "5", "--json"]);
    let b = trident(&["report", "random:40:4", "--seed", "5", "--json"]);
    let c = trident(&["report", "random:40:4", "--seed", "6", "--json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert_ne!(stdout(&a), stdout(&c));
}

#[test]
fn input_errors_exit_two() {
    let bad = scratch("bad.el", "3 2\n0 1\n");
    assert_eq!(trident(&["count", bad.to_str().unwrap()]).status.code(), Some(2));
    let loop_edge = scratch("loop.el", "3 1\n1 1\n");
    assert_eq!(trident(&["count", loop_edge.to_str().unwrap()]).status.code(), Some(2));
    let unknown = scratch("k4.dat", K4_EL);
    let o = trident(&["count", unknown.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--format"));
    let o = trident(&["count", unknown.to_str().unwrap(), "--format", "el"]);
    assert_eq!(stdout(&o), "triangles=4\n");
    assert_eq!(trident(&["count", "missing.g6"]).status.code(), Some(2));
    assert_eq!(trident(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(trident(&[]).status.code(), Some(2));
}
