use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_dt-regge"));
    c.env_remove("DT_REGGE_CACHE_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn dt-regge")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn write_catalog(dir: &Path, args: &[&str]) -> PathBuf {
    let path = dir.join("catalog.json");
    let mut full = vec!["enumerate"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let out = run(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn enumerate_anchor_counts() {
    let dir = tempfile::tempdir().unwrap();
    for (args, n) in [
        (vec!["--genus", "0", "--vertices", "3", "--q", "2,2,2"], 1),
        (vec!["--genus", "0", "--vertices", "4", "--q", "3,3,3,3"], 2),
        (vec!["--genus", "1", "--vertices", "1", "--q", "6"], 1),
    ] {
        let p = write_catalog(dir.path(), &args);
        let v: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
        assert_eq!(v["cardinality"], n);
        assert_eq!(v["entries"].as_array().unwrap().len(), n);
    }
}

#[test]
fn infeasible_key_is_input_error() {
    let out = run(&["enumerate", "--genus", "0", "--vertices", "4", "--q", "2,2,2,2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("infeasible"));
}

#[test]
fn face_cap_exit_code() {
    let out = run(&["enumerate", "--genus", "0", "--vertices", "9", "--q", "5,5,5,5,5,5,5,5,2"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["enumerate", "--genus", "0", "--vertices", "4", "--q", "3,3,3,3", "--max-faces", "2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn malformed_flags_and_files() {
    assert_eq!(run(&["enumerate", "--genus", "0", "--vertices", "3", "--q", "2,x"]).status.code(), Some(2));
    assert_eq!(run(&["check", "nonsense"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"faces\": 3}").unwrap();
    assert_eq!(run(&["check", "gauss-bonnet", "--in", bad.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&bad, "not json").unwrap();
    assert_eq!(run(&["dual", "--in", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn gauss_bonnet_and_kontsevich_on_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_catalog(dir.path(), &["--genus", "0", "--vertices", "4", "--q", "3,3,3,3"]);
    let out = run(&["check", "gauss-bonnet", "--in", p.to_str().unwrap()]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["schema"], "dt-regge/report/v1");
    for e in v["results"]["entries"].as_array().unwrap() {
        assert_eq!(e["total_over_pi"], "4");
        assert_eq!(e["pass"], true);
    }
    let out = run(&["check", "kontsevich", "--in", p.to_str().unwrap()]);
    assert!(out.status.success());
    for e in json(&out)["results"]["entries"].as_array().unwrap() {
        assert_eq!(e["normalized"].as_i64().unwrap().abs(), 8);
    }
}

#[test]
fn kontsevich_on_torus_theta() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_catalog(dir.path(), &["--genus", "1", "--vertices", "1", "--q", "6"]);
    let out = run(&["check", "kontsevich", "--in", p.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(json(&out)["results"]["entries"][0]["normalized"].as_i64().unwrap().abs(), 4);
}

#[test]
fn dual_then_volume() {
    let dir = tempfile::tempdir().unwrap();
    let tri = dir.path().join("tri.json");
    std::fs::write(
        &tri,
        r#"{"vertex_count":3,"faces":[[1,2,3],[1,3,2]],"gluing":[[[0,0],[1,2]],[[0,1],[1,1]],[[0,2],[1,0]]]}"#,
    )
    .unwrap();
    let graph = dir.path().join("graph.json");
    let out = run(&["dual", "--in", tri.to_str().unwrap(), "--out", graph.to_str().unwrap()]);
    assert!(out.status.success());
    let g: Value = serde_json::from_str(&std::fs::read_to_string(&graph).unwrap()).unwrap();
    assert_eq!(g["darts"], 6);
    let out = run(&["volume", "--in", graph.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(json(&out)["results"]["entries"][0]["volume"], "1/2");
}

#[test]
fn pairing_exit_status_tracks_equality() {
    for (q, n, lhs) in [("2,2,2", "3", "1"), ("3,3,3,3", "4", "36")] {
        let out = run(&["pairing", "--genus", "0", "--vertices", n, "--q", q]);
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        assert_eq!(v["results"]["lhs"], lhs);
        assert_eq!(v["results"]["rhs"], lhs);
    }
    let out = run(&["pairing", "--genus", "1", "--vertices", "1", "--q", "6"]);
    assert_eq!(json(&out)["results"]["lhs"], "3/2");
    let out = run(&["pairing", "--genus", "0", "--vertices", "4", "--q", "2,2,4,4"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["pass"], false);
    assert_eq!(v["results"]["diagnostics"]["all_cells_lhs"], "40");
}

#[test]
fn tau_values() {
    let out = run(&["tau", "--genus", "0", "--d", "0,0,0"]);
    assert_eq!(json(&out)["results"]["intersection"], "1");
    let out = run(&["tau", "--genus", "1", "--d", "1"]);
    assert_eq!(json(&out)["results"]["intersection"], "1/24");
    let out = run(&["tau", "--genus", "0", "--q", "3,3,3,3"]);
    assert!(out.status.success());
    assert_eq!(run(&["tau", "--genus", "0"]).status.code(), Some(2));
}

#[cfg(not(feature = "dvv"))]
#[test]
fn dvv_flag_without_feature() {
    assert_eq!(run(&["tau", "--genus", "2", "--d", "4", "--enable-dvv"]).status.code(), Some(2));
    assert_eq!(run(&["tau", "--genus", "2", "--d", "4"]).status.code(), Some(2));
}

#[test]
fn median_and_rank_checks() {
    let out = run(&["check", "median", "--seed", "11", "--samples", "20"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["results"]["entries"].as_array().unwrap().len(), 20);
    let a = json(&run(&["check", "median", "--seed", "5"]))["results"].clone();
    let b = json(&run(&["check", "median", "--seed", "5"]))["results"].clone();
    assert_eq!(a, b);
    let out = run(&["check", "rank", "--q", "3,4,5"]);
    assert!(out.status.success());
    let ranks: Vec<i64> = json(&out)["results"]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["rank"].as_i64().unwrap())
        .collect();
    assert_eq!(ranks, vec![2, 3, 4]);
}

#[test]
fn cache_reuse_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let c = cache.to_str().unwrap();
    let first = bin()
        .env("DT_REGGE_CACHE_DIR", c)
        .args(["enumerate", "--genus", "0", "--vertices", "4", "--q", "4,2,4,2"])
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&first.stderr).contains("miss"));
    let second = run(&["--cache-dir", c, "enumerate", "--genus", "0", "--vertices", "4", "--q", "4,2,4,2"]);
    assert!(String::from_utf8_lossy(&second.stderr).contains("hit"));
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(run(&["--cache-dir", c, "cache", "verify"]).status.code(), Some(0));
    let ls = json(&run(&["--cache-dir", c, "cache", "ls"]));
    assert_eq!(ls["results"]["files"][0]["q"], serde_json::json!([2, 2, 4, 4]));
    std::fs::write(cache.join("g0_n3_q2-2-2.json"), "{}").unwrap();
    assert_eq!(run(&["--cache-dir", c, "cache", "verify"]).status.code(), Some(1));
    assert_eq!(run(&["cache", "ls"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let a = run(&["enumerate", "--genus", "0", "--vertices", "5", "--q", "3,3,3,3,6"]);
    let b = run(&["enumerate", "--genus", "0", "--vertices", "5", "--q", "3,3,3,3,6", "--serial"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn ribbon_documents_with_other_numberings() {
    let dir = tempfile::tempdir().unwrap();
    let torus = dir.path().join("torus.json");
    std::fs::write(
        &torus,
        r#"{"darts":6,"sigma":[[0,2,4],[1,3,5]],"alpha":[[0,1],[2,3],[4,5]],"boundary_labels":{"0":1}}"#,
    )
    .unwrap();
    let out = run(&["check", "gauss-bonnet", "--in", torus.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(json(&out)["results"]["entries"][0]["expected_over_pi"], "0");
    let out = run(&["volume", "--in", torus.to_str().unwrap()]);
    assert_eq!(json(&out)["results"]["entries"][0]["volume"], "9/4");

    // Two loops joined by a bridge: no triangulation is dual to it.
    let dumbbell = dir.path().join("dumbbell.json");
    std::fs::write(
        &dumbbell,
        r#"{"darts":6,"sigma":[[0,1,2],[3,4,5]],"alpha":[[0,1],[2,3],[4,5]],"boundary_labels":{"0":1,"1":2,"2":3}}"#,
    )
    .unwrap();
    let out = run(&["check", "gauss-bonnet", "--in", dumbbell.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("glued to itself"));
}
