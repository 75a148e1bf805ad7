use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn hecke(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hecke")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn build_fixtures(dir: &Path, names: &[&str]) {
    let mut args = vec!["fixtures", "build", "--out", dir.to_str().unwrap()];
    args.extend_from_slice(names);
    let o = hecke(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn fixtures_list_and_deterministic_build() {
    let o = hecke(&["fixtures", "list"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().count() >= 8);
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    build_fixtures(a.path(), &[]);
    build_fixtures(b.path(), &[]);
    let mut names: Vec<_> = fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() >= 8);
    for n in names {
        assert_eq!(fs::read(a.path().join(&n)).unwrap(), fs::read(b.path().join(&n)).unwrap(), "{n:?}");
    }
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    build_fixtures(dir.path(), &["h1-example"]);
    let good = dir.path().join("h1-example.json");
    let o = hecke(&["verify", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("all relations hold"));

    let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&good).unwrap()).unwrap();
    v["mats"]["X1"] = serde_json::json!([["2", "0"], ["0", "2"]]);
    let bad = dir.path().join("bad.json");
    fs::write(&bad, v.to_string()).unwrap();
    let o = hecke(&["verify", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));

    let broken = dir.path().join("broken.json");
    fs::write(&broken, "{\"dim\": ").unwrap();
    assert_eq!(hecke(&["verify", broken.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(hecke(&["verify", "/nonexistent/file.json"]).status.code(), Some(2));
}

#[test]
fn character_formats() {
    let dir = tempfile::tempdir().unwrap();
    build_fixtures(dir.path(), &["katoA3"]);
    let f = dir.path().join("katoA3.json");
    assert_eq!(stdout(&hecke(&["char", f.to_str().unwrap()])).trim(), "6[(7,7,7)]");
    let json = stdout(&hecke(&["char", "--format", "json", f.to_str().unwrap()]));
    let ch = hecke::characters::FormalCharacter::from_json(&json).unwrap();
    assert_eq!(ch.dim(), 6);
    let csv = stdout(&hecke(&["char", "--format", "csv", f.to_str().unwrap()]));
    assert!(csv.contains('6'));
}

#[test]
fn crystal_f_splits_on_l_q2() {
    let dir = tempfile::tempdir().unwrap();
    build_fixtures(dir.path(), &["L-a0-q2"]);
    let f = dir.path().join("L-a0-q2.json");
    let o = hecke(&["crystal", "f", "--a", "1", f.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["tag"], "SplitPair");
    let dims: Vec<_> = v["parts"].as_array().unwrap().iter().map(|p| p["dim"].as_u64().unwrap()).collect();
    assert_eq!(dims, vec![4, 4]);
}

#[test]
fn clifford_and_eps() {
    let dir = tempfile::tempdir().unwrap();
    build_fixtures(dir.path(), &["h1-example", "L-a0-q2"]);
    let h1 = dir.path().join("h1-example.json");
    let o = stdout(&hecke(&["clifford", "--format", "json", h1.to_str().unwrap()]));
    let v: serde_json::Value = serde_json::from_str(&o).unwrap();
    assert_eq!(v["outcome"], "Splits");
    assert_eq!(v["mu"], "-25");
    let l = dir.path().join("L-a0-q2.json");
    assert_eq!(stdout(&hecke(&["eps", l.to_str().unwrap(), "--a", "9"])).trim(), "1");
    assert_eq!(stdout(&hecke(&["eps", l.to_str().unwrap(), "--a", "5"])).trim(), "0");
}

#[test]
fn multisegment_ops() {
    assert_eq!(stdout(&hecke(&["mseg", "f", "--gamma", "[(0)]", "--a", "1"])).trim(), "[(0..1)]");
    assert_eq!(stdout(&hecke(&["mseg", "eps", "--gamma", "[(0),(1)]", "--a", "0"])).trim(), "1");
    assert_eq!(stdout(&hecke(&["mseg", "e", "--gamma", "[(0)]", "--a", "1"])).trim(), "0");
    assert_eq!(hecke(&["mseg", "f", "--gamma", "[(0),", "--a", "1"]).status.code(), Some(2));
}

#[test]
fn dictionary_edge() {
    let o = hecke(&["dict", "--gamma", "[(0)]", "--a", "1/5"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], true);
}

#[test]
fn graph_dot_is_stable_across_seeds() {
    let a = hecke(&["graph", "--window", "1", "--n", "2", "--dot"]);
    let b = hecke(&["--seed", "12345", "graph", "--window", "1", "--n", "2", "--dot"]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).starts_with("digraph"));
    assert_eq!(hecke(&["graph", "--n", "4"]).status.code(), Some(1));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.json");
    let o = hecke(&["--out", out.to_str().unwrap(), "graph", "--window", "1", "--n", "1"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["nodes"].as_array().unwrap().len(), 7);
}
