use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn braidroute(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_braidroute")).args(args).current_dir(dir).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn order_prints_one_word() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("a.txt"), "1 2\n").unwrap();
    fs::write(dir.path().join("b.txt"), "2 1\n").unwrap();
    fs::write(dir.path().join("c.txt"), "1 2 1\n").unwrap();
    fs::write(dir.path().join("d.txt"), "2 1 2\n").unwrap();
    let run = |a: &str, b: &str| {
        let o = braidroute(&["order", "--strands", "3", a, b], dir.path());
        assert!(o.status.success());
        stdout(&o).trim().to_string()
    };
    assert_eq!(run("a.txt", "b.txt"), "LESS");
    assert_eq!(run("b.txt", "a.txt"), "GREATER");
    assert_eq!(run("c.txt", "d.txt"), "EQUAL");
}

#[test]
fn index_with_cache() {
    let dir = tempfile::tempdir().unwrap();
    let o = braidroute(&["index", "--braid", "1 1", "--strands", "2", "--mod", "2", "--cache", "c.bin"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).trim(), "2");
    assert!(dir.path().join("c.bin").exists());

    fs::write(dir.path().join("c.bin"), b"garbage").unwrap();
    let o = braidroute(&["index", "--braid", "1", "--strands", "2", "--mod", "2", "--cache", "c.bin"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bad_modulus_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = braidroute(&["index", "--braid", "1", "--strands", "2", "--mod", "1"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = braidroute(&["invariant", "--mod", "1"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn burau_reports_symplectic_image() {
    let dir = tempfile::tempdir().unwrap();
    let o = braidroute(&["burau", "--braid", "1 -2", "--strands", "3"], dir.path());
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let expected = ((3.0 + 5f64.sqrt()) / 2.0).ln();
    assert!((v["spectral_log"].as_f64().unwrap() - expected).abs() < 1e-9);
    assert_eq!(v["symplectic"].as_array().unwrap().len(), 3);
}

#[test]
fn invariant_runs_are_identical_and_compare() {
    let dir = tempfile::tempdir().unwrap();
    for out in ["r1.json", "r2.json"] {
        let o = braidroute(&["invariant", "--max-doublings", "3", "--seed", "0", "--out", out], dir.path());
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let r1 = fs::read(dir.path().join("r1.json")).unwrap();
    assert_eq!(r1, fs::read(dir.path().join("r2.json")).unwrap());

    let o = braidroute(&["compare", "r1.json", "r2.json"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("\"indistinguishable\""));

    let o = braidroute(&["invariant", "--max-doublings", "3", "--depth", "2", "--out", "r3.json"], dir.path());
    assert!(o.status.success());
    let o = braidroute(&["compare", "r1.json", "r3.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn zero_doublings_exits_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let o = braidroute(&["invariant", "--max-doublings", "0"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["stages"].as_array().unwrap().is_empty());
    assert!(!v["notes"].as_array().unwrap().is_empty());
}

#[test]
fn cascade_record_feeds_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let o = braidroute(&["cascade", "--max-doublings", "2", "--out", "rec.json", "--csv", "rec.csv"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("rec.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    let o = braidroute(&["invariant", "--input", "rec.json", "--record", "rec.json"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["route"]["invariants"][0]["index_terms"].as_array().unwrap().len(), 4);
}

#[test]
fn config_file_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c.toml"), "depth = 3\nbogus = 1\n").unwrap();
    let o = braidroute(&["invariant", "--config", "c.toml"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    fs::write(dir.path().join("c.toml"), "depth = 2\nmax_doublings = 2\nmoduli = [2, 3]\n").unwrap();
    let o = braidroute(&["invariant", "--config", "c.toml"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["invariants"][1]["index_terms"].as_array().unwrap().len(), 2);
}
