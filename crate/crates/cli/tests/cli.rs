use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_magnitude")).args(args).output().expect("binary runs")
}

fn fixture(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("magnitude-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

#[test]
fn compute_prints_json() {
    let two = fixture("two.csv", "0,1\n1,0\n");
    let out = bin(&["compute", "--input", two.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["payload"]["data"]["result"]["magnitude"].as_f64().unwrap(), 1.0 + 0.5f64.tanh());
}

#[test]
fn exit_codes() {
    let k32 = fixture("k32.txt", "a0 b0\na0 b1\na1 b0\na1 b1\na2 b0\na2 b1\n");
    let k32 = k32.to_str().unwrap();
    let strict = ["compute", "-i", k32, "-f", "graph", "--scale", "0.34657359", "--tol-rcond", "1e-10", "--strict"];
    assert_eq!(bin(&strict).status.code(), Some(3));
    assert_eq!(bin(&strict[..strict.len() - 1]).status.code(), Some(0));
    let bad = fixture("bad.csv", "0,x\nx,0\n");
    assert_eq!(bin(&["compute", "-i", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(bin(&["compute", "--p", "7"]).status.code(), Some(2));
    assert_eq!(bin(&["verify", "pathology", "--output", "csv"]).status.code(), Some(0));
}

#[test]
fn function_csv_has_profile_and_singularity_blocks() {
    let k32 = fixture("k32f.txt", "a0 b0\na0 b1\na1 b0\na1 b1\na2 b0\na2 b1\n");
    let out = bin(&["function", "-i", k32.to_str().unwrap(), "-f", "graph", "--grid", "0.05:4:400", "--output", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let blocks: Vec<&str> = text.split("\n\n").collect();
    assert!(blocks[0].starts_with("t,magnitude,status,min_eig\n"));
    assert_eq!(blocks[0].lines().count(), 401);
    assert!(blocks[1].starts_with("singularity,width,kind\n3.46573590"));
}
