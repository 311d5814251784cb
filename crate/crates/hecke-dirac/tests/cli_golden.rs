//! CLI output against checked-in golden files. Set HECKE_DIRAC_BLESS=1 to rewrite them.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hecke-dirac"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn golden(name: &str, args: &[&str], code: i32) {
    let out = run(args);
    assert_eq!(out.status.code(), Some(code), "{}: {}", name, String::from_utf8_lossy(&out.stderr));
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    let got = String::from_utf8(out.stdout).unwrap();
    if std::env::var_os("HECKE_DIRAC_BLESS").is_some() {
        std::fs::write(&path, &got).unwrap();
        return;
    }
    let expect = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden {}", name));
    assert_eq!(got, expect, "{}", name);
}

#[test]
fn golden_cohomology() {
    golden(
        "cohomology_b2_simple.json",
        &["dirac-cohomology", "--group", "B2", "--t", "0", "--c", "1", "--sigma", "11x0", "--simple"],
        0,
    );
    golden(
        "cohomology_a1_standard.json",
        &["dirac-cohomology", "--group", "A1", "--t", "1", "--c", "1/3", "--sigma", "triv"],
        0,
    );
    golden(
        "cohomology_b2_simple.txt",
        &["dirac-cohomology", "--group", "B2", "--t", "0", "--c", "1", "--sigma", "11x0", "--simple", "--format", "table"],
        0,
    );
}

#[test]
fn golden_partition_and_unitarity() {
    golden("partition_b2.json", &["partition", "--group", "B2", "--c", "1"], 0);
    golden("unitarity_a1_quarter.json", &["unitarity", "--group", "A1", "--sigma", "triv", "--c", "1/4", "--K", "6"], 0);
    golden("unitarity_a1_two.json", &["unitarity", "--group", "A1", "--sigma", "triv", "--c", "2", "--K", "3"], 0);
}

#[test]
fn golden_verify_and_groups() {
    golden("verify_a1.json", &["verify", "--group", "A1", "--t", "1", "--c", "1/2"], 0);
    golden("verify_z3_table.txt", &["verify", "--group", "Z3", "--t", "0", "--c", "1", "--format", "table"], 0);
    golden("pbw_corrupted_a1.json", &["pbw-check", "--group", "A1", "--preset", "corrupted"], 1);
    golden("export_a1.json", &["export-group", "--group", "A1"], 0);
}

#[test]
fn b2_verify_passes() {
    let out = run(&["verify", "--group", "B2", "--t", "1", "--c", "1", "--format", "table"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| l.contains("pass")));
    let out = run(&["verify", "--group", "B2", "--preset", "gah", "--c", "short=1", "--c", "long=1/2"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["verify", "--group", "A1", "--preset", "corrupted"]).status.code(), Some(1));
    assert_eq!(run(&["dirac-cohomology", "--group", "A1", "--sigma", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--group", "A1", "--c", "1/0"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--group", "Q7"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--group", "B2", "--c", "medium=1"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--group", "A1", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["dirac-cohomology", "--group", "A1", "--t", "1", "--c", "1", "--sigma", "triv", "--K", "1"]).status.code(), Some(2));
    let out = run(&["dirac-cohomology", "--group", "A1", "--t", "1", "--c", "1", "--sigma", "triv", "--K", "1"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("at least 2"));
}

#[test]
fn output_is_byte_stable() {
    let args = ["partition", "--group", "A2", "--c", "1/2"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn config_file_with_flag_override() {
    let dir = std::env::temp_dir().join(format!("hecke-dirac-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "# A1 example\ngroup = A1\nt = 1\nc = 1/3\nsigma = sgn\nformat = table\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let out = run(&["dirac-cohomology", "--config", cfg]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("triv"));
    // flag beats file
    let out = run(&["dirac-cohomology", "--config", cfg, "--sigma", "triv"]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("sgn"));
    let path = dir.join("out.json");
    let out = run(&["dirac-cohomology", "--config", cfg, "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["sigma"], "sgn");
    std::fs::write(dir.join("bad.cfg"), "colour = blue\n").unwrap();
    let out = run(&["verify", "--config", dir.join("bad.cfg").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
