use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn arborlat(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arborlat"))
        .current_dir(dir)
        .env_remove("ARBORLAT_SEED")
        .env_remove("ARBORLAT_CAP_VERTICES")
        .env_remove("ARBORLAT_CAP_GROUP")
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn with_fixtures() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    assert!(arborlat(dir.path(), &["fixtures"]).status.success());
    dir
}

#[test]
fn fixture_graph_validates() {
    let dir = with_fixtures();
    let out = arborlat(dir.path(), &["validate", "--graph", "x.lg", "--orbits", "os240.os"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("violations 0"));
}

#[test]
fn corrupted_graph_fails_validation() {
    let dir = with_fixtures();
    let text = fs::read_to_string(dir.path().join("x.lg")).unwrap();
    let bad = text.replacen("edge a1 x x 1 61", "edge a1 x x 1 62", 1);
    assert_ne!(bad, text);
    fs::write(dir.path().join("bad.lg"), bad).unwrap();
    let out = arborlat(dir.path(), &["validate", "--graph", "bad.lg", "--orbits", "os240.os"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("duplicate-label"));
}

#[test]
fn obstruction_report() {
    let dir = with_fixtures();
    let out = arborlat(dir.path(), &["obstruction", "--f1", "a5.pg", "--f2", "c60.pg"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("factors differ: {A_5} vs {C_2,C_2,C_3,C_5}"));
}

#[test]
fn input_errors_exit_two() {
    let dir = with_fixtures();
    let out = arborlat(dir.path(), &["factors", "--group", "missing.pg"]);
    assert_eq!(out.status.code(), Some(2));
    fs::write(dir.path().join("broken.pg"), "degree 3\n1 2\n").unwrap();
    let out = arborlat(dir.path(), &["factors", "--group", "broken.pg"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("line 2"));
}

#[test]
fn caps_exit_two() {
    let dir = with_fixtures();
    let out = arborlat(
        dir.path(),
        &["stabilizer", "--graph", "toy3.lg", "--group", "s3.pg", "--radius", "3", "--cap", "10"],
    );
    assert_eq!(out.status.code(), Some(2));
    let out = arborlat(dir.path(), &["factors", "--group", "f240.pg", "--cap-group", "100"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn stabilizer_and_fins_on_toy() {
    let dir = with_fixtures();
    let out = arborlat(dir.path(), &["stabilizer", "--graph", "toy3.lg", "--group", "s3.pg", "--radius", "2"]);
    assert!(stdout(&out).contains("enumerated 48"));
    let out = arborlat(dir.path(), &["fins-count", "--graph", "toy3.lg", "--group", "s3.pg", "--radius", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("fin-maps 48"));
    let out = arborlat(
        dir.path(),
        &["fins-extend", "--graph", "toy3.lg", "--group", "s3.pg", "--f0", "2 1 3"],
    );
    assert!(stdout(&out).contains("moved-at-root 6"));
}

#[test]
fn lift_extend_and_psi_files() {
    let dir = with_fixtures();
    let d = dir.path();
    assert!(arborlat(d, &["lift", "--graph", "toy3.lg", "--radius", "3", "--out", "t.tb"]).status.success());
    let out = arborlat(
        d,
        &["extend", "--dom", "t.tb", "--cod", "t.tb", "--group", "s3.pg", "--f0", "3 1 2", "--radius", "2", "--out", "m.bm"],
    );
    assert_eq!(out.status.code(), Some(0));
    let out = arborlat(d, &["lambda", "--ball", "t.tb", "--group", "s3.pg", "--f", "3 1 2", "--radius", "2", "--out", "l.bm"]);
    assert!(stdout(&out).contains("psi (3 1 2)"));
    let out = arborlat(d, &["psi", "--ball", "t.tb", "--map", "l.bm", "--group", "s3.pg"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn relabel_from_theta_file() {
    let dir = with_fixtures();
    let out = arborlat(dir.path(), &["relabel", "--theta", "theta.td"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("conjugator-member true"));
}

#[test]
fn seeded_runs_are_reproducible() {
    let dir = with_fixtures();
    let run = |seed: &str| {
        let out = arborlat(dir.path(), &["lift", "--orbits", "os3.os", "--radius", "3", "--seed", seed]);
        stdout(&out)
    };
    assert_eq!(run("4"), run("4"));
    let a = arborlat(dir.path(), &["example-120"]);
    let b = arborlat(dir.path(), &["example-120"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
