use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn spark(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spark"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spark runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        spark(dir.path(), &["run", "--bogus"]).status.code(),
        Some(2)
    );
    assert_eq!(spark(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(spark(dir.path(), &[]).status.code(), Some(2));
    assert_eq!(
        spark(dir.path(), &["run", "--config", "nope"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        spark(dir.path(), &["run", "--bench", "MCF"]).status.code(),
        Some(2)
    );
}

#[test]
fn one_cell_run_then_aggregate_gives_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(spark(d, &["gen", "spd", "--n", "60", "--name", "add32"])
        .status
        .success());
    let run = spark(
        d,
        &[
            "run",
            "--config",
            "base",
            "--bench",
            "SPMATVEC",
            "--matrix",
            "add32",
            "--in-process",
        ],
    );
    assert!(run.status.success(), "{}", stdout(&run));
    assert!(d.join("results/base/SPMATVEC__add32.time").is_file());
    assert!(spark(d, &["aggregate"]).status.success());
    let dat = fs::read_to_string(d.join("exp/data/spark.dat")).unwrap();
    assert_eq!(dat.lines().count(), 1);
    assert!(dat.starts_with("base SPMATVEC add32 "));

    let rep = spark(d, &["report"]);
    assert!(rep.status.success());
    assert!(stdout(&rep).contains("nothing to compare"));
}

#[test]
fn asm_runs_on_none() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(spark(d, &["gen", "mesh", "--nx", "8", "--ny", "6"])
        .status
        .success());
    let run = spark(
        d,
        &[
            "run",
            "--config",
            "base",
            "O2",
            "--bench",
            "ASM",
            "--in-process",
            "--policy",
            "1,3,min",
        ],
    );
    assert!(run.status.success(), "{}", stdout(&run));
    assert!(spark(d, &["aggregate"]).status.success());
    let dat = fs::read_to_string(d.join("exp/data/spark.dat")).unwrap();
    let matrices: Vec<&str> = dat.lines().map(|l| l.split(' ').nth(2).unwrap()).collect();
    assert_eq!(matrices, ["none", "none"]);
    assert!(spark(d, &["report"]).status.success());
    assert!(d.join("exp/report/none.svg").is_file());
}

#[test]
fn missing_matrix_fails_the_run() {
    let dir = tempfile::tempdir().unwrap();
    fs::create_dir(dir.path().join("data")).unwrap();
    let run = spark(
        dir.path(),
        &[
            "run",
            "--config",
            "base",
            "--bench",
            "TRMAT",
            "--matrix",
            "absent",
            "--in-process",
        ],
    );
    assert_eq!(run.status.code(), Some(1));
    assert!(stdout(&run).contains("FAILED base TRMAT absent"));
}

#[test]
fn inspect_reports_characteristics() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(spark(d, &["gen", "standins"]).status.success());
    let out = spark(d, &["inspect", "data/sherman3.mtx"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("dimensions: 5005 x 5005"));
    assert!(text.contains("symmetry: structural"));
    assert!(text.contains("synthetic stand-in: yes"));
    assert!(text.contains("characteristics: match"));

    // Same name, wrong shape: a validation failure.
    assert!(spark(d, &["gen", "spd", "--n", "10", "--name", "add32"])
        .status
        .success());
    let out = spark(d, &["inspect", "data/add32.mtx"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("MISMATCH"));

    assert_eq!(
        spark(d, &["inspect", "data/nothing.mtx"]).status.code(),
        Some(1)
    );
}

#[test]
fn config_file_selects_configurations() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(
        d.join("spark.conf"),
        "id = base\ncflags = -C opt-level=0\nid = fast\ncflags = -C opt-level=3\n",
    )
    .unwrap();
    assert!(spark(d, &["gen", "spd", "--n", "30", "--name", "m"])
        .status
        .success());
    let run = spark(
        d,
        &[
            "run",
            "--config-file",
            "spark.conf",
            "--bench",
            "TRMAT",
            "--in-process",
            "--policy",
            "0,3,median",
        ],
    );
    assert!(run.status.success(), "{}", stdout(&run));
    assert!(d.join("results/fast/TRMAT__m.time").is_file());
    fs::write(d.join("bad.conf"), "cflags = x\n").unwrap();
    assert_eq!(
        spark(d, &["run", "--config-file", "bad.conf"])
            .status
            .code(),
        Some(1)
    );
}
