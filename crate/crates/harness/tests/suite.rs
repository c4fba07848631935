use std::fs;
use std::path::Path;
use std::time::SystemTime;

use spark_core::bench::{BenchParams, Benchmark, TimingPolicy};
use spark_core::mat_io::{gen_spd, write_matrix_market, WriteOptions};
use spark_harness::{
    aggregate, run_benchmark, run_suite, time_file_path, BenchConfig, HarnessError, InProcess,
    OracleGate, SuiteContext,
};

fn context(root: &Path) -> SuiteContext {
    let data_dir = root.join("data");
    fs::create_dir_all(&data_dir).unwrap();
    let m = gen_spd(40, 3).unwrap();
    write_matrix_market(&data_dir.join("small.mtx"), &m, &WriteOptions::default()).unwrap();
    SuiteContext {
        data_dir,
        results_root: root.join("results"),
        policy: TimingPolicy::default(),
        params: BenchParams {
            jacobi_iterations: 5,
            pcg_iterations: 20,
            spmatmat_cols: 2,
            mesh_cells: (4, 4),
        },
    }
}

fn config(id: &str) -> BenchConfig {
    BenchConfig::new(id, "", None).unwrap()
}

fn files_in(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    names
}

#[test]
fn one_cell_gives_one_file() {
    let root = tempfile::tempdir().unwrap();
    let ctx = context(root.path());
    let report = run_suite(
        &mut InProcess::default(),
        &[config("base")],
        &[Benchmark::Spmatvec],
        &["small".into()],
        &ctx,
    )
    .unwrap();
    assert!(report.all_passed());
    assert_eq!(files_in(&ctx.results_root), ["base"]);
    assert_eq!(
        files_in(&ctx.results_root.join("base")),
        ["SPMATVEC__small.time"]
    );
}

#[test]
fn every_benchmark_passes_and_asm_uses_none() {
    let root = tempfile::tempdir().unwrap();
    let ctx = context(root.path());
    let report = run_suite(
        &mut InProcess::default(),
        &[config("base"), config("opt")],
        &Benchmark::ALL,
        &["small".into()],
        &ctx,
    )
    .unwrap();
    if let Some(cell) = report.failures().next() {
        panic!(
            "{} {} {}: {:?}",
            cell.config, cell.benchmark, cell.input, cell.result
        );
    }
    assert_eq!(report.cells.len(), 18);
    let order: Vec<&str> = report.cells.iter().map(|c| c.config.as_str()).collect();
    assert!(order[..9].iter().all(|c| *c == "base") && order[9..].iter().all(|c| *c == "opt"));
    for id in ["base", "opt"] {
        let names = files_in(&ctx.results_root.join(id));
        assert_eq!(names.len(), 9);
        assert!(names.contains(&"ASM__none.time".to_string()));
    }
    let exp = root.path().join("exp");
    let agg = aggregate(&ctx.results_root, &exp).unwrap();
    assert_eq!(agg.records.len(), 18);
    assert!(agg
        .records
        .iter()
        .any(|r| r.benchmark == "ASM" && r.matrix == "none"));
}

#[test]
fn repeated_runs_agree_on_checksum() {
    let root = tempfile::tempdir().unwrap();
    let ctx = context(root.path());
    let mut gate = OracleGate::new();
    let mut exec = InProcess::default();
    let cfg = config("base");
    let a = run_benchmark(&mut exec, &mut gate, &cfg, Benchmark::Jacit, "small", &ctx).unwrap();
    let b = run_benchmark(&mut exec, &mut gate, &cfg, Benchmark::Jacit, "small", &ctx).unwrap();
    assert_eq!(a.checksum, b.checksum);
    assert_eq!(gate.oracle_calls(), 1);
    assert!(a.seconds > 0.0 && b.seconds > 0.0);
}

#[test]
fn corrupted_output_produces_no_record() {
    let root = tempfile::tempdir().unwrap();
    let ctx = context(root.path());
    let cells = [Benchmark::Spmatvec, Benchmark::Trmat, Benchmark::Asm];
    run_suite(
        &mut InProcess::default(),
        &[config("base")],
        &cells,
        &["small".into()],
        &ctx,
    )
    .unwrap();
    assert_eq!(files_in(&ctx.results_root.join("base")).len(), 3);

    let mut corrupt = InProcess { corrupt: true };
    let report = run_suite(
        &mut corrupt,
        &[config("base")],
        &cells,
        &["small".into()],
        &ctx,
    )
    .unwrap();
    assert_eq!(report.failures().count(), 3);
    for cell in &report.cells {
        assert!(matches!(
            cell.result,
            Err(HarnessError::OracleMismatch { .. })
        ));
    }
    // Stale results from the earlier good run are gone too.
    assert!(files_in(&ctx.results_root.join("base")).is_empty());
}

#[test]
fn missing_input_is_recorded_and_suite_continues() {
    let root = tempfile::tempdir().unwrap();
    let ctx = context(root.path());
    let report = run_suite(
        &mut InProcess::default(),
        &[config("base")],
        &[Benchmark::Trmat],
        &["absent".into(), "small".into()],
        &ctx,
    )
    .unwrap();
    assert_eq!(report.failures().count(), 1);
    assert_eq!(
        files_in(&ctx.results_root.join("base")),
        ["TRMAT__small.time"]
    );
}

#[test]
fn base_required_unless_on_disk() {
    let root = tempfile::tempdir().unwrap();
    let ctx = context(root.path());
    let err = run_suite(
        &mut InProcess::default(),
        &[config("opt")],
        &[Benchmark::Trmat],
        &["small".into()],
        &ctx,
    )
    .unwrap_err();
    assert!(matches!(err, HarnessError::MissingBase));
}

#[test]
fn existing_base_results_are_reused() {
    let root = tempfile::tempdir().unwrap();
    let ctx = context(root.path());
    let grid = (&[Benchmark::Trmat][..], &["small".to_string()][..]);
    run_suite(
        &mut InProcess::default(),
        &[config("base")],
        grid.0,
        grid.1,
        &ctx,
    )
    .unwrap();
    let base_file = time_file_path(&ctx.results_root, "base", "TRMAT", "small");
    let before: (Vec<u8>, SystemTime) = (
        fs::read(&base_file).unwrap(),
        fs::metadata(&base_file).unwrap().modified().unwrap(),
    );

    run_suite(
        &mut InProcess::default(),
        &[config("opt")],
        grid.0,
        grid.1,
        &ctx,
    )
    .unwrap();
    assert_eq!(fs::read(&base_file).unwrap(), before.0);
    assert_eq!(
        fs::metadata(&base_file).unwrap().modified().unwrap(),
        before.1
    );

    let agg = aggregate(&ctx.results_root, &root.path().join("exp")).unwrap();
    let base_seconds = spark_harness::read_seconds(&base_file).unwrap();
    let opt = agg.records.iter().find(|r| r.id == "opt").unwrap();
    assert_eq!(
        opt.reftime,
        format!("{:.6}", base_seconds.max(1e-6))
            .parse::<f64>()
            .unwrap()
    );
}
