use std::fs;
use std::path::{Path, PathBuf};

use spark_core::bench::{BenchParams, Benchmark, TimingPolicy, NO_MATRIX};

use crate::config::{BenchConfig, BASE};
use crate::error::{HarnessError, Result};
use crate::executor::{CellSpec, Executor};
use crate::gate::OracleGate;
use crate::results::{time_file_path, TimeRecord};

/// Where inputs come from and where results go.
#[derive(Debug, Clone)]
pub struct SuiteContext {
    pub data_dir: PathBuf,
    pub results_root: PathBuf,
    pub policy: TimingPolicy,
    pub params: BenchParams,
}

/// Times one cell and passes its output through the oracle gate.
///
/// Returns the record to store; nothing is written here.
pub fn run_benchmark(
    executor: &mut dyn Executor,
    gate: &mut OracleGate,
    config: &BenchConfig,
    benchmark: Benchmark,
    input: &str,
    ctx: &SuiteContext,
) -> Result<TimeRecord> {
    let cell = CellSpec {
        benchmark,
        input,
        data_dir: &ctx.data_dir,
        policy: &ctx.policy,
        params: &ctx.params,
    };
    let run = executor.run(config, cell)?;
    let checksum = gate.admit(
        benchmark,
        input,
        &ctx.data_dir,
        &ctx.params,
        &run.output_json,
    )?;
    Ok(TimeRecord {
        seconds: run.timing.aggregate,
        timing: run.timing,
        policy: ctx.policy,
        checksum,
        build_flags: config.build_flags.clone(),
    })
}

/// Outcome of one grid cell.
#[derive(Debug)]
pub struct CellOutcome {
    pub config: String,
    pub benchmark: Benchmark,
    pub input: String,
    pub result: std::result::Result<TimeRecord, HarnessError>,
}

#[derive(Debug, Default)]
pub struct SuiteReport {
    pub cells: Vec<CellOutcome>,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &CellOutcome> {
        self.cells.iter().filter(|c| c.result.is_err())
    }

    pub fn all_passed(&self) -> bool {
        self.failures().next().is_none()
    }
}

/// The inputs a benchmark runs on: every matrix, or `none` for ASM.
pub fn inputs_for(benchmark: Benchmark, matrices: &[String]) -> Vec<String> {
    if benchmark.takes_matrix() {
        matrices.to_vec()
    } else {
        vec![NO_MATRIX.to_string()]
    }
}

/// Runs the grid config-major, then benchmark, then input, one cell at a
/// time. Each passing cell is written to its time file; a failing cell
/// removes any stale file for that cell and the suite moves on.
///
/// The reference configuration must be among `configs` or already have
/// results on disk.
pub fn run_suite(
    executor: &mut dyn Executor,
    configs: &[BenchConfig],
    benchmarks: &[Benchmark],
    matrices: &[String],
    ctx: &SuiteContext,
) -> Result<SuiteReport> {
    let base_on_disk = ctx.results_root.join(BASE).is_dir();
    if !base_on_disk && !configs.iter().any(BenchConfig::is_base) {
        return Err(HarnessError::MissingBase);
    }
    let mut gate = OracleGate::new();
    let mut report = SuiteReport::default();
    for config in configs {
        let prepared = executor.prepare(config);
        if let Err(e) = &prepared {
            log::error!("{e}");
        }
        for &benchmark in benchmarks {
            for input in inputs_for(benchmark, matrices) {
                let path = time_file_path(&ctx.results_root, &config.id, benchmark.name(), &input);
                let result = match &prepared {
                    Err(e) => Err(HarnessError::Build {
                        id: config.id.clone(),
                        msg: e.to_string(),
                    }),
                    Ok(()) => run_benchmark(executor, &mut gate, config, benchmark, &input, ctx)
                        .and_then(|rec| rec.write(&path).map(|()| rec)),
                };
                match &result {
                    Ok(rec) => {
                        log::info!("{} {benchmark} {input}: {:.6} s", config.id, rec.seconds)
                    }
                    Err(e) => {
                        log::error!("{} {benchmark} {input}: {e}", config.id);
                        remove_stale(&path)?;
                    }
                }
                report.cells.push(CellOutcome {
                    config: config.id.clone(),
                    benchmark,
                    input,
                    result,
                });
            }
        }
    }
    Ok(report)
}

fn remove_stale(path: &Path) -> Result<()> {
    match fs::remove_file(path) {
        Err(e) if e.kind() != std::io::ErrorKind::NotFound => Err(HarnessError::io(path, e)),
        _ => Ok(()),
    }
}
