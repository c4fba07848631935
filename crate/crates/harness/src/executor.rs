use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::Command;

use spark_core::bench::{run_cell, BenchInputs, BenchParams, Benchmark, Timing, TimingPolicy};

use crate::config::BenchConfig;
use crate::error::{HarnessError, Result};

/// What one executed cell hands back: its timing and its output as JSON.
#[derive(Debug, Clone)]
pub struct CellRun {
    pub timing: Timing,
    pub output_json: String,
}

/// One cell to execute.
#[derive(Debug, Clone, Copy)]
pub struct CellSpec<'a> {
    pub benchmark: Benchmark,
    pub input: &'a str,
    pub data_dir: &'a Path,
    pub policy: &'a TimingPolicy,
    pub params: &'a BenchParams,
}

/// Runs benchmark cells under a configuration.
pub trait Executor {
    /// Called once per configuration before any of its cells run.
    fn prepare(&mut self, config: &BenchConfig) -> Result<()>;

    fn run(&mut self, config: &BenchConfig, cell: CellSpec<'_>) -> Result<CellRun>;
}

/// Runs cells inside the calling process. Build flags have no effect; this
/// exists for tests and quick checks.
#[derive(Debug, Default)]
pub struct InProcess {
    /// Perturb every output, to exercise the oracle gate.
    pub corrupt: bool,
}

impl Executor for InProcess {
    fn prepare(&mut self, _config: &BenchConfig) -> Result<()> {
        Ok(())
    }

    fn run(&mut self, _config: &BenchConfig, cell: CellSpec<'_>) -> Result<CellRun> {
        let inputs = BenchInputs::load(cell.benchmark, cell.input, cell.data_dir, *cell.params)?;
        let (timing, mut output) = run_cell(&inputs, cell.policy)?;
        if self.corrupt {
            output.corrupt();
        }
        Ok(CellRun {
            timing,
            output_json: output.to_json(),
        })
    }
}

/// Builds the runner binary once per configuration with the configuration's
/// flags, then executes every cell in a fresh runner process.
#[derive(Debug)]
pub struct BuildPerConfig {
    workspace: PathBuf,
    build_root: PathBuf,
    binaries: HashMap<String, PathBuf>,
    /// Ask the runner to perturb its output, to exercise the oracle gate.
    pub corrupt: bool,
}

const RUNNER_PACKAGE: &str = "spark-runner";

impl BuildPerConfig {
    /// `workspace` holds the top-level manifest; each configuration builds
    /// into `build_root/<id>`.
    pub fn new(workspace: impl Into<PathBuf>, build_root: impl Into<PathBuf>) -> Self {
        Self {
            workspace: workspace.into(),
            build_root: build_root.into(),
            binaries: HashMap::new(),
            corrupt: false,
        }
    }

    /// The workspace this crate was compiled from.
    pub fn default_workspace() -> PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
    }

    fn binary_path(&self, id: &str) -> PathBuf {
        let exe = format!("{RUNNER_PACKAGE}{}", std::env::consts::EXE_SUFFIX);
        self.build_root.join(id).join("release").join(exe)
    }
}

impl Executor for BuildPerConfig {
    fn prepare(&mut self, config: &BenchConfig) -> Result<()> {
        let build_err = |msg: String| HarnessError::Build {
            id: config.id.clone(),
            msg,
        };
        let target_dir = self.build_root.join(&config.id);
        let cargo = std::env::var_os("CARGO").unwrap_or_else(|| "cargo".into());
        let mut cmd = Command::new(cargo);
        cmd.current_dir(&self.workspace)
            .args([
                "build",
                "--release",
                "--quiet",
                "-p",
                RUNNER_PACKAGE,
                "--target-dir",
            ])
            .arg(&target_dir)
            .env("RUSTFLAGS", &config.build_flags)
            // These would override or redirect the flags and target above.
            .env_remove("CARGO_ENCODED_RUSTFLAGS")
            .env_remove("CARGO_TARGET_DIR")
            .env_remove("CARGO_BUILD_TARGET_DIR")
            .env_remove("CARGO_BUILD_RUSTFLAGS");
        if let Some(cc) = &config.compiler_override {
            cmd.env("RUSTC", cc);
        }
        log::info!("building {config}");
        let out = cmd
            .output()
            .map_err(|e| build_err(format!("cannot start cargo: {e}")))?;
        if !out.status.success() {
            return Err(build_err(
                String::from_utf8_lossy(&out.stderr).trim().to_string(),
            ));
        }
        let bin = self.binary_path(&config.id);
        if !bin.is_file() {
            return Err(build_err(format!("{} missing after build", bin.display())));
        }
        self.binaries.insert(config.id.clone(), bin);
        Ok(())
    }

    fn run(&mut self, config: &BenchConfig, cell: CellSpec<'_>) -> Result<CellRun> {
        let bin = self.binaries.get(&config.id).ok_or_else(|| {
            HarnessError::Runner(format!("configuration {} not built", config.id))
        })?;
        let output_path = self.build_root.join(&config.id).join("output.json");
        let mut cmd = Command::new(bin);
        cmd.arg("--bench")
            .arg(cell.benchmark.name())
            .arg("--input")
            .arg(cell.input)
            .arg("--data-dir")
            .arg(cell.data_dir)
            .arg("--warmups")
            .arg(cell.policy.warmup_runs.to_string())
            .arg("--runs")
            .arg(cell.policy.measured_runs.to_string())
            .arg("--agg")
            .arg(cell.policy.aggregator.to_string())
            .arg("--params")
            .arg(cell.params.to_string())
            .arg("--output")
            .arg(&output_path);
        if self.corrupt {
            cmd.arg("--corrupt-output");
        }
        let out = cmd
            .output()
            .map_err(|e| HarnessError::Runner(format!("cannot start {}: {e}", bin.display())))?;
        if !out.status.success() {
            return Err(HarnessError::Runner(
                String::from_utf8_lossy(&out.stderr).trim().to_string(),
            ));
        }
        let timing: Timing = serde_json::from_slice(&out.stdout)
            .map_err(|e| HarnessError::Runner(format!("unreadable timing: {e}")))?;
        let output_json =
            std::fs::read_to_string(&output_path).map_err(|e| HarnessError::io(&output_path, e))?;
        std::fs::remove_file(&output_path).map_err(|e| HarnessError::io(&output_path, e))?;
        Ok(CellRun {
            timing,
            output_json,
        })
    }
}
