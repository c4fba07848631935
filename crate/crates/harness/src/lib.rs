//! Timing harness: runs benchmark × input × configuration grids, gates
//! every output through its oracle, stores per-configuration times and
//! aggregates them into `spark.dat` with speedup reports.

pub mod aggregate;
pub mod config;
pub mod error;
pub mod executor;
pub mod gate;
pub mod record;
pub mod report;
pub mod results;
pub mod selfcheck;
pub mod suite;

pub use aggregate::{aggregate, collect, spark_dat_path, Aggregation, SkippedCell};
pub use config::{default_configs, parse_config_file, BenchConfig, BASE};
pub use error::{HarnessError, Result};
pub use executor::{BuildPerConfig, CellRun, CellSpec, Executor, InProcess};
pub use gate::{checksum, OracleGate};
pub use record::{parse_spark_dat, BenchRecord};
pub use report::{report, ReportSummary};
pub use results::{read_seconds, time_file_path, TimeRecord};
pub use suite::{run_benchmark, run_suite, CellOutcome, SuiteContext, SuiteReport};
