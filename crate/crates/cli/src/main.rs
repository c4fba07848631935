//! `spark`: runs the benchmark grid, aggregates and reports results,
//! verifies kernels against their oracles and manages input data.
//!
//! Exit codes: 0 success, 1 failed validation or run, 2 usage error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spark_core::bench::{BenchParams, Benchmark, TimingPolicy, MESH_FILE};
use spark_core::mat_io::{
    gen_banded, gen_spd, gen_tri_mesh, matrix_name, published_entry, read_matrix_market, standins,
    validate_characteristics, write_matrix_market, Band, WriteOptions,
};
use spark_harness::selfcheck::verify_all;
use spark_harness::{
    aggregate, default_configs, parse_config_file, report, run_suite, spark_dat_path, BenchConfig,
    BuildPerConfig, Executor, InProcess, SuiteContext,
};

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "spark",
    version,
    about = "Irregular sparse kernel benchmark suite"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Time the benchmark grid for each configuration.
    Run(RunArgs),
    /// Collect the results tree into exp/data/spark.dat.
    Aggregate {
        #[arg(long, default_value = "results")]
        results_dir: PathBuf,
        #[arg(long, default_value = "exp")]
        exp_dir: PathBuf,
    },
    /// Write speedup charts and CSV files from spark.dat into exp/report.
    Report {
        #[arg(long, default_value = "exp")]
        exp_dir: PathBuf,
    },
    /// Check every kernel against its oracle.
    Verify {
        #[arg(long, default_value = "data")]
        data_dir: PathBuf,
    },
    /// Write generated inputs to the data directory.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
        #[arg(long, default_value = "data", global = true)]
        data_dir: PathBuf,
        #[arg(long, default_value_t = 1, global = true)]
        seed: u64,
    },
    /// Print a matrix file's characteristics and compare them with the
    /// published ones.
    Inspect { file: PathBuf },
}

#[derive(Args)]
struct RunArgs {
    /// Configuration ids to run; all configured ones when omitted.
    #[arg(long = "config", num_args = 1..)]
    configs: Vec<String>,
    /// Configuration blocks (`id`, `cflags`, `cc`); built-in base/O2/O3
    /// when omitted.
    #[arg(long)]
    config_file: Option<PathBuf>,
    #[arg(long = "bench", num_args = 1..)]
    benchmarks: Vec<Benchmark>,
    /// Matrix names; every `.mtx` in the data directory when omitted.
    #[arg(long = "matrix", num_args = 1..)]
    matrices: Vec<String>,
    #[arg(long, default_value = "data")]
    data_dir: PathBuf,
    #[arg(long, default_value = "results")]
    results_dir: PathBuf,
    /// `warmups,runs,aggregator`.
    #[arg(long, default_value_t = TimingPolicy::default())]
    policy: TimingPolicy,
    #[arg(long, default_value_t = BenchParams::default())]
    params: BenchParams,
    /// Per-configuration build directories.
    #[arg(long, default_value = "target/spark-builds")]
    build_dir: PathBuf,
    /// Workspace to build the runner from.
    #[arg(long)]
    workspace: Option<PathBuf>,
    /// Run cells in this process; build flags are then ignored.
    #[arg(long)]
    in_process: bool,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Synthetic matrices shaped like the five collection matrices.
    Standins,
    /// Banded matrix with every band within the half-width.
    Banded {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        half_width: usize,
        #[arg(long, default_value_t = 1.0)]
        density: f64,
        #[arg(long, default_value = "banded")]
        name: String,
    },
    /// Sparse symmetric positive definite matrix.
    Spd {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "spd")]
        name: String,
    },
    /// Structured triangle mesh used by ASM.
    Mesh {
        #[arg(long, default_value_t = 50)]
        nx: usize,
        #[arg(long, default_value_t = 50)]
        ny: usize,
    },
}

type CliResult = Result<ExitCode, Box<dyn std::error::Error>>;

#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn exit_for(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILED)
    }
}

fn matrices_in(data_dir: &Path) -> std::io::Result<Vec<String>> {
    let mut names = Vec::new();
    for entry in std::fs::read_dir(data_dir)? {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e == "mtx") {
            names.push(matrix_name(&path));
        }
    }
    names.sort();
    Ok(names)
}

fn select_configs(args: &RunArgs) -> Result<Vec<BenchConfig>, Box<dyn std::error::Error>> {
    let available = match &args.config_file {
        Some(path) => parse_config_file(
            &std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?,
        )?,
        None => default_configs(),
    };
    if args.configs.is_empty() {
        return Ok(available);
    }
    args.configs
        .iter()
        .map(|id| {
            available
                .iter()
                .find(|c| &c.id == id)
                .cloned()
                .ok_or_else(|| {
                    let known: Vec<&str> = available.iter().map(|c| c.id.as_str()).collect();
                    Usage(format!(
                        "unknown configuration {id:?}; known: {}",
                        known.join(", ")
                    ))
                    .into()
                })
        })
        .collect()
}

fn cmd_run(args: RunArgs) -> CliResult {
    let configs = select_configs(&args)?;
    let benchmarks = if args.benchmarks.is_empty() {
        Benchmark::ALL.to_vec()
    } else {
        args.benchmarks.clone()
    };
    let matrices = if args.matrices.is_empty() {
        matrices_in(&args.data_dir).map_err(|e| format!("{}: {e}", args.data_dir.display()))?
    } else {
        args.matrices.clone()
    };
    let data_dir = std::path::absolute(&args.data_dir)?;
    let ctx = SuiteContext {
        data_dir,
        results_root: args.results_dir.clone(),
        policy: args.policy,
        params: args.params,
    };
    let mut executor: Box<dyn Executor> = if args.in_process {
        Box::new(InProcess::default())
    } else {
        let workspace = args
            .workspace
            .clone()
            .unwrap_or_else(BuildPerConfig::default_workspace);
        Box::new(BuildPerConfig::new(
            workspace,
            std::path::absolute(&args.build_dir)?,
        ))
    };
    let suite = run_suite(executor.as_mut(), &configs, &benchmarks, &matrices, &ctx)?;
    for cell in &suite.cells {
        match &cell.result {
            Ok(rec) => {
                let flag = if rec.timing.dispersed {
                    " (dispersed)"
                } else {
                    ""
                };
                println!(
                    "ok {} {} {} {:.6}{flag}",
                    cell.config, cell.benchmark, cell.input, rec.seconds
                );
            }
            Err(e) => println!(
                "FAILED {} {} {}: {e}",
                cell.config, cell.benchmark, cell.input
            ),
        }
    }
    Ok(exit_for(suite.all_passed()))
}

fn cmd_aggregate(results_dir: &Path, exp_dir: &Path) -> CliResult {
    let agg = aggregate(results_dir, exp_dir)?;
    for s in &agg.skipped {
        eprintln!(
            "warning: {} {} {} has no base measurement",
            s.id, s.benchmark, s.matrix
        );
    }
    println!(
        "{} lines written to {}",
        agg.records.len(),
        spark_dat_path(exp_dir).display()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_report(exp_dir: &Path) -> CliResult {
    let out = exp_dir.join("report");
    let summary = report(&spark_dat_path(exp_dir), &out)?;
    if let Some(notice) = &summary.notice {
        println!("{notice}");
    }
    println!(
        "{} speedups, {} charts in {}",
        summary.rows,
        summary.charts.len(),
        out.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(data_dir: &Path) -> CliResult {
    let (sections, notes) = verify_all(data_dir)?;
    for note in &notes {
        println!("note: {note}");
    }
    let mut ok = true;
    for s in &sections {
        print!("{}", s.render());
        ok &= s.passed();
    }
    println!(
        "{}",
        if ok {
            "all checks passed"
        } else {
            "some checks failed"
        }
    );
    Ok(exit_for(ok))
}

fn cmd_gen(what: GenCommand, data_dir: &Path, seed: u64) -> CliResult {
    std::fs::create_dir_all(data_dir).map_err(|e| format!("{}: {e}", data_dir.display()))?;
    let synthetic = |symmetric| WriteOptions {
        symmetric,
        synthetic: true,
        comments: Vec::new(),
    };
    let written = match what {
        GenCommand::Standins => {
            let mut paths = Vec::new();
            for s in standins()? {
                let path = data_dir.join(format!("{}.mtx", s.name));
                write_matrix_market(&path, &s.matrix, &synthetic(s.symmetric_storage))?;
                paths.push(path);
            }
            paths
        }
        GenCommand::Banded {
            n,
            half_width,
            density,
            name,
        } => {
            let bands: Vec<Band> = (1..=half_width as isize)
                .flat_map(|o| [Band::new(o, density), Band::new(-o, density)])
                .collect();
            let path = data_dir.join(format!("{name}.mtx"));
            write_matrix_market(&path, &gen_banded(n, &bands, seed)?, &synthetic(false))?;
            vec![path]
        }
        GenCommand::Spd { n, name } => {
            let path = data_dir.join(format!("{name}.mtx"));
            write_matrix_market(&path, &gen_spd(n, seed)?, &synthetic(true))?;
            vec![path]
        }
        GenCommand::Mesh { nx, ny } => {
            let path = data_dir.join(MESH_FILE);
            gen_tri_mesh(nx, ny)?.write(&path)?;
            vec![path]
        }
    };
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_inspect(file: &Path) -> CliResult {
    let (_, meta) = read_matrix_market(file)?;
    println!("name: {}", meta.name);
    println!("dimensions: {} x {}", meta.n_rows, meta.n_cols);
    println!("entries: {}", meta.entries);
    println!("symmetry: {}", meta.symmetry);
    if meta.synthetic {
        println!("synthetic stand-in: yes");
    }
    let Some(expected) = published_entry(&meta.name) else {
        println!("not a collection matrix; nothing to compare");
        return Ok(ExitCode::SUCCESS);
    };
    let v = validate_characteristics(&meta, &expected);
    for w in &v.warnings {
        println!("warning: {w}");
    }
    for m in &v.mismatches {
        println!("mismatch: {m}");
    }
    println!(
        "characteristics: {}",
        if v.passed { "match" } else { "MISMATCH" }
    );
    Ok(exit_for(v.passed))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Aggregate {
            results_dir,
            exp_dir,
        } => cmd_aggregate(&results_dir, &exp_dir),
        Command::Report { exp_dir } => cmd_report(&exp_dir),
        Command::Verify { data_dir } => cmd_verify(&data_dir),
        Command::Gen {
            what,
            data_dir,
            seed,
        } => cmd_gen(what, &data_dir, seed),
        Command::Inspect { file } => cmd_inspect(&file),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("spark: {e}");
            if e.is::<Usage>() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::from(EXIT_FAILED)
            }
        }
    }
}
