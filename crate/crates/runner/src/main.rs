//! Runs one benchmark cell: prepares the input, times the kernel, prints
//! the timing as JSON on stdout and writes the kernel output as JSON.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use spark_core::bench::{run_cell, Aggregator, BenchInputs, BenchParams, Benchmark, TimingPolicy};

#[derive(Parser)]
#[command(name = "spark-runner", version, about)]
struct Args {
    #[arg(long)]
    bench: Benchmark,
    /// Matrix name, or `none` for ASM.
    #[arg(long)]
    input: String,
    #[arg(long, default_value = "data")]
    data_dir: PathBuf,
    #[arg(long, default_value_t = 3)]
    warmups: usize,
    #[arg(long, default_value_t = 7)]
    runs: usize,
    #[arg(long, default_value = "median")]
    agg: Aggregator,
    #[arg(long, default_value_t = BenchParams::default())]
    params: BenchParams,
    /// Where the kernel output JSON goes.
    #[arg(long)]
    output: PathBuf,
    /// Perturb the output before writing it.
    #[arg(long, hide = true)]
    corrupt_output: bool,
}

fn run(args: Args) -> Result<(), Box<dyn std::error::Error>> {
    let policy = TimingPolicy::new(args.warmups, args.runs, args.agg)?;
    let inputs = BenchInputs::load(args.bench, &args.input, &args.data_dir, args.params)?;
    let (timing, mut output) = run_cell(&inputs, &policy)?;
    if args.corrupt_output {
        output.corrupt();
    }
    std::fs::write(&args.output, output.to_json())
        .map_err(|e| format!("{}: {e}", args.output.display()))?;
    println!("{}", serde_json::to_string(&timing)?);
    Ok(())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spark-runner: {e}");
            ExitCode::FAILURE
        }
    }
}
