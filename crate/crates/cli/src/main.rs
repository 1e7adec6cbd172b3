use std::path::PathBuf;
use std::process::ExitCode;

use bosonbench::config::{Command, NoiseAxis};
use bosonbench::Invocation;
use clap::{Args, Parser, Subcommand};

/// Boson-sampling noise evaluation: generate noisy output samples and
/// quantify the noise level with correlator-based statistical benchmarks.
///
/// Each subcommand reproduces one family of result figures at a
/// configurable scale and emits CSV/JSON data for plotting. Progress goes
/// to stderr; stdout carries one JSON summary line.
#[derive(Parser)]
#[command(name = "bosonbench", version, about)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Subcommand)]
enum CliCommand {
    /// Test-vs-ideal correlator scatter data across the x_ind grid
    Scatter(RunArgs),
    /// Pearson/Spearman/gamma curves along a noise grid
    Coefficients(RunArgs),
    /// gamma trends across problem scales, averaged over random matrices
    Scaling(RunArgs),
    /// CV/CS clouds over single-photon input combinations
    Cloud(RunArgs),
    /// Sorted output distributions and total-variation-distance curves
    Distributions(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON config file; omitted fields keep the subcommand's desk-scale
    /// defaults
    #[arg(long)]
    config: Option<PathBuf>,

    /// Master seed (overrides the config file)
    #[arg(long)]
    seed: Option<u64>,

    /// Output directory (overrides the config file)
    #[arg(long)]
    out: Option<PathBuf>,

    /// Run at the full experimental scale (large m, n, and sample counts)
    #[arg(long)]
    paper_scale: bool,

    /// Worker threads (default: logical CPUs)
    #[arg(long)]
    workers: Option<usize>,

    /// Noise axis for coefficients and cloud sweeps
    #[arg(long, value_enum, default_value = "xind")]
    noise_axis: NoiseAxis,
}

fn invocation(command: Command, args: &RunArgs) -> Invocation {
    Invocation {
        command,
        axis: args.noise_axis,
        config_path: args.config.clone(),
        seed: args.seed,
        out: args.out.clone(),
        paper_scale: args.paper_scale,
        workers: args.workers,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let invocation = match &cli.command {
        CliCommand::Scatter(args) => invocation(Command::Scatter, args),
        CliCommand::Coefficients(args) => invocation(Command::Coefficients, args),
        CliCommand::Scaling(args) => invocation(Command::Scaling, args),
        CliCommand::Cloud(args) => invocation(Command::Cloud, args),
        CliCommand::Distributions(args) => invocation(Command::Distributions, args),
    };
    match bosonbench::run(&invocation) {
        Ok(summary) => {
            println!(
                "{}",
                serde_json::to_string(&summary).expect("summary serializes")
            );
            ExitCode::SUCCESS
        }
        Err(error) => {
            eprintln!("error: {error}");
            error.exit_code()
        }
    }
}
