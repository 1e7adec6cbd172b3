//! Experiment runner around `bosonbench-core`: configuration handling,
//! the figure-style subcommands, and the CSV/JSON artifact formats.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::PathBuf;

use config::{config_hash, Command, ConfigFile, ExperimentConfig, NoiseAxis};
use error::AppResult;

/// Everything a subcommand invocation needs after flag resolution.
#[derive(Debug, Clone)]
pub struct Invocation {
    pub command: Command,
    pub axis: NoiseAxis,
    pub config_path: Option<PathBuf>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub paper_scale: bool,
    pub workers: Option<usize>,
}

/// Resolve configuration, run the subcommand on a dedicated worker pool,
/// and return the machine-readable summary.
pub fn run(invocation: &Invocation) -> AppResult<commands::RunSummary> {
    let mut config = ExperimentConfig::desk_default(invocation.command);
    if let Some(path) = &invocation.config_path {
        config.overlay(&ConfigFile::load(path)?);
    }
    if invocation.paper_scale {
        config.apply_paper_scale(invocation.command);
    }
    if let Some(seed) = invocation.seed {
        config.seed = seed;
    }
    if let Some(out) = &invocation.out {
        config.output_dir = out.clone();
    }
    config.validate(invocation.command, invocation.axis)?;

    let hash = config_hash(invocation.command, invocation.axis, &config);
    let mut writer = output::OutputWriter::new(
        &config.output_dir,
        invocation.command.name(),
        &hash,
        config.seed,
    )?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(invocation.workers.unwrap_or(0))
        .build()
        .map_err(|e| error::AppError::Usage(format!("worker pool: {e}")))?;
    pool.install(|| {
        commands::run_command(invocation.command, invocation.axis, &config, &mut writer)
    })?;

    let mut files = writer.file_names();
    files.push("run_summary.json".to_string());
    files.sort();
    let summary = commands::RunSummary {
        command: invocation.command.name(),
        config_hash: hash,
        master_seed: config.seed,
        output_dir: config.output_dir.clone(),
        files,
    };
    writer.write_json("run_summary.json", &summary)?;
    Ok(summary)
}
