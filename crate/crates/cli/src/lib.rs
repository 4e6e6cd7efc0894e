//! Experiment runner behind the `cnplab` binary.
//!
//! A run reads one JSON config, executes the named experiment and writes
//! `<stem>.report.json` plus `<stem>.<table>.csv` files, where `<stem>` is
//! the config file name without extension.

pub mod config;
pub mod error;
pub mod experiments;
pub mod report;
pub mod symbols;

use std::path::{Path, PathBuf};
use std::time::Instant;

pub use config::ExperimentConfig;
pub use error::{CliError, CliResult};
pub use report::Report;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "CNPLAB_OUT_DIR";

/// Output directory: `--out`, else the config's `out`, else
/// [`OUT_DIR_ENV`], else `cnplab-out`.
pub fn resolve_out_dir(flag: Option<&Path>, cfg: &ExperimentConfig) -> PathBuf {
    flag.map(Path::to_path_buf)
        .or_else(|| cfg.out.clone())
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("cnplab-out"))
}

/// Loads, runs and times one config; `seed` overrides the config's seed.
pub fn run_config(path: &Path, seed: Option<u64>) -> CliResult<Report> {
    let mut cfg = ExperimentConfig::load(path)?;
    if seed.is_some() {
        cfg.seed = seed;
    }
    let start = Instant::now();
    let mut report = experiments::execute(&cfg)?;
    report.wall_time_ms = start.elapsed().as_millis();
    Ok(report)
}

pub fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "experiment".into())
}
