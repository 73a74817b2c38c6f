//! Experiment pipeline: AF pools, electorates, rule runs and CSV output.

mod config;
mod instances;
mod runner;
mod table;

use std::path::{Path, PathBuf};

pub use config::ExperimentConfig;
pub use instances::{derive_seed, main_instances, main_pool, select_afs, Instance, InstanceInfo, PoolEntry};
pub use runner::{
    measure, ratio, run, run_greedy_approx, run_metrics, run_performance, run_varying_k, summarize, ExperimentKind,
    Manifest, Metrics, RunOutput, BASELINE_ALL, BASELINE_RANDOM, BASELINE_STRATEGY, BASELINE_TRUTHS,
};
pub use table::{
    read_csv, read_csv_file, write_csv, write_csv_file, MetricsRow, PerfRow, RatioRow, Status, SummaryRow,
    CSV_VERSION_LINE,
};

use crate::error::Result;

/// Writes `<name>.csv`, `<name>_summary.csv`, the ratio or performance table
/// when present, and `manifest.json` into `dir`. Returns the paths.
pub fn write_outputs(out: &RunOutput, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let name = &out.manifest.config.name;
    let mut paths = Vec::new();
    let mut path = |suffix: &str| {
        let p = dir.join(format!("{name}{suffix}"));
        paths.push(p.clone());
        p
    };
    write_csv_file(&path(".csv"), &out.rows)?;
    write_csv_file(&path("_summary.csv"), &out.summary)?;
    if let Some(r) = &out.ratios {
        write_csv_file(&path("_ratios.csv"), r)?;
    }
    if let Some(p) = &out.perf {
        write_csv_file(&path("_perf.csv"), p)?;
    }
    let manifest = dir.join("manifest.json");
    paths.push(manifest.clone());
    std::fs::write(&manifest, serde_json::to_string_pretty(&out.manifest)?)?;
    Ok(paths)
}
