//! Versioned CSV output. Every file starts with the line `# absaf-csv v1`,
//! followed by a header row and records.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::absaf::RepMode;
use crate::error::{Error, Result};

pub const CSV_VERSION_LINE: &str = "# absaf-csv v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    /// Wall-clock limit hit.
    Timeout,
    /// Combination cap refused the search.
    Cap,
}

/// One (instance, phi, k, rule, strategy, mode) result. Metrics are empty
/// unless `status` is `ok`; `jr` is empty when auditing is off.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub instance: usize,
    pub phi: f64,
    pub k: usize,
    pub rule: String,
    pub strategy: String,
    pub mode: RepMode,
    pub avg_rep: Option<f64>,
    pub min_rep: Option<f64>,
    pub recovery: Option<f64>,
    pub coverage_fraction: Option<f64>,
    pub objective: Option<f64>,
    pub runtime_ms: f64,
    pub status: Status,
    pub jr: Option<String>,
}

/// Means over the `ok` rows of one (phi, k, rule, strategy, mode) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub phi: f64,
    pub k: usize,
    pub rule: String,
    pub strategy: String,
    pub mode: RepMode,
    pub instances: usize,
    pub failures: usize,
    pub avg_rep: Option<f64>,
    pub min_rep: Option<f64>,
    pub recovery: Option<f64>,
    pub coverage_fraction: Option<f64>,
    pub objective: Option<f64>,
}

/// Greedy/exact objective ratios of one (phi, k, rule, mode) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub phi: f64,
    pub k: usize,
    pub rule: String,
    pub mode: RepMode,
    pub instances: usize,
    pub mean_ratio: Option<f64>,
    pub min_ratio: Option<f64>,
}

/// Successes and mean runtime (seconds, successes only) per extension-count
/// bucket.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerfRow {
    pub bucket_min: usize,
    pub bucket_max: usize,
    pub instances: usize,
    pub exact_successes: usize,
    pub exact_mean_s: Option<f64>,
    pub greedy_successes: usize,
    pub greedy_mean_s: Option<f64>,
}

pub fn write_csv<T: Serialize, W: Write>(out: W, rows: &[T]) -> Result<()> {
    let mut out = out;
    writeln!(out, "{CSV_VERSION_LINE}")?;
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_csv(std::io::BufWriter::new(file), rows)
}

/// Reads a versioned CSV, rejecting a missing or different version line.
pub fn read_csv<T: DeserializeOwned, R: Read>(input: R) -> Result<Vec<T>> {
    let mut reader = BufReader::new(input);
    let mut first = String::new();
    reader.read_line(&mut first)?;
    if first.trim_end() != CSV_VERSION_LINE {
        return Err(Error::syntax(1, format!("expected `{CSV_VERSION_LINE}`")));
    }
    let mut r = csv::Reader::from_reader(reader);
    r.deserialize().map(|row| row.map_err(csv_err)).collect()
}

pub fn read_csv_file<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    read_csv(std::fs::File::open(path)?)
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::syntax(0, format!("csv: {other:?}")),
    }
}
