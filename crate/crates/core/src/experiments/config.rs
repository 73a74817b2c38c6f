//! `key = value` experiment configuration with `#` comments.

use std::path::PathBuf;

use serde::Serialize;

use crate::absaf::RepMode;
use crate::error::{Error, Result};
use crate::rules::{RuleKind, Strategy};

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    /// Output file stem.
    pub name: String,
    /// AFs drawn into the pool.
    pub afs: usize,
    pub n_args_min: usize,
    pub n_args_max: usize,
    pub p_cycle: Vec<f64>,
    pub attachment: usize,
    /// Inclusive window on the number of preferred extensions.
    pub extensions_min: usize,
    pub extensions_max: usize,
    pub max_tries: usize,
    /// Ground truths per electorate.
    pub truths: usize,
    pub per_truth: usize,
    /// Electorates per (AF, phi).
    pub repeats: usize,
    pub phi: Vec<f64>,
    pub k: Vec<usize>,
    #[serde(serialize_with = "ser_rules")]
    pub rules: Vec<RuleKind>,
    pub strategies: Vec<Strategy>,
    pub modes: Vec<RepMode>,
    pub seed: u64,
    /// Wall-clock limit per exact solve, in seconds.
    pub timeout: f64,
    pub max_combinations: u64,
    pub jr_audit: bool,
    pub out: PathBuf,
    pub perf_bucket_start: usize,
    pub perf_bucket_width: usize,
    pub perf_buckets: usize,
    pub perf_instances: usize,
    pub perf_voters: usize,
    pub perf_phi: Vec<f64>,
    pub perf_n_args_min: usize,
    pub perf_n_args_max: usize,
}

fn ser_rules<S: serde::Serializer>(rules: &[RuleKind], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(rules.iter().map(ToString::to_string))
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            name: "experiment".into(),
            afs: 10,
            n_args_min: 10,
            n_args_max: 50,
            p_cycle: vec![0.25, 0.5, 0.75],
            attachment: 1,
            extensions_min: 10,
            extensions_max: 10,
            max_tries: 200_000,
            truths: 3,
            per_truth: 10,
            repeats: 1,
            phi: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            k: vec![1, 2, 3, 4, 5],
            rules: vec![RuleKind::Utilitarian, RuleKind::Egalitarian, RuleKind::Harmonic, RuleKind::MaxCov],
            strategies: vec![Strategy::Exact],
            modes: vec![RepMode::Regular],
            seed: 2024,
            timeout: 45.0,
            max_combinations: 20_000_000,
            jr_audit: true,
            out: PathBuf::from("results"),
            perf_bucket_start: 8,
            perf_bucket_width: 5,
            perf_buckets: 7,
            perf_instances: 5,
            perf_voters: 100,
            perf_phi: (0..=10).map(|i| i as f64 / 10.0).collect(),
            perf_n_args_min: 15,
            perf_n_args_max: 60,
        }
    }
}

impl ExperimentConfig {
    /// Large-scale settings: 50 AFs with 10 extensions, 5 truths
    /// of 20 voters, 11 dispersion values, 5 electorates each, `k ≤ 7`, and
    /// 30 AFs per performance bucket.
    pub fn full_scale() -> Self {
        ExperimentConfig {
            afs: 50,
            truths: 5,
            per_truth: 20,
            repeats: 5,
            phi: (0..=10).map(|i| i as f64 / 10.0).collect(),
            k: (1..=7).collect(),
            perf_instances: 30,
            perf_buckets: 5,
            ..ExperimentConfig::default()
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) =
                line.split_once('=').ok_or_else(|| Error::syntax(lineno + 1, "expected `key = value`"))?;
            self.set(key.trim(), value.trim()).map_err(|e| Error::syntax(lineno + 1, e.to_string()))?;
        }
        Ok(())
    }

    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse().map_err(|_| Error::param(format!("bad value `{v}` for `{key}`")))
        }
        fn list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
            v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(|s| num(key, s)).collect()
        }
        fn range(key: &str, v: &str) -> Result<Vec<usize>> {
            match v.split_once("..") {
                Some((a, b)) => {
                    let (a, b): (usize, usize) = (num(key, a.trim())?, num(key, b.trim().trim_start_matches('='))?);
                    Ok((a..=b).collect())
                }
                None => list(key, v),
            }
        }
        match key {
            "name" => self.name = value.to_string(),
            "afs" => self.afs = num(key, value)?,
            "n_args_min" => self.n_args_min = num(key, value)?,
            "n_args_max" => self.n_args_max = num(key, value)?,
            "p_cycle" => self.p_cycle = list(key, value)?,
            "attachment" => self.attachment = num(key, value)?,
            "extensions_min" => self.extensions_min = num(key, value)?,
            "extensions_max" => self.extensions_max = num(key, value)?,
            "extensions" => {
                let r = range(key, value)?;
                self.extensions_min = *r.first().ok_or_else(|| Error::param("empty extension window"))?;
                self.extensions_max = *r.last().unwrap();
            }
            "max_tries" => self.max_tries = num(key, value)?,
            "truths" | "g" => self.truths = num(key, value)?,
            "per_truth" => self.per_truth = num(key, value)?,
            "repeats" => self.repeats = num(key, value)?,
            "phi" => self.phi = list(key, value)?,
            "k" => self.k = range(key, value)?,
            "rules" => self.rules = value.split(';').flat_map(split_rules).collect::<Result<_>>()?,
            "strategies" | "strategy" => self.strategies = list(key, value)?,
            "modes" | "mode" => self.modes = list(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "timeout" => self.timeout = num(key, value)?,
            "max_combinations" => self.max_combinations = num(key, value)?,
            "jr_audit" => self.jr_audit = num(key, value)?,
            "out" => self.out = PathBuf::from(value),
            "perf_bucket_start" => self.perf_bucket_start = num(key, value)?,
            "perf_bucket_width" => self.perf_bucket_width = num(key, value)?,
            "perf_buckets" => self.perf_buckets = num(key, value)?,
            "perf_instances" => self.perf_instances = num(key, value)?,
            "perf_voters" => self.perf_voters = num(key, value)?,
            "perf_phi" => self.perf_phi = list(key, value)?,
            "perf_n_args_min" => self.perf_n_args_min = num(key, value)?,
            "perf_n_args_max" => self.perf_n_args_max = num(key, value)?,
            other => return Err(Error::param(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let in_unit = |v: &f64| (0.0..=1.0).contains(v);
        if !self.phi.iter().all(in_unit) || !self.perf_phi.iter().all(in_unit) {
            return Err(Error::param("phi values must lie in [0,1]"));
        }
        if !self.p_cycle.iter().all(in_unit) || self.p_cycle.is_empty() {
            return Err(Error::param("p_cycle values must lie in [0,1]"));
        }
        if self.k.is_empty() || self.k.contains(&0) {
            return Err(Error::param("k values must be at least 1"));
        }
        if self.timeout.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::param("timeout must be positive"));
        }
        if self.n_args_min < 2 || self.n_args_min > self.n_args_max {
            return Err(Error::param("bad argument-count range"));
        }
        if self.perf_n_args_min < 2 || self.perf_n_args_min > self.perf_n_args_max {
            return Err(Error::param("bad performance argument-count range"));
        }
        if self.extensions_min > self.extensions_max || self.truths > self.extensions_min {
            return Err(Error::param("extension window must admit the requested truths"));
        }
        if self.truths == 0 || self.per_truth == 0 || self.repeats == 0 {
            return Err(Error::param("truths, per_truth and repeats must be positive"));
        }
        if self.rules.is_empty() || self.strategies.is_empty() || self.modes.is_empty() {
            return Err(Error::param("rules, strategies and modes must be nonempty"));
        }
        if self.perf_bucket_width == 0 || self.perf_phi.is_empty() || self.perf_voters == 0 {
            return Err(Error::param("bad performance settings"));
        }
        Ok(())
    }
}

/// Splits a comma list of rules; an `owa:` entry swallows the rest of its
/// `;`-separated chunk.
fn split_rules(chunk: &str) -> Vec<Result<RuleKind>> {
    let chunk = chunk.trim();
    if chunk.to_ascii_lowercase().starts_with("owa:") {
        return vec![chunk.parse()];
    }
    chunk.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::parse).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_override() {
        let text = "# desk run\nname = demo\nk = 1..3\nphi = 0, 0.5\nrules = utilitarian, maxcov; owa:1,1/2\nmode = regular,core\n";
        let cfg = ExperimentConfig::parse(text).unwrap();
        assert_eq!(cfg.name, "demo");
        assert_eq!(cfg.k, vec![1, 2, 3]);
        assert_eq!(cfg.phi, vec![0.0, 0.5]);
        assert_eq!(cfg.rules.len(), 3);
        assert_eq!(cfg.modes, vec![RepMode::Regular, RepMode::Core]);
        cfg.validate().unwrap();
    }

    #[test]
    fn errors_carry_line() {
        match ExperimentConfig::parse("afs = 3\nbogus = 1\n") {
            Err(Error::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        let mut cfg = ExperimentConfig { phi: vec![1.5], ..Default::default() };
        assert!(cfg.validate().is_err());
        cfg = ExperimentConfig { timeout: 0.0, ..Default::default() };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn defaults_validate() {
        ExperimentConfig::default().validate().unwrap();
        ExperimentConfig::full_scale().validate().unwrap();
    }
}
