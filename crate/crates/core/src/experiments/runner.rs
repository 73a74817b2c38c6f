//! The four experiment families.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::config::ExperimentConfig;
use super::instances::{self, derive_seed, Instance, InstanceInfo, PoolEntry};
use super::table::{MetricsRow, PerfRow, RatioRow, Status, SummaryRow};
use crate::absaf::{Election, Outcome, RepMode};
use crate::axioms::check_jr;
use crate::error::{Error, Result};
use crate::generators::padded_quotas;
use crate::rules::{solve_with, RuleKind, RuleSpec, SolveLimits, Strategy};

pub const BASELINE_RANDOM: &str = "random-k";
pub const BASELINE_TRUTHS: &str = "ground-truths";
pub const BASELINE_ALL: &str = "all-preferred";
pub const BASELINE_STRATEGY: &str = "baseline";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    VaryK,
    Metrics,
    GreedyApprox,
    Perf,
}

impl std::str::FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vary-k" => Ok(ExperimentKind::VaryK),
            "metrics" => Ok(ExperimentKind::Metrics),
            "greedy-approx" => Ok(ExperimentKind::GreedyApprox),
            "perf" => Ok(ExperimentKind::Perf),
            other => Err(Error::param(format!("unknown experiment `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub experiment: ExperimentKind,
    pub version: &'static str,
    pub config: ExperimentConfig,
    pub afs: Vec<PoolEntry>,
    pub instances: Vec<InstanceInfo>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub rows: Vec<MetricsRow>,
    pub summary: Vec<SummaryRow>,
    pub ratios: Option<Vec<RatioRow>>,
    pub perf: Option<Vec<PerfRow>>,
    pub manifest: Manifest,
}

/// Representation metrics of one outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub avg_rep: f64,
    pub min_rep: f64,
    pub recovery: f64,
    pub coverage_fraction: f64,
}

/// `recovery` counts ground truths among `indices` and divides by `k`.
pub fn measure(e: &Election, indices: &[usize], k: usize, truths: &[usize], mode: RepMode) -> Result<Metrics> {
    let omega = Outcome::new(indices.iter().map(|&j| e.prf()[j].clone()).collect(), k.max(indices.len()))?;
    let reps = e.rep_vector(&omega, mode)?;
    let n = reps.len() as f64;
    let sum: BigRational = reps.iter().map(|r| BigRational::new((*r.numer()).into(), (*r.denom()).into())).sum();
    let one = num_rational::Rational64::from_integer(1);
    let covered = reps.iter().filter(|r| **r == one).count();
    let hits = indices.iter().filter(|j| truths.contains(j)).count();
    Ok(Metrics {
        avg_rep: sum.to_f64().unwrap_or(f64::NAN) / n,
        min_rep: reps.iter().min().map_or(0.0, |r| r.to_f64().unwrap_or(f64::NAN)),
        recovery: hits as f64 / k as f64,
        coverage_fraction: covered as f64 / n,
    })
}

struct Cell<'a> {
    inst: &'a Instance,
    k: usize,
    mode: RepMode,
}

fn base_row(c: &Cell, rule: &str, strategy: &str) -> MetricsRow {
    MetricsRow {
        instance: c.inst.id,
        phi: c.inst.phi,
        k: c.k,
        rule: rule.to_string(),
        strategy: strategy.to_string(),
        mode: c.mode,
        avg_rep: None,
        min_rep: None,
        recovery: None,
        coverage_fraction: None,
        objective: None,
        runtime_ms: 0.0,
        status: Status::Ok,
        jr: None,
    }
}

fn fill(row: &mut MetricsRow, m: Metrics) {
    row.avg_rep = Some(m.avg_rep);
    row.min_rep = Some(m.min_rep);
    row.recovery = Some(m.recovery);
    row.coverage_fraction = Some(m.coverage_fraction);
}

/// Solves one rule on one cell; timeouts and cap refusals become rows.
fn rule_row(
    c: &Cell,
    rule: &RuleKind,
    strategy: Strategy,
    cfg: &ExperimentConfig,
) -> Result<(MetricsRow, Option<BigRational>)> {
    let e = &c.inst.election;
    let spec = RuleSpec::new(rule.clone(), strategy, c.mode);
    let started = Instant::now();
    let limits = SolveLimits {
        max_combinations: cfg.max_combinations,
        deadline: Some(started + Duration::from_secs_f64(cfg.timeout)),
        ..SolveLimits::default()
    };
    let result = solve_with(e, c.k, &spec, limits);
    let mut row = base_row(c, &rule.to_string(), &strategy.to_string());
    row.runtime_ms = started.elapsed().as_secs_f64() * 1e3;
    match result {
        Ok(sel) => {
            fill(&mut row, measure(e, &sel.indices, c.k, &c.inst.truths, c.mode)?);
            row.objective = Some(sel.objective_f64());
            if cfg.jr_audit {
                row.jr = Some(check_jr(e, &sel.outcome, c.mode)?.to_string());
            }
            Ok((row, Some(sel.objective)))
        }
        Err(Error::Timeout(_)) => {
            row.status = Status::Timeout;
            Ok((row, None))
        }
        Err(Error::ResourceLimit(_)) => {
            row.status = Status::Cap;
            Ok((row, None))
        }
        Err(other) => Err(other),
    }
}

fn baseline_rows(inst: &Instance, mode: RepMode, ks: &[usize]) -> Result<Vec<MetricsRow>> {
    let e = &inst.election;
    let m = e.prf().len();
    let mut rows = Vec::new();
    for &k in ks {
        let c = Cell { inst, k, mode };
        let picked = instances::random_extensions(m, k, inst.seed, k as u64);
        let mut row = base_row(&c, BASELINE_RANDOM, BASELINE_STRATEGY);
        fill(&mut row, measure(e, &picked, k, &inst.truths, mode)?);
        rows.push(row);
    }
    let g = inst.truths.len();
    let mut row = base_row(&Cell { inst, k: g, mode }, BASELINE_TRUTHS, BASELINE_STRATEGY);
    fill(&mut row, measure(e, &inst.truths, g, &inst.truths, mode)?);
    rows.push(row);
    let all: Vec<usize> = (0..m).collect();
    let mut row = base_row(&Cell { inst, k: m, mode }, BASELINE_ALL, BASELINE_STRATEGY);
    fill(&mut row, measure(e, &all, m, &inst.truths, mode)?);
    rows.push(row);
    Ok(rows)
}

fn sort_rows(rows: &mut [MetricsRow]) {
    rows.sort_by(|a, b| {
        (a.instance, a.k, &a.rule, &a.strategy, a.mode)
            .cmp(&(b.instance, b.k, &b.rule, &b.strategy, b.mode))
            .then(a.phi.total_cmp(&b.phi))
    });
}

/// Means of `ok` rows per (phi, k, rule, strategy, mode), sorted by that key.
pub fn summarize(rows: &[MetricsRow]) -> Vec<SummaryRow> {
    #[derive(Default)]
    struct Acc {
        n: usize,
        failures: usize,
        sums: [f64; 5],
        present: [usize; 5],
    }
    let mut cells: BTreeMap<(u64, usize, String, String, RepMode), Acc> = BTreeMap::new();
    for r in rows {
        let acc = cells.entry((r.phi.to_bits(), r.k, r.rule.clone(), r.strategy.clone(), r.mode)).or_default();
        if r.status != Status::Ok {
            acc.failures += 1;
            continue;
        }
        acc.n += 1;
        for (i, v) in [r.avg_rep, r.min_rep, r.recovery, r.coverage_fraction, r.objective].into_iter().enumerate() {
            if let Some(v) = v {
                acc.sums[i] += v;
                acc.present[i] += 1;
            }
        }
    }
    let mut out: Vec<SummaryRow> = cells
        .into_iter()
        .map(|((phi, k, rule, strategy, mode), a)| {
            let mean = |i: usize| (a.present[i] > 0).then(|| a.sums[i] / a.present[i] as f64);
            SummaryRow {
                phi: f64::from_bits(phi),
                k,
                rule,
                strategy,
                mode,
                instances: a.n,
                failures: a.failures,
                avg_rep: mean(0),
                min_rep: mean(1),
                recovery: mean(2),
                coverage_fraction: mean(3),
                objective: mean(4),
            }
        })
        .collect();
    out.sort_by(|a, b| {
        a.phi
            .total_cmp(&b.phi)
            .then_with(|| (a.k, &a.rule, &a.strategy, a.mode).cmp(&(b.k, &b.rule, &b.strategy, b.mode)))
    });
    out
}

/// Greedy objective over exact objective; `1` when both are zero.
pub fn ratio(greedy: &BigRational, exact: &BigRational) -> f64 {
    if exact.is_zero() {
        if greedy.is_zero() {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        (greedy / exact).to_f64().unwrap_or(f64::NAN)
    }
}

pub fn run(kind: ExperimentKind, cfg: &ExperimentConfig) -> Result<RunOutput> {
    cfg.validate()?;
    match kind {
        ExperimentKind::Perf => run_performance(cfg),
        _ => run_main(kind, cfg),
    }
}

pub fn run_varying_k(cfg: &ExperimentConfig) -> Result<RunOutput> {
    run(ExperimentKind::VaryK, cfg)
}

pub fn run_metrics(cfg: &ExperimentConfig) -> Result<RunOutput> {
    run(ExperimentKind::Metrics, cfg)
}

pub fn run_greedy_approx(cfg: &ExperimentConfig) -> Result<RunOutput> {
    run(ExperimentKind::GreedyApprox, cfg)
}

type InstanceResult = (Vec<MetricsRow>, Vec<(f64, usize, String, RepMode, f64)>);

fn run_main(kind: ExperimentKind, cfg: &ExperimentConfig) -> Result<RunOutput> {
    let pool = instances::main_pool(cfg)?;
    let insts = instances::main_instances(cfg, &pool)?;
    let strategies: Vec<Strategy> = match kind {
        ExperimentKind::GreedyApprox => vec![Strategy::Exact, Strategy::Greedy],
        _ => cfg.strategies.clone(),
    };
    let per_instance: Vec<InstanceResult> = insts
        .par_iter()
        .map(|inst| -> Result<InstanceResult> {
            let mut rows = Vec::new();
            let mut ratios = Vec::new();
            for &mode in &cfg.modes {
                for &k in &cfg.k {
                    for rule in &cfg.rules {
                        let c = Cell { inst, k, mode };
                        let mut objectives = Vec::new();
                        for &s in &strategies {
                            let (row, obj) = rule_row(&c, rule, s, cfg)?;
                            rows.push(row);
                            objectives.push(obj);
                        }
                        if kind == ExperimentKind::GreedyApprox {
                            if let [Some(exact), Some(greedy)] = &objectives[..] {
                                ratios.push((inst.phi, k, rule.to_string(), mode, ratio(greedy, exact)));
                            }
                        }
                    }
                }
                if kind == ExperimentKind::Metrics {
                    rows.extend(baseline_rows(inst, mode, &cfg.k)?);
                }
            }
            Ok((rows, ratios))
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    let mut ratio_samples = Vec::new();
    for (r, q) in per_instance {
        rows.extend(r);
        ratio_samples.extend(q);
    }
    sort_rows(&mut rows);
    let ratios = (kind == ExperimentKind::GreedyApprox).then(|| ratio_table(&ratio_samples));
    Ok(RunOutput {
        summary: summarize(&rows),
        rows,
        ratios,
        perf: None,
        manifest: Manifest {
            experiment: kind,
            version: env!("CARGO_PKG_VERSION"),
            config: cfg.clone(),
            afs: pool,
            instances: insts.iter().map(Instance::info).collect(),
        },
    })
}

fn ratio_table(samples: &[(f64, usize, String, RepMode, f64)]) -> Vec<RatioRow> {
    let mut cells: BTreeMap<(u64, usize, String, RepMode), Vec<f64>> = BTreeMap::new();
    for (phi, k, rule, mode, r) in samples {
        cells.entry((phi.to_bits(), *k, rule.clone(), *mode)).or_default().push(*r);
    }
    let mut out: Vec<RatioRow> = cells
        .into_iter()
        .map(|((phi, k, rule, mode), v)| RatioRow {
            phi: f64::from_bits(phi),
            k,
            rule,
            mode,
            instances: v.len(),
            mean_ratio: Some(v.iter().sum::<f64>() / v.len() as f64),
            min_ratio: v.iter().copied().reduce(f64::min),
        })
        .collect();
    out.sort_by(|a, b| a.phi.total_cmp(&b.phi).then_with(|| (a.k, &a.rule, a.mode).cmp(&(b.k, &b.rule, b.mode))));
    out
}

/// Buckets of AFs by extension count; exact and greedy utilitarian at
/// `k = ⌊m/4⌋` (at least 1) with `perf_voters` voters around `k` truths.
/// Solves run one at a time so timings are not contended.
pub fn run_performance(cfg: &ExperimentConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let mut rows = Vec::new();
    let mut perf = Vec::new();
    let mut pool_all = Vec::new();
    let mut infos = Vec::new();
    for b in 0..cfg.perf_buckets {
        let lo = cfg.perf_bucket_start + b * cfg.perf_bucket_width;
        let hi = lo + cfg.perf_bucket_width - 1;
        let mut pool = instances::select_afs(
            derive_seed(cfg.seed, instances::DOMAIN_PERF_POOL, b as u64),
            instances::DOMAIN_PERF_POOL,
            (cfg.perf_n_args_min, cfg.perf_n_args_max),
            &cfg.p_cycle,
            cfg.attachment,
            (lo, hi),
            cfg.perf_instances,
            cfg.max_tries,
        )?;
        if pool.len() < cfg.perf_instances {
            log::warn!("bucket {lo}..={hi}: found {} of {} AFs", pool.len(), cfg.perf_instances);
        }
        for e in &mut pool {
            e.id += pool_all.len();
        }
        let mut times: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
        for entry in &pool {
            let id = infos.len();
            let seed = derive_seed(cfg.seed, instances::DOMAIN_PERF_ELECTORATE, id as u64);
            let phi = instances::pick(&cfg.perf_phi, seed, 0);
            let k = (entry.prf.len() / 4).max(1);
            let inst = instances::build_instance(id, entry, phi, seed, k, |g| padded_quotas(cfg.perf_voters, g))?;
            infos.push(inst.info());
            let c = Cell { inst: &inst, k, mode: RepMode::Regular };
            for (slot, s) in [Strategy::Exact, Strategy::Greedy].into_iter().enumerate() {
                let (row, _) = rule_row(&c, &RuleKind::Utilitarian, s, cfg)?;
                if row.status == Status::Ok {
                    times[slot].push(row.runtime_ms / 1e3);
                }
                rows.push(row);
            }
        }
        let mean = |v: &Vec<f64>| (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64);
        perf.push(PerfRow {
            bucket_min: lo,
            bucket_max: hi,
            instances: pool.len(),
            exact_successes: times[0].len(),
            exact_mean_s: mean(&times[0]),
            greedy_successes: times[1].len(),
            greedy_mean_s: mean(&times[1]),
        });
        pool_all.extend(pool);
    }
    sort_rows(&mut rows);
    Ok(RunOutput {
        summary: summarize(&rows),
        rows,
        ratios: None,
        perf: Some(perf),
        manifest: Manifest {
            experiment: ExperimentKind::Perf,
            version: env!("CARGO_PKG_VERSION"),
            config: cfg.clone(),
            afs: pool_all,
            instances: infos,
        },
    })
}
