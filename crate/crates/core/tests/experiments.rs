mod common;

use std::collections::HashMap;

use absaf::experiments::{
    self, read_csv_file, ExperimentConfig, ExperimentKind, MetricsRow, PerfRow, RatioRow, Status, SummaryRow,
    CSV_VERSION_LINE,
};
use absaf::rules::{objective, solve_with, SolveLimits};
use absaf::{RepMode, RuleSpec, Strategy};
use common::{set_mask, Mask, Plain};
use num_rational::Rational64;
use num_traits::ToPrimitive;

fn small() -> ExperimentConfig {
    let text = "\
name = small
afs = 3
phi = 0, 0.5, 1
k = 1..4
modes = regular, core
seed = 7
";
    ExperimentConfig::parse(text).unwrap()
}

fn strip_runtime(csv: &str) -> String {
    let mut lines = csv.lines();
    let version = lines.next().unwrap();
    let header = lines.next().unwrap();
    let col = header.split(',').position(|c| c == "runtime_ms").unwrap();
    let mut out = vec![version.to_string(), header.to_string()];
    for line in lines {
        let mut cells: Vec<&str> = line.split(',').collect();
        cells[col] = "";
        out.push(cells.join(","));
    }
    out.join("\n")
}

#[test]
fn identical_config_gives_identical_tables() {
    let cfg = small();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    experiments::write_outputs(&experiments::run_metrics(&cfg).unwrap(), a.path()).unwrap();
    experiments::write_outputs(&experiments::run_metrics(&cfg).unwrap(), b.path()).unwrap();
    let read = |d: &tempfile::TempDir, f: &str| std::fs::read_to_string(d.path().join(f)).unwrap();
    assert_eq!(strip_runtime(&read(&a, "small.csv")), strip_runtime(&read(&b, "small.csv")));
    let summary = read(&a, "small_summary.csv");
    assert!(summary.starts_with(CSV_VERSION_LINE));
    let manifest: serde_json::Value = serde_json::from_str(&read(&a, "manifest.json")).unwrap();
    assert_eq!(manifest["experiment"], "metrics");
    assert_eq!(manifest["config"]["seed"], 7);
    assert_eq!(manifest["afs"].as_array().unwrap().len(), 3);
    assert_eq!(manifest["instances"].as_array().unwrap().len(), 9);
    assert_eq!(manifest, serde_json::from_str::<serde_json::Value>(&read(&b, "manifest.json")).unwrap());
}

#[test]
fn rows_revalidate_against_oracle() {
    let cfg = small();
    let out = experiments::run_metrics(&cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    experiments::write_outputs(&out, dir.path()).unwrap();
    let rows: Vec<MetricsRow> = read_csv_file(&dir.path().join("small.csv")).unwrap();
    assert_eq!(rows, out.rows);

    let pool = experiments::main_pool(&cfg).unwrap();
    let instances = experiments::main_instances(&cfg, &pool).unwrap();
    let by_id: HashMap<usize, &experiments::Instance> = instances.iter().map(|i| (i.id, i)).collect();
    let mut checked = 0;
    for row in &rows {
        assert_eq!(row.status, Status::Ok);
        let k = row.k as f64;
        let rec = row.recovery.unwrap();
        assert!((rec * k - (rec * k).round()).abs() < 1e-9 && (0.0..=1.0).contains(&rec));
        for v in [row.avg_rep, row.min_rep, row.coverage_fraction] {
            assert!((0.0..=1.0).contains(&v.unwrap()));
        }
        let inst = by_id[&row.instance];
        match row.rule.as_str() {
            experiments::BASELINE_TRUTHS => assert_eq!(row.recovery, Some(1.0)),
            experiments::BASELINE_ALL if row.mode == RepMode::Core => assert_eq!(row.min_rep, Some(1.0)),
            experiments::BASELINE_ALL | experiments::BASELINE_RANDOM => {}
            rule => {
                let spec = RuleSpec::new(rule.parse().unwrap(), Strategy::Exact, row.mode);
                let sel = solve_with(&inst.election, row.k, &spec, SolveLimits::default()).unwrap();
                let plain = Plain {
                    prf: inst.election.prf().iter().map(set_mask).collect(),
                    voters: common::voter_masks(inst.election.absaf()),
                };
                let om: Vec<Mask> = sel.outcome.viewpoints.iter().map(set_mask).collect();
                let n = plain.voters.len();
                let reps: Vec<Rational64> = (0..n).map(|i| plain.rep_outcome(i, &om, row.mode)).collect();
                let avg = reps.iter().map(|r| r.to_f64().unwrap()).sum::<f64>() / n as f64;
                assert!((avg - row.avg_rep.unwrap()).abs() < 1e-12, "{row:?}");
                assert_eq!(reps.iter().min().unwrap().to_f64(), row.min_rep);
                let hits = sel.indices.iter().filter(|j| inst.truths.contains(j)).count();
                assert_eq!(row.recovery, Some(hits as f64 / row.k as f64));
                checked += 1;
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn objectives_grow_with_k_and_beat_random_minimum() {
    let cfg = small();
    let out = experiments::run_metrics(&cfg).unwrap();
    let key = |r: &MetricsRow| (r.instance, r.rule.clone(), r.mode, r.k);
    let index: HashMap<_, &MetricsRow> = out.rows.iter().map(|r| (key(r), r)).collect();
    for r in out.rows.iter().filter(|r| r.strategy == "exact") {
        if let Some(next) = index.get(&(r.instance, r.rule.clone(), r.mode, r.k + 1)) {
            assert!(next.objective.unwrap() >= r.objective.unwrap() - 1e-9, "{r:?}");
        }
        if r.rule == "egalitarian" {
            let random = index[&(r.instance, experiments::BASELINE_RANDOM.to_string(), r.mode, r.k)];
            assert!(r.min_rep.unwrap() >= random.min_rep.unwrap());
        }
    }
}

#[test]
fn zero_dispersion_with_one_seat_per_truth_is_perfect() {
    let mut cfg = small();
    cfg.set("phi", "0").unwrap();
    cfg.set("k", "3").unwrap();
    let out = experiments::run_varying_k(&cfg).unwrap();
    assert!(!out.rows.is_empty());
    assert!(out.rows.iter().all(|r| r.avg_rep == Some(1.0)));
    assert!(out.summary.iter().all(|s| s.failures == 0 && s.instances == 3));
}

#[test]
fn greedy_ratios_and_table() {
    let mut cfg = small();
    cfg.set("modes", "regular").unwrap();
    let out = experiments::run_greedy_approx(&cfg).unwrap();
    let ratios = out.ratios.as_ref().unwrap();
    assert_eq!(ratios.len(), 3 * 4 * 4);
    for r in ratios {
        assert!(r.min_ratio.unwrap() <= r.mean_ratio.unwrap() && r.mean_ratio.unwrap() <= 1.0 + 1e-12);
        if r.rule == "maxcov" {
            assert!(r.min_ratio.unwrap() >= 1.0 - (-1.0f64).exp());
        }
    }
    let dir = tempfile::tempdir().unwrap();
    experiments::write_outputs(&out, dir.path()).unwrap();
    let back: Vec<RatioRow> = read_csv_file(&dir.path().join("small_ratios.csv")).unwrap();
    assert_eq!(&back, ratios);
    let summary: Vec<SummaryRow> = read_csv_file(&dir.path().join("small_summary.csv")).unwrap();
    assert_eq!(summary, out.summary);
    assert!(out.rows.iter().filter(|r| r.rule == "maxcov").all(|r| r.jr.as_deref() == Some("holds")));
}

#[test]
fn exact_objective_matches_direct_evaluation() {
    let cfg = small();
    let pool = experiments::main_pool(&cfg).unwrap();
    let instances = experiments::main_instances(&cfg, &pool).unwrap();
    for inst in instances.iter().take(4) {
        for rule in &cfg.rules {
            for strategy in [Strategy::Exact, Strategy::Greedy] {
                let spec = RuleSpec::new(rule.clone(), strategy, RepMode::Regular);
                let sel = solve_with(&inst.election, 3, &spec, SolveLimits::default()).unwrap();
                assert_eq!(objective(&inst.election, &sel.outcome, rule, RepMode::Regular).unwrap(), sel.objective);
            }
        }
    }
}

#[test]
fn performance_buckets_and_cap() {
    let text = "\
name = perf
perf_bucket_start = 8
perf_bucket_width = 5
perf_buckets = 2
perf_instances = 2
perf_voters = 40
max_combinations = 50
";
    let cfg = ExperimentConfig::parse(text).unwrap();
    let out = experiments::run_performance(&cfg).unwrap();
    let perf = out.perf.as_ref().unwrap();
    assert_eq!(perf.len(), 2);
    for (b, lo) in perf.iter().zip([8, 13]) {
        assert_eq!((b.bucket_min, b.bucket_max, b.instances), (lo, lo + 4, 2));
        assert_eq!(b.greedy_successes, 2);
    }
    for r in out.rows.iter().filter(|r| r.strategy == "exact") {
        let m = out.manifest.afs.iter().find(|a| a.id == out.manifest.instances[r.instance].af).unwrap().extensions;
        let capped = absaf::rules::binomial(m, r.k) > 50;
        assert_eq!(r.status == Status::Cap, capped, "{r:?}");
        if capped {
            assert!(r.avg_rep.is_none() && r.objective.is_none());
        }
    }
    for inst in &out.manifest.instances {
        assert_eq!(inst.voters, 40);
    }
    let dir = tempfile::tempdir().unwrap();
    experiments::write_outputs(&out, dir.path()).unwrap();
    let back: Vec<PerfRow> = read_csv_file(&dir.path().join("perf_perf.csv")).unwrap();
    assert_eq!(&back, perf);
}

#[test]
fn impossible_window_is_reported() {
    let cfg = ExperimentConfig::parse("afs = 2\nextensions = 1000..1000\ntruths = 3\nmax_tries = 300\n").unwrap();
    assert!(matches!(experiments::run(ExperimentKind::Metrics, &cfg), Err(absaf::Error::Generation(_))));
}
