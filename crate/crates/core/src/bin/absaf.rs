use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use absaf::absaf::{write_ballots_json, BallotFormat};
use absaf::af::{parse_af, write_apx, Format};
use absaf::axioms::{check_jr, check_sjr, AxiomCheck};
use absaf::experiments::{self, ExperimentConfig, ExperimentKind};
use absaf::generators::{self, GenParams};
use absaf::representability::{decide_representable_with, min_perfect_outcome_with, DEFAULT_MAX_COMBINATIONS};
use absaf::rules::{solve_with, SolveLimits, TieBreak};
use absaf::{Absaf, Election, Error, Outcome, RepMode, Result, RuleKind, RuleSpec, Strategy};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use serde_json::json;

#[derive(Parser)]
#[command(name = "absaf", version, about = "Approval-based social argumentation frameworks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// AF file (`.apx`, or `.tgf`).
    #[arg(long)]
    af: PathBuf,
    /// Ballot file (`.json`, or the `count : a,b` line format).
    #[arg(long)]
    ballots: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// List the preferred extensions of an AF.
    Prf {
        #[arg(long)]
        af: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether k extensions can represent every voter exactly 1.
    Represent {
        #[command(flatten)]
        input: Input,
        /// Omit to search for the smallest such outcome.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value = "regular")]
        mode: RepMode,
        #[arg(long, default_value_t = DEFAULT_MAX_COMBINATIONS)]
        max_combinations: u64,
        #[arg(long)]
        json: bool,
    },
    /// Select at most k extensions with a rule.
    Select {
        #[command(flatten)]
        input: Input,
        /// utilitarian, egalitarian, harmonic, maxcov, or owa:w1,w2,...
        #[arg(long)]
        rule: RuleKind,
        #[arg(long, default_value = "exact")]
        strategy: Strategy,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "regular")]
        mode: RepMode,
        #[arg(long, value_enum, default_value_t = Side::First)]
        tie_break: Side,
        /// Seconds.
        #[arg(long)]
        timeout: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_MAX_COMBINATIONS)]
        max_combinations: u64,
        #[arg(long)]
        json: bool,
    },
    /// Check JR or SJR for an outcome given as viewpoints.
    Audit {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "regular")]
        mode: RepMode,
        #[arg(long, value_enum)]
        axiom: Axiom,
        /// One viewpoint as comma-separated labels; repeat per viewpoint.
        #[arg(long = "viewpoint", required = true)]
        viewpoints: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Generate an AF and an electorate around ground truths.
    Gen(GenArgs),
    /// Run an experiment and write its CSV tables and manifest.
    Exp {
        #[arg(value_enum)]
        kind: ExpKind,
        /// `key = value` file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override one key; repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Start from the large-scale settings instead of the desk defaults.
        #[arg(long, alias = "paper-scale")]
        full_scale: bool,
    },
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n_args: usize,
    #[arg(long, default_value_t = 0.5)]
    p_cycle: f64,
    #[arg(long, default_value_t = 1)]
    attachment: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    truths: usize,
    #[arg(long, default_value_t = 10)]
    per_truth: usize,
    #[arg(long, default_value_t = 0.5)]
    phi: f64,
    /// Accept only AFs with at least this many preferred extensions.
    #[arg(long)]
    min_extensions: Option<usize>,
    #[arg(long)]
    max_extensions: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    max_tries: usize,
    /// Directory for af.apx, ballots.json and meta.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    First,
    Last,
}

#[derive(Clone, Copy, ValueEnum)]
enum Axiom {
    Jr,
    Sjr,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExpKind {
    VaryK,
    Metrics,
    GreedyApprox,
    Perf,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Timeout(_) | Error::ResourceLimit(_) => 3,
                Error::NotRepresentable => 4,
                _ => 2,
            })
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn load_af(path: &Path) -> Result<absaf::Af> {
    parse_af(&read(path)?, Format::from_path(path))
}

fn load(input: &Input) -> Result<Election> {
    let af = load_af(&input.af)?;
    let absaf = Absaf::from_text(af, &read(&input.ballots)?, BallotFormat::from_path(&input.ballots))?;
    Election::new(absaf)
}

fn labels(e: &Election, o: &Outcome) -> Vec<Vec<String>> {
    o.viewpoints.iter().map(|v| e.af().labels_of(v).into_iter().map(String::from).collect()).collect()
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Prf { af, json } => {
            let af = load_af(&af)?;
            let prf = absaf::preferred_extensions(&af)?;
            if json {
                let sets: Vec<Vec<&str>> = prf.iter().map(|s| af.labels_of(s)).collect();
                println!("{}", json!({ "count": prf.len(), "extensions": sets }));
            } else {
                println!("{} preferred extensions", prf.len());
                for s in &prf {
                    println!("{}", af.display_set(s));
                }
            }
        }
        Command::Represent { input, k, mode, max_combinations, json } => {
            let e = load(&input)?;
            let found = match k {
                Some(k) => decide_representable_with(&e, k, mode, max_combinations)?,
                None => match min_perfect_outcome_with(&e, mode, max_combinations) {
                    Ok(o) => Some(o),
                    Err(Error::NotRepresentable) => None,
                    Err(other) => return Err(other),
                },
            };
            if json {
                let outcome = found.as_ref().map(|o| labels(&e, o));
                println!("{}", json!({ "representable": found.is_some(), "mode": mode, "outcome": outcome }));
            } else {
                match &found {
                    Some(o) => {
                        println!("YES");
                        for v in &o.viewpoints {
                            println!("{}", e.af().display_set(v));
                        }
                    }
                    None => println!("NO"),
                }
            }
        }
        Command::Select { input, rule, strategy, k, mode, tie_break, timeout, max_combinations, json } => {
            let e = load(&input)?;
            let started = Instant::now();
            let limits = SolveLimits {
                max_combinations,
                deadline: timeout.map(|t| started + Duration::from_secs_f64(t)),
                tie_break: match tie_break {
                    Side::First => TieBreak::First,
                    Side::Last => TieBreak::Last,
                },
            };
            let spec = RuleSpec::new(rule.clone(), strategy, mode);
            let sel = solve_with(&e, k, &spec, limits)?;
            let elapsed = started.elapsed().as_secs_f64();
            let scores = e.rep_vector(&sel.outcome, mode)?;
            let mut sorted = scores.clone();
            sorted.sort();
            let text = |v: &[Rational64]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
            if json {
                println!(
                    "{}",
                    json!({
                        "rule": rule.to_string(),
                        "strategy": strategy.to_string(),
                        "mode": mode,
                        "k": k,
                        "indices": sel.indices,
                        "outcome": labels(&e, &sel.outcome),
                        "scores": text(&scores),
                        "sorted": text(&sorted),
                        "objective": sel.objective.to_string(),
                        "objective_f64": sel.objective_f64(),
                        "seconds": elapsed,
                    })
                );
            } else {
                println!("{rule} ({strategy}, {mode}) k={k}");
                for v in &sel.outcome.viewpoints {
                    println!("{}", e.af().display_set(v));
                }
                println!("scores: {}", text(&scores).join(" "));
                println!("sorted: {}", text(&sorted).join(" "));
                println!("objective: {} ({:.6})", sel.objective, sel.objective_f64());
            }
        }
        Command::Audit { input, k, mode, axiom, viewpoints, json } => {
            let e = load(&input)?;
            let sets: Vec<Vec<&str>> =
                viewpoints.iter().map(|v| v.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()).collect();
            let omega = e.outcome_from_labels(&sets, k)?;
            let check = match axiom {
                Axiom::Jr => check_jr(&e, &omega, mode)?,
                Axiom::Sjr => check_sjr(&e, &omega, mode)?,
            };
            let name = match axiom {
                Axiom::Jr => "jr",
                Axiom::Sjr => "sjr",
            };
            match (&check, json) {
                (AxiomCheck::Holds, true) => println!("{}", json!({ "axiom": name, "holds": true })),
                (AxiomCheck::Violated { group, extension }, true) => println!(
                    "{}",
                    json!({
                        "axiom": name,
                        "holds": false,
                        "group": group,
                        "extension": e.af().labels_of(&e.prf()[*extension]),
                    })
                ),
                (AxiomCheck::Holds, false) => println!("{name}: holds"),
                (AxiomCheck::Violated { group, extension }, false) => {
                    println!("{name}: violated");
                    println!("extension: {}", e.af().display_set(&e.prf()[*extension]));
                    println!("voters: {}", group.iter().map(ToString::to_string).collect::<Vec<_>>().join(","));
                }
            }
        }
        Command::Gen(args) => generate(&args)?,
        Command::Exp { kind, config, overrides, out, full_scale } => {
            let mut cfg = if full_scale { ExperimentConfig::full_scale() } else { ExperimentConfig::default() };
            if let Some(path) = config {
                cfg.apply_text(&read(&path)?)?;
            }
            for o in &overrides {
                let (k, v) =
                    o.split_once('=').ok_or_else(|| Error::InvalidParameter(format!("`{o}` is not KEY=VALUE")))?;
                cfg.set(k.trim(), v.trim())?;
            }
            if let Some(out) = out {
                cfg.out = out;
            }
            let kind = match kind {
                ExpKind::VaryK => ExperimentKind::VaryK,
                ExpKind::Metrics => ExperimentKind::Metrics,
                ExpKind::GreedyApprox => ExperimentKind::GreedyApprox,
                ExpKind::Perf => ExperimentKind::Perf,
            };
            let output = experiments::run(kind, &cfg)?;
            for p in experiments::write_outputs(&output, &cfg.out)? {
                println!("{}", p.display());
            }
        }
    }
    Ok(())
}

fn generate(a: &GenArgs) -> Result<()> {
    let params = GenParams { n_args: a.n_args, p_cycle: a.p_cycle, attachment: a.attachment, seed: a.seed };
    let lo = a.min_extensions.unwrap_or(a.truths);
    let hi = a.max_extensions.unwrap_or(usize::MAX);
    let limits = absaf::af::EnumLimits { max_extensions: a.max_extensions, ..Default::default() };
    let (af, prf) = generators::gen_until(&params, limits, a.max_tries, |_, prf| (lo..=hi).contains(&prf.len()))?;
    let mut rng = generators::child_rng(a.seed, generators::TRUTH_STREAM);
    let truths: Vec<_> =
        generators::choose_ground_truths(prf.len(), a.truths, &mut rng)?.into_iter().map(|j| prf[j].clone()).collect();
    let g = generators::build_absaf(af, &truths, a.per_truth, a.phi, a.seed)?;
    std::fs::create_dir_all(&a.out)?;
    let af = g.absaf.af();
    std::fs::write(a.out.join("af.apx"), write_apx(af))?;
    std::fs::write(a.out.join("ballots.json"), write_ballots_json(af, g.absaf.ballots()))?;
    let meta = json!({
        "n_args": a.n_args,
        "p_cycle": a.p_cycle,
        "attachment": a.attachment,
        "seed": a.seed,
        "extensions": prf.len(),
        "phi": a.phi,
        "per_truth": a.per_truth,
        "ground_truths": g.ground_truths.iter().map(|t| af.labels_of(t)).collect::<Vec<_>>(),
        "truth_of_voter": g.truth_of_voter,
    });
    std::fs::write(a.out.join("meta.json"), serde_json::to_string_pretty(&meta)?)?;
    println!("{}", a.out.display());
    Ok(())
}
