//! Outcome-selection rules: OWA rules (utilitarian, egalitarian, harmonic,
//! custom weights) and maximum coverage, each solved exactly or greedily.

mod exact;
mod greedy;
mod matrix;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use self::exact::solve_exact_matrix;
pub use self::greedy::solve_greedy_matrix;
pub use self::matrix::ScoreMatrix;
use crate::absaf::{Election, Outcome, RepMode};
use crate::error::{Error, Result};

/// Non-increasing, non-negative weights with a positive first entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OwaWeights(Vec<Rational64>);

impl OwaWeights {
    pub fn new(weights: Vec<Rational64>) -> Result<Self> {
        match weights.first() {
            Some(w) if *w > Rational64::zero() => {}
            _ => return Err(Error::param("OWA weights need a positive first entry")),
        }
        if weights.iter().any(|w| *w < Rational64::zero()) {
            return Err(Error::param("OWA weights must be non-negative"));
        }
        if weights.windows(2).any(|p| p[1] > p[0]) {
            return Err(Error::param("OWA weights must be non-increasing"));
        }
        Ok(OwaWeights(weights))
    }

    pub fn utilitarian(n: usize) -> Self {
        OwaWeights(vec![Rational64::from_integer(1); n])
    }

    pub fn egalitarian(n: usize) -> Self {
        let mut w = vec![Rational64::zero(); n];
        if let Some(first) = w.first_mut() {
            *first = Rational64::from_integer(1);
        }
        OwaWeights(w)
    }

    pub fn harmonic(n: usize) -> Self {
        OwaWeights((1..=n as i64).map(|j| Rational64::new(1, j)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Rational64] {
        &self.0
    }
}

/// Parses `3`, `1/2` or `0.25` as an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational64> {
    let s = s.trim();
    let bad = || Error::param(format!("bad number `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rational64::new(n, d));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.len() > 15 || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let negative = int.starts_with('-');
    let whole: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().map_err(|_| bad())? };
    let denom = 10i64.pow(frac.len() as u32);
    let frac: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
    let numer = whole.abs() * denom + frac;
    Ok(Rational64::new(if negative { -numer } else { numer }, denom))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleKind {
    Utilitarian,
    Egalitarian,
    Harmonic,
    /// Custom weights; length must equal the number of voters.
    Owa(OwaWeights),
    MaxCov,
}

impl RuleKind {
    /// Weight vector for `n` voters. Fails for `MaxCov` and for custom
    /// weights of the wrong length.
    pub fn weights(&self, n: usize) -> Result<OwaWeights> {
        match self {
            RuleKind::Utilitarian => Ok(OwaWeights::utilitarian(n)),
            RuleKind::Egalitarian => Ok(OwaWeights::egalitarian(n)),
            RuleKind::Harmonic => Ok(OwaWeights::harmonic(n)),
            RuleKind::Owa(w) if w.len() == n => Ok(w.clone()),
            RuleKind::Owa(w) => Err(Error::param(format!("{} OWA weights for {n} voters", w.len()))),
            RuleKind::MaxCov => Err(Error::param("coverage has no weight vector")),
        }
    }

    pub fn is_owa(&self) -> bool {
        !matches!(self, RuleKind::MaxCov)
    }

    pub fn name(&self) -> &'static str {
        match self {
            RuleKind::Utilitarian => "utilitarian",
            RuleKind::Egalitarian => "egalitarian",
            RuleKind::Harmonic => "harmonic",
            RuleKind::Owa(_) => "owa",
            RuleKind::MaxCov => "maxcov",
        }
    }
}

impl FromStr for RuleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "utilitarian" => Ok(RuleKind::Utilitarian),
            "egalitarian" => Ok(RuleKind::Egalitarian),
            "harmonic" => Ok(RuleKind::Harmonic),
            "maxcov" => Ok(RuleKind::MaxCov),
            _ => match lower.strip_prefix("owa:") {
                Some(list) => {
                    let w = list.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
                    Ok(RuleKind::Owa(OwaWeights::new(w)?))
                }
                None => Err(Error::param(format!("unknown rule `{s}`"))),
            },
        }
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleKind::Owa(w) => {
                f.write_str("owa:")?;
                for (i, x) in w.as_slice().iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
            other => f.write_str(other.name()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Exact,
    Greedy,
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(Strategy::Exact),
            "greedy" => Ok(Strategy::Greedy),
            other => Err(Error::param(format!("unknown strategy `{other}`"))),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Exact => "exact",
            Strategy::Greedy => "greedy",
        })
    }
}

/// Which maximizer a greedy round keeps when several tie.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Lowest canonical index.
    #[default]
    First,
    /// Highest canonical index.
    Last,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSpec {
    pub kind: RuleKind,
    pub strategy: Strategy,
    pub mode: RepMode,
}

impl RuleSpec {
    pub fn new(kind: RuleKind, strategy: Strategy, mode: RepMode) -> Self {
        RuleSpec { kind, strategy, mode }
    }

    pub fn exact(kind: RuleKind) -> Self {
        RuleSpec::new(kind, Strategy::Exact, RepMode::Regular)
    }

    pub fn greedy(kind: RuleKind) -> Self {
        RuleSpec::new(kind, Strategy::Greedy, RepMode::Regular)
    }

    pub fn with_mode(mut self, mode: RepMode) -> Self {
        self.mode = mode;
        self
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolveLimits {
    /// Largest `C(m, k)` the exact search will attempt.
    pub max_combinations: u64,
    pub deadline: Option<Instant>,
    pub tie_break: TieBreak,
}

impl Default for SolveLimits {
    fn default() -> Self {
        SolveLimits { max_combinations: 20_000_000, deadline: None, tie_break: TieBreak::First }
    }
}

/// Selected extension indices (canonical order for exact, pick order for
/// greedy) and the rule's objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct Choice {
    pub indices: Vec<usize>,
    pub objective: BigRational,
}

#[derive(Debug, Clone)]
pub struct Selection {
    pub indices: Vec<usize>,
    pub outcome: Outcome,
    pub objective: BigRational,
}

impl Selection {
    pub fn objective_f64(&self) -> f64 {
        self.objective.to_f64().unwrap_or(f64::NAN)
    }
}

/// `C(n, k)`, saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

pub(crate) fn clamp_k(k: usize, m: usize) -> Result<usize> {
    if k == 0 {
        return Err(Error::param("k must be at least 1"));
    }
    if k > m {
        log::info!("k = {k} exceeds the {m} available extensions; clamping");
    }
    Ok(k.min(m))
}

pub fn solve(e: &Election, k: usize, rule: &RuleSpec) -> Result<Selection> {
    solve_with(e, k, rule, SolveLimits::default())
}

pub fn solve_with(e: &Election, k: usize, rule: &RuleSpec, limits: SolveLimits) -> Result<Selection> {
    let matrix = ScoreMatrix::from_election(e, rule.mode);
    let choice = match rule.strategy {
        Strategy::Exact => solve_exact_matrix(&matrix, k, &rule.kind, &limits)?,
        Strategy::Greedy => solve_greedy_matrix(&matrix, k, &rule.kind, limits.tie_break)?,
    };
    let outcome = e.outcome(&choice.indices, k)?;
    Ok(Selection { indices: choice.indices, outcome, objective: choice.objective })
}

/// Exact solve regardless of `rule.strategy`.
pub fn solve_exact(e: &Election, k: usize, rule: &RuleSpec) -> Result<Selection> {
    let rule = RuleSpec { strategy: Strategy::Exact, ..rule.clone() };
    solve(e, k, &rule)
}

/// Greedy solve regardless of `rule.strategy`.
pub fn solve_greedy(e: &Election, k: usize, rule: &RuleSpec) -> Result<Selection> {
    let rule = RuleSpec { strategy: Strategy::Greedy, ..rule.clone() };
    solve(e, k, &rule)
}

/// `s⃗(Ω)`: per-voter representation sorted ascending.
pub fn sorted_rep_vector(e: &Election, omega: &Outcome, mode: RepMode) -> Result<Vec<Rational64>> {
    let mut v = e.rep_vector(omega, mode)?;
    v.sort();
    Ok(v)
}

pub fn owa_score(svec: &[Rational64], w: &OwaWeights) -> Result<BigRational> {
    if svec.len() != w.len() {
        return Err(Error::param(format!("{} scores against {} weights", svec.len(), w.len())));
    }
    let to_big = |r: &Rational64| BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()));
    Ok(svec.iter().zip(w.as_slice()).map(|(s, w)| to_big(s) * to_big(w)).sum())
}

/// Number of voters represented exactly 1 by `omega`.
pub fn coverage_count(e: &Election, omega: &Outcome, mode: RepMode) -> usize {
    if omega.is_empty() {
        return 0;
    }
    let one = Rational64::from_integer(1);
    e.rep_vector(omega, mode).map_or(0, |v| v.iter().filter(|r| **r == one).count())
}

/// Objective of `omega` under `kind`, computed directly from the definition.
pub fn objective(e: &Election, omega: &Outcome, kind: &RuleKind, mode: RepMode) -> Result<BigRational> {
    match kind {
        RuleKind::MaxCov => Ok(BigRational::from_integer(coverage_count(e, omega, mode).into())),
        owa => owa_score(&sorted_rep_vector(e, omega, mode)?, &owa.weights(e.n())?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn r(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn weights_validation() {
        assert!(OwaWeights::new(vec![r(1, 1), r(1, 2)]).is_ok());
        assert!(OwaWeights::new(vec![r(1, 2), r(1, 1)]).is_err());
        assert!(OwaWeights::new(vec![r(0, 1)]).is_err());
        assert!(OwaWeights::new(vec![]).is_err());
        assert!(OwaWeights::new(vec![r(1, 1), r(-1, 1)]).is_err());
        assert_eq!(OwaWeights::harmonic(3).as_slice(), &[r(1, 1), r(1, 2), r(1, 3)]);
        assert_eq!(OwaWeights::egalitarian(3).as_slice(), &[r(1, 1), r(0, 1), r(0, 1)]);
    }

    #[test]
    fn rule_parsing() {
        assert_eq!("Harmonic".parse::<RuleKind>().unwrap(), RuleKind::Harmonic);
        let custom: RuleKind = "owa:1,0.5,1/4".parse().unwrap();
        assert_eq!(custom.weights(3).unwrap().as_slice(), &[r(1, 1), r(1, 2), r(1, 4)]);
        assert!(custom.weights(4).is_err());
        assert_eq!(custom.to_string(), "owa:1,1/2,1/4");
        assert!("borda".parse::<RuleKind>().is_err());
        assert_eq!(parse_rational("-0.25").unwrap(), r(-1, 4));
        assert_eq!(parse_rational("2").unwrap(), r(2, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn owa_score_examples() {
        let v = [r(1, 4), r(1, 1), r(1, 1), r(1, 1)];
        assert_eq!(owa_score(&v, &OwaWeights::utilitarian(4)).unwrap(), q(13, 4));
        let v = [r(3, 4), r(3, 4), r(1, 1), r(1, 1)];
        assert_eq!(owa_score(&v, &OwaWeights::egalitarian(4)).unwrap(), q(3, 4));
        assert_eq!(owa_score(&[r(0, 1), r(1, 1)], &OwaWeights::harmonic(2)).unwrap(), q(1, 2));
        assert!(owa_score(&[r(0, 1)], &OwaWeights::harmonic(2)).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(48, 12), 69_668_534_468);
        assert_eq!(binomial(200, 100), u64::MAX);
    }

    #[test]
    fn jr_counterexample_vectors() {
        let e = Election::new(fixtures::jr_counterexample()).unwrap();
        let pi = |j: usize| e.prf()[j].clone();
        let o12 = Outcome::new(vec![pi(0), pi(1)], 2).unwrap();
        let o23 = Outcome::new(vec![pi(1), pi(2)], 2).unwrap();
        assert_eq!(sorted_rep_vector(&e, &o12, RepMode::Regular).unwrap(), vec![r(1, 4), r(1, 1), r(1, 1), r(1, 1)]);
        assert_eq!(sorted_rep_vector(&e, &o23, RepMode::Regular).unwrap(), vec![r(3, 4), r(3, 4), r(1, 1), r(1, 1)]);
        let o1 = Outcome::new(vec![pi(0)], 1).unwrap();
        assert_eq!(coverage_count(&e, &o1, RepMode::Regular), 2);
        let all = Outcome::new(e.prf().to_vec(), 3).unwrap();
        assert_eq!(coverage_count(&e, &all, RepMode::Core), e.n());
    }

    #[test]
    fn score_table_k1() {
        let m = fixtures::score_table();
        let pick = |kind: RuleKind| solve_exact_matrix(&m, 1, &kind, &SolveLimits::default()).unwrap().indices;
        assert_eq!(pick(RuleKind::Utilitarian), vec![0]);
        assert_eq!(pick(RuleKind::MaxCov), vec![0]);
        assert_eq!(pick(RuleKind::Harmonic), vec![1]);
        assert_eq!(pick(RuleKind::Egalitarian), vec![2]);
    }
}
