//! Score matrices (extensions × ballot groups) and objective evaluation over
//! rank histograms.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{ToPrimitive, Zero};

use super::RuleKind;
use crate::absaf::{Election, RepMode};
use crate::error::{Error, Result};

/// Representation of each ballot group by each extension, with group sizes.
#[derive(Debug, Clone)]
pub struct ScoreMatrix {
    scores: Vec<Vec<Rational64>>,
    multiplicity: Vec<u32>,
}

impl ScoreMatrix {
    /// `scores[j][g]` is the representation of group `g` by extension `j`.
    pub fn new(scores: Vec<Vec<Rational64>>, multiplicity: Vec<u32>) -> Result<Self> {
        let zero = Rational64::zero();
        let one = Rational64::from_integer(1);
        for row in &scores {
            if row.len() != multiplicity.len() {
                return Err(Error::param("score row length differs from group count"));
            }
            if row.iter().any(|v| *v < zero || *v > one) {
                return Err(Error::param("scores must lie in [0,1]"));
            }
        }
        if multiplicity.contains(&0) {
            return Err(Error::param("group multiplicity must be positive"));
        }
        Ok(ScoreMatrix { scores, multiplicity })
    }

    /// One voter per column.
    pub fn from_rows(scores: Vec<Vec<Rational64>>) -> Result<Self> {
        let g = scores.first().map_or(0, Vec::len);
        ScoreMatrix::new(scores, vec![1; g])
    }

    pub fn from_election(e: &Election, mode: RepMode) -> Self {
        let groups = e.absaf().ballots().len();
        let scores = e.prf().iter().map(|pi| (0..groups).map(|g| e.group_rep(g, pi, mode)).collect()).collect();
        let multiplicity = e.absaf().ballots().iter().map(|b| b.multiplicity).collect();
        ScoreMatrix { scores, multiplicity }
    }

    /// Number of extensions (rows).
    pub fn m(&self) -> usize {
        self.scores.len()
    }

    pub fn groups(&self) -> usize {
        self.multiplicity.len()
    }

    /// Number of voters.
    pub fn n(&self) -> usize {
        self.multiplicity.iter().map(|&c| c as usize).sum()
    }

    pub fn score(&self, ext: usize, group: usize) -> Rational64 {
        self.scores[ext][group]
    }

    pub fn multiplicity(&self) -> &[u32] {
        &self.multiplicity
    }

    /// Ascending per-voter vector for the outcome made of rows `indices`.
    pub fn sorted_vector(&self, indices: &[usize]) -> Vec<Rational64> {
        let mut out = Vec::with_capacity(self.n());
        for g in 0..self.groups() {
            let best = indices.iter().map(|&j| self.scores[j][g]).max().unwrap_or_else(Rational64::zero);
            out.extend(std::iter::repeat_n(best, self.multiplicity[g] as usize));
        }
        out.sort();
        out
    }
}

/// Ranks every distinct score and evaluates objectives from a histogram of
/// per-group best ranks.
pub(crate) struct Evaluator {
    pub ranks: Vec<Vec<u32>>,
    pub multiplicity: Vec<u32>,
    values_f: Vec<f64>,
    values_q: Vec<BigRational>,
    objective: Kind,
}

enum Kind {
    Owa { prefix_f: Vec<f64>, prefix_q: Vec<BigRational> },
    Coverage { one: Option<u32> },
}

fn big(r: &Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

impl Evaluator {
    pub fn new(matrix: &ScoreMatrix, rule: &RuleKind) -> Result<Self> {
        let mut values: Vec<Rational64> = matrix.scores.iter().flatten().copied().collect();
        values.sort();
        values.dedup();
        let ranks = matrix
            .scores
            .iter()
            .map(|row| row.iter().map(|v| values.binary_search(v).unwrap() as u32).collect())
            .collect();
        let objective = match rule {
            RuleKind::MaxCov => {
                Kind::Coverage { one: values.binary_search(&Rational64::from_integer(1)).ok().map(|r| r as u32) }
            }
            owa => {
                let w = owa.weights(matrix.n())?;
                let mut prefix_q = Vec::with_capacity(w.len() + 1);
                let mut acc = BigRational::zero();
                prefix_q.push(acc.clone());
                for x in w.as_slice() {
                    acc += big(x);
                    prefix_q.push(acc.clone());
                }
                let prefix_f = prefix_q.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect();
                Kind::Owa { prefix_f, prefix_q }
            }
        };
        Ok(Evaluator {
            ranks,
            multiplicity: matrix.multiplicity.clone(),
            values_f: values.iter().map(|v| v.to_f64().unwrap()).collect(),
            values_q: values.iter().map(big).collect(),
            objective,
        })
    }

    pub fn distinct_values(&self) -> usize {
        self.values_f.len()
    }

    /// Fills `hist[r]` with the number of voters whose best rank is `r`.
    pub fn histogram(&self, best: &[u32], hist: &mut [u32]) {
        hist.iter_mut().for_each(|h| *h = 0);
        for (g, &r) in best.iter().enumerate() {
            hist[r as usize] += self.multiplicity[g];
        }
    }

    pub fn approx(&self, hist: &[u32]) -> f64 {
        match &self.objective {
            Kind::Owa { prefix_f, .. } => {
                let mut below = 0usize;
                let mut total = 0.0;
                for (r, &c) in hist.iter().enumerate() {
                    if c > 0 {
                        let above = below + c as usize;
                        total += self.values_f[r] * (prefix_f[above] - prefix_f[below]);
                        below = above;
                    }
                }
                total
            }
            Kind::Coverage { one } => one.map_or(0.0, |r| hist[r as usize] as f64),
        }
    }

    pub fn exact(&self, hist: &[u32]) -> BigRational {
        match &self.objective {
            Kind::Owa { prefix_q, .. } => {
                let mut below = 0usize;
                let mut total = BigRational::zero();
                for (r, &c) in hist.iter().enumerate() {
                    if c > 0 {
                        let above = below + c as usize;
                        if !self.values_q[r].is_zero() {
                            total += &self.values_q[r] * (&prefix_q[above] - &prefix_q[below]);
                        }
                        below = above;
                    }
                }
                total
            }
            Kind::Coverage { one } => BigRational::from_integer(BigInt::from(one.map_or(0, |r| hist[r as usize]))),
        }
    }

    /// Slack under which an approximate score may still beat `best`.
    pub fn tolerance(best: f64) -> f64 {
        1e-9 * best.abs().max(1.0)
    }
}
