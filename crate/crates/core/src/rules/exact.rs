//! Exhaustive search over `min(k, m)`-combinations of extensions.
//!
//! Objectives are monotone in the outcome, so combinations of exactly
//! `min(k, m)` extensions suffice. Combinations are visited in lexicographic
//! order and the incumbent is replaced only on strict improvement, so the
//! first maximizer wins. Per-group best ranks are kept per depth; leaves are
//! screened in floating point and confirmed in exact arithmetic.

use std::time::Instant;

use num_rational::BigRational;

use super::matrix::{Evaluator, ScoreMatrix};
use super::{binomial, clamp_k, Choice, RuleKind, SolveLimits};
use crate::error::{Error, Result};

const DEADLINE_STRIDE: u64 = 4096;

pub fn solve_exact_matrix(matrix: &ScoreMatrix, k: usize, rule: &RuleKind, limits: &SolveLimits) -> Result<Choice> {
    let m = matrix.m();
    if m == 0 {
        return Err(Error::param("no extensions to choose from"));
    }
    let k = clamp_k(k, m)?;
    let combos = binomial(m, k);
    if combos > limits.max_combinations {
        return Err(Error::ResourceLimit(format!(
            "C({m},{k}) = {combos} combinations exceeds cap of {}",
            limits.max_combinations
        )));
    }
    let ev = Evaluator::new(matrix, rule)?;
    let mut search = Search {
        ev: &ev,
        k,
        m,
        groups: matrix.groups(),
        best_by_depth: vec![0; (k + 1) * matrix.groups()],
        hist: vec![0; ev.distinct_values()],
        stack: Vec::with_capacity(k),
        best: None,
        leaves: 0,
        started: Instant::now(),
        deadline: limits.deadline,
    };
    search.descend(0, 0)?;
    let (indices, objective, _) = search.best.expect("at least one combination");
    Ok(Choice { indices, objective })
}

struct Search<'a> {
    ev: &'a Evaluator,
    k: usize,
    m: usize,
    groups: usize,
    // Row d holds per-group best ranks after d picks.
    best_by_depth: Vec<u32>,
    hist: Vec<u32>,
    stack: Vec<usize>,
    best: Option<(Vec<usize>, BigRational, f64)>,
    leaves: u64,
    started: Instant,
    deadline: Option<Instant>,
}

impl Search<'_> {
    fn descend(&mut self, depth: usize, from: usize) -> Result<()> {
        let g = self.groups;
        // Leave room for the remaining picks.
        let last = self.m - (self.k - depth);
        for j in from..=last {
            let (prev, next) = self.best_by_depth.split_at_mut((depth + 1) * g);
            let prev = &prev[depth * g..];
            let next = &mut next[..g];
            let row = &self.ev.ranks[j];
            if depth == 0 {
                next.copy_from_slice(row);
            } else {
                for ((n, &p), &r) in next.iter_mut().zip(prev).zip(row) {
                    *n = p.max(r);
                }
            }
            self.stack.push(j);
            if depth + 1 == self.k {
                self.leaf()?;
            } else {
                self.descend(depth + 1, j + 1)?;
            }
            self.stack.pop();
        }
        Ok(())
    }

    fn leaf(&mut self) -> Result<()> {
        self.leaves += 1;
        if self.leaves % DEADLINE_STRIDE == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    return Err(Error::Timeout(self.started.elapsed().as_secs_f64()));
                }
            }
        }
        let g = self.groups;
        let best = &self.best_by_depth[self.k * g..(self.k + 1) * g];
        self.ev.histogram(best, &mut self.hist);
        let approx = self.ev.approx(&self.hist);
        let promising = match &self.best {
            None => true,
            Some((_, _, f)) => approx >= f - Evaluator::tolerance(*f),
        };
        if promising {
            let exact = self.ev.exact(&self.hist);
            if self.best.as_ref().is_none_or(|(_, q, _)| exact > *q) {
                self.best = Some((self.stack.clone(), exact, approx));
            }
        }
        Ok(())
    }
}
