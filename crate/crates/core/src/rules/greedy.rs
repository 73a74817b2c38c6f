//! Greedy selection: each round adds the unselected extension that
//! maximizes the objective of the partial outcome.

use std::cmp::Ordering;

use num_rational::BigRational;

use super::matrix::{Evaluator, ScoreMatrix};
use super::{clamp_k, Choice, RuleKind, TieBreak};
use crate::error::{Error, Result};

pub fn solve_greedy_matrix(matrix: &ScoreMatrix, k: usize, rule: &RuleKind, tie: TieBreak) -> Result<Choice> {
    let m = matrix.m();
    if m == 0 {
        return Err(Error::param("no extensions to choose from"));
    }
    let k = clamp_k(k, m)?;
    let ev = Evaluator::new(matrix, rule)?;
    let groups = matrix.groups();
    let mut chosen = vec![false; m];
    let mut indices = Vec::with_capacity(k);
    let mut current: Option<Vec<u32>> = None;
    let mut candidate = vec![0u32; groups];
    let mut hist = vec![0u32; ev.distinct_values()];
    let mut objective = None;

    for _ in 0..k {
        let mut best: Option<(usize, BigRational, f64)> = None;
        for (j, &taken) in chosen.iter().enumerate() {
            if taken {
                continue;
            }
            match &current {
                None => candidate.copy_from_slice(&ev.ranks[j]),
                Some(cur) => {
                    for ((c, &p), &r) in candidate.iter_mut().zip(cur).zip(&ev.ranks[j]) {
                        *c = p.max(r);
                    }
                }
            }
            ev.histogram(&candidate, &mut hist);
            let approx = ev.approx(&hist);
            if let Some((_, _, f)) = &best {
                if approx < f - Evaluator::tolerance(*f) {
                    continue;
                }
            }
            let exact = ev.exact(&hist);
            let replace = match &best {
                None => true,
                Some((_, q, _)) => {
                    matches!((exact.cmp(q), tie), (Ordering::Greater, _) | (Ordering::Equal, TieBreak::Last))
                }
            };
            if replace {
                best = Some((j, exact, approx));
            }
        }
        let (j, q, _) = best.expect("an unselected extension remains");
        chosen[j] = true;
        indices.push(j);
        let next = match current.take() {
            None => ev.ranks[j].clone(),
            Some(cur) => cur.iter().zip(&ev.ranks[j]).map(|(&p, &r)| p.max(r)).collect(),
        };
        current = Some(next);
        objective = Some(q);
    }
    Ok(Choice { indices, objective: objective.expect("k ≥ 1") })
}
