//! Deciding whether at most `k` viewpoints can 1-represent every voter, and
//! the self-defending-argument construction that bounds representation.

use num_rational::Rational64;

use crate::absaf::{self_defending_of, Election, Outcome, RepMode};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::rules::binomial;

pub const DEFAULT_MAX_COMBINATIONS: u64 = 20_000_000;

/// Per extension, the ballot groups it 1-represents.
fn group_covers(e: &Election, mode: RepMode) -> Vec<BitSet> {
    let groups = e.absaf().ballots().len();
    let one = Rational64::from_integer(1);
    e.prf()
        .iter()
        .map(|pi| BitSet::from_indices(groups, (0..groups).filter(|&g| e.group_rep(g, pi, mode) == one)))
        .collect()
}

/// A witness of size at most `k` in which every voter is 1-represented
/// (or 1-core-represented), or `None`. Sizes are tried in increasing order
/// and combinations lexicographically, so the witness is the first smallest
/// one in canonical order.
pub fn decide_representable(e: &Election, k: usize, mode: RepMode) -> Result<Option<Outcome>> {
    decide_representable_with(e, k, mode, DEFAULT_MAX_COMBINATIONS)
}

pub fn decide_representable_with(
    e: &Election,
    k: usize,
    mode: RepMode,
    max_combinations: u64,
) -> Result<Option<Outcome>> {
    if k == 0 {
        return Err(Error::param("k must be at least 1"));
    }
    let m = e.prf().len();
    let kk = k.min(m);
    let total = (1..=kk).fold(0u64, |acc, s| acc.saturating_add(binomial(m, s)));
    if total > max_combinations {
        return Err(Error::ResourceLimit(format!(
            "{total} combinations of {m} extensions up to size {kk} exceeds cap of {max_combinations}"
        )));
    }
    let covers = group_covers(e, mode);
    let found = (1..=kk).find_map(|size| first_cover(&covers, size));
    found.map(|idx| e.outcome(&idx, k)).transpose()
}

/// The smallest outcome 1-(core-)representing everyone. In regular mode this
/// may not exist; core mode always has one within `min(n, |prf|)`.
pub fn min_perfect_outcome(e: &Election, mode: RepMode) -> Result<Outcome> {
    min_perfect_outcome_with(e, mode, DEFAULT_MAX_COMBINATIONS)
}

pub fn min_perfect_outcome_with(e: &Election, mode: RepMode, max_combinations: u64) -> Result<Outcome> {
    let covers = group_covers(e, mode);
    let groups = e.absaf().ballots().len();
    let mut all = BitSet::empty(groups);
    covers.iter().for_each(|c| all.union_with(c));
    if all.len() != groups {
        return Err(Error::NotRepresentable);
    }
    let m = e.prf().len();
    // Distinct groups never need more viewpoints than there are groups.
    for size in 1..=m.min(groups) {
        if binomial(m, size) > max_combinations {
            return Err(Error::ResourceLimit(format!("C({m},{size}) exceeds cap of {max_combinations}")));
        }
        if let Some(idx) = first_cover(&covers, size) {
            return e.outcome(&idx, size);
        }
    }
    Err(Error::NotRepresentable)
}

/// First lexicographic `size`-combination whose covers union to everything.
fn first_cover(covers: &[BitSet], size: usize) -> Option<Vec<usize>> {
    let m = covers.len();
    let first = covers.first()?;
    let universe = first.universe();
    // suffix[j] = union of covers[j..].
    let mut suffix = vec![BitSet::empty(universe); m + 1];
    for j in (0..m).rev() {
        suffix[j] = suffix[j + 1].union(&covers[j]);
    }
    let mut stack = Vec::with_capacity(size);
    let empty = BitSet::empty(universe);
    dfs(covers, &suffix, size, 0, &empty, &mut stack).then_some(stack)
}

fn dfs(covers: &[BitSet], suffix: &[BitSet], size: usize, from: usize, acc: &BitSet, stack: &mut Vec<usize>) -> bool {
    let universe = acc.universe();
    if stack.len() == size {
        return acc.len() == universe;
    }
    let need = size - stack.len();
    for j in from..=covers.len() - need {
        if acc.union(&suffix[j]).len() != universe {
            return false;
        }
        stack.push(j);
        if dfs(covers, suffix, size, j + 1, &acc.union(&covers[j]), stack) {
            return true;
        }
        stack.pop();
    }
    false
}

/// For conflict-free ballots: `alpha = min_i |SD(i)|/|A_i|` and an outcome
/// holding, per voter, the first preferred extension containing `SD(i)`.
/// Every voter is at least `alpha`-represented by it.
pub fn self_defending_witness(e: &Election) -> Result<(Rational64, Outcome)> {
    let absaf = e.absaf();
    let af = absaf.af();
    let mut alpha = Rational64::from_integer(1);
    let mut chosen: Vec<usize> = Vec::new();
    for (g, b) in absaf.ballots().iter().enumerate() {
        if !af.is_conflict_free(&b.approved) {
            return Err(Error::ConflictingBallot { voter: *absaf.voters_of(g).start() });
        }
        let sd = self_defending_of(af, &b.approved);
        alpha = alpha.min(Rational64::new(sd.len() as i64, b.approved.len() as i64));
        let j = e
            .prf()
            .iter()
            .position(|pi| sd.is_subset(pi))
            .ok_or_else(|| Error::NotPreferred(af.display_set(&sd).to_string()))?;
        if !chosen.contains(&j) {
            chosen.push(j);
        }
    }
    chosen.sort_unstable();
    let k = chosen.len();
    Ok((alpha, e.outcome(&chosen, k)?))
}
