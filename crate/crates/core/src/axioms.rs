//! Justified representation (JR) and strong justified representation (SJR)
//! checks, with witnesses on violation.
//!
//! A voter group is 1-representable iff it lies inside the cover set `V(π)`
//! of some preferred extension `π`, where `V(π)` holds the voters that `π`
//! represents exactly 1.

use std::fmt;

use crate::absaf::{Election, Outcome, RepMode};
use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// Voter group as 1-based voter ids.
pub type VoterGroup = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomCheck {
    Holds,
    /// `group` is 1-representable by `extension` (an index into `prf`), has
    /// at least `⌈n/k⌉` members, and the outcome fails it.
    Violated {
        group: VoterGroup,
        extension: usize,
    },
}

impl AxiomCheck {
    pub fn holds(&self) -> bool {
        matches!(self, AxiomCheck::Holds)
    }
}

impl fmt::Display for AxiomCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomCheck::Holds => f.write_str("holds"),
            AxiomCheck::Violated { .. } => f.write_str("violated"),
        }
    }
}

/// `V(π)` for every extension, as bitsets over voters (`i` at bit `i-1`).
pub fn cover_sets(e: &Election, mode: RepMode) -> Vec<BitSet> {
    e.prf().iter().map(|pi| e.cover_set(pi, mode)).collect()
}

/// Extensions whose cover set has at least `threshold` voters, with those
/// voters.
pub fn representable_groups(e: &Election, threshold: usize, mode: RepMode) -> Result<Vec<(usize, VoterGroup)>> {
    if threshold == 0 {
        return Err(Error::param("threshold must be at least 1"));
    }
    Ok(cover_sets(e, mode)
        .into_iter()
        .enumerate()
        .filter(|(_, v)| v.len() >= threshold)
        .map(|(j, v)| (j, to_voters(&v)))
        .collect())
}

/// `⌈n/k⌉`: the smallest integer size with `|N'| ≥ n/k`.
pub fn group_threshold(n: usize, k: usize) -> usize {
    n.div_ceil(k)
}

fn to_voters(set: &BitSet) -> VoterGroup {
    set.iter().map(|b| b + 1).collect()
}

fn threshold_for(e: &Election, omega: &Outcome) -> Result<usize> {
    if omega.k == 0 {
        return Err(Error::param("outcome size bound k must be at least 1"));
    }
    e.validate_outcome(omega)?;
    Ok(group_threshold(e.n(), omega.k))
}

/// JR fails iff some extension 1-represents at least `⌈n/k⌉` voters none of
/// whom the outcome 1-represents. The witness is that uncovered group.
pub fn check_jr(e: &Election, omega: &Outcome, mode: RepMode) -> Result<AxiomCheck> {
    let t = threshold_for(e, omega)?;
    let covers = cover_sets(e, mode);
    let mut covered = BitSet::empty(e.n());
    for w in &omega.viewpoints {
        covered.union_with(&e.cover_set(w, mode));
    }
    for (j, v) in covers.iter().enumerate() {
        let uncovered = v.difference(&covered);
        if uncovered.len() >= t {
            return Ok(AxiomCheck::Violated { group: to_voters(&uncovered), extension: j });
        }
    }
    Ok(AxiomCheck::Holds)
}

/// SJR fails iff some group of at least `⌈n/k⌉` voters inside one cover set
/// is not contained in the cover set of a single selected viewpoint. Since
/// containment is inherited by subsets, it suffices to test each full cover
/// set `V(π)` of qualifying size; the witness is `V(π)` itself.
pub fn check_sjr(e: &Election, omega: &Outcome, mode: RepMode) -> Result<AxiomCheck> {
    let t = threshold_for(e, omega)?;
    let selected: Vec<BitSet> = omega.viewpoints.iter().map(|w| e.cover_set(w, mode)).collect();
    for (j, v) in cover_sets(e, mode).iter().enumerate() {
        if v.len() >= t && !selected.iter().any(|s| v.is_subset(s)) {
            return Ok(AxiomCheck::Violated { group: to_voters(v), extension: j });
        }
    }
    Ok(AxiomCheck::Holds)
}
