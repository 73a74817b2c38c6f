//! Approval-based social AFs: an AF plus voters' approval ballots, and the
//! (core-)representation measures over preferred extensions.

mod ballots;

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

pub use self::ballots::{parse_ballots, write_ballots_json, write_ballots_text, BallotFormat};
use crate::af::{self, Af, EnumLimits};
use crate::bitset::{ArgSet, BitSet};
use crate::error::{Error, Result};

/// One distinct ballot and how many voters cast it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ballot {
    pub approved: ArgSet,
    pub multiplicity: u32,
}

impl Ballot {
    pub fn new(approved: ArgSet, multiplicity: u32) -> Self {
        Ballot { approved, multiplicity }
    }

    pub fn single(approved: ArgSet) -> Self {
        Ballot { approved, multiplicity: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum RepMode {
    #[default]
    Regular,
    Core,
}

impl FromStr for RepMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "regular" => Ok(RepMode::Regular),
            "core" => Ok(RepMode::Core),
            other => Err(Error::param(format!("unknown representation mode `{other}`"))),
        }
    }
}

impl fmt::Display for RepMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RepMode::Regular => "regular",
            RepMode::Core => "core",
        })
    }
}

/// An ABSAF. Ballots are stored compressed; voter ids `1..=n` are assigned
/// in ballot order, expanding multiplicities.
#[derive(Debug, Clone)]
pub struct Absaf {
    af: Af,
    ballots: Vec<Ballot>,
    // offsets[g] = number of voters before ballot g; last entry is n.
    offsets: Vec<usize>,
}

impl Absaf {
    pub fn new(af: Af, ballots: Vec<Ballot>) -> Result<Self> {
        let mut offsets = Vec::with_capacity(ballots.len() + 1);
        offsets.push(0);
        for (g, b) in ballots.iter().enumerate() {
            if b.approved.universe() != af.len() {
                return Err(Error::InvalidBallot(format!("ballot {g} is over a different argument set")));
            }
            if b.approved.is_empty() {
                return Err(Error::InvalidBallot(format!("ballot {g} approves nothing")));
            }
            if b.multiplicity == 0 {
                return Err(Error::InvalidBallot(format!("ballot {g} has multiplicity 0")));
            }
            offsets.push(offsets[g] + b.multiplicity as usize);
        }
        Ok(Absaf { af, ballots, offsets })
    }

    pub fn from_text(af: Af, ballots: &str, format: BallotFormat) -> Result<Self> {
        let ballots = parse_ballots(&af, ballots, format)?;
        Absaf::new(af, ballots)
    }

    pub fn af(&self) -> &Af {
        &self.af
    }

    pub fn ballots(&self) -> &[Ballot] {
        &self.ballots
    }

    /// Number of voters after expanding multiplicities.
    pub fn n(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    /// Index of the ballot cast by voter `i` (1-based).
    pub fn group_of(&self, voter: usize) -> Result<usize> {
        if voter == 0 || voter > self.n() {
            return Err(Error::UnknownVoter(voter));
        }
        Ok(self.offsets.partition_point(|&o| o < voter) - 1)
    }

    /// Voter ids `first..=last` that cast ballot `g`.
    pub fn voters_of(&self, g: usize) -> std::ops::RangeInclusive<usize> {
        self.offsets[g] + 1..=self.offsets[g + 1]
    }

    pub fn ballot(&self, voter: usize) -> Result<&ArgSet> {
        Ok(&self.ballots[self.group_of(voter)?].approved)
    }

    /// `(voter id, ballot)` for every voter.
    pub fn voters(&self) -> impl Iterator<Item = (usize, &ArgSet)> + '_ {
        (0..self.ballots.len()).flat_map(move |g| self.voters_of(g).map(move |i| (i, &self.ballots[g].approved)))
    }

    /// `|π ∩ A_i| / |A_i|`.
    pub fn rep_point(&self, voter: usize, pi: &ArgSet) -> Result<Rational64> {
        Ok(rep_fraction(self.ballot(voter)?, pi))
    }

    /// `SD(i)`: approved arguments that attack back every one of their
    /// attackers. A pure self-attacker qualifies under this reading.
    pub fn self_defending(&self, voter: usize) -> Result<ArgSet> {
        Ok(self_defending_of(&self.af, self.ballot(voter)?))
    }

    /// `maxDef_i`: the largest `|π ∩ A_i|` over `prf`.
    pub fn max_def(&self, voter: usize, prf: &[ArgSet]) -> Result<usize> {
        Ok(max_def_of(self.ballot(voter)?, prf))
    }

    /// Core representation; 1 when `maxdef` is 0.
    pub fn rep_core_point(&self, voter: usize, pi: &ArgSet, maxdef: usize) -> Result<Rational64> {
        Ok(core_fraction(self.ballot(voter)?, pi, maxdef))
    }
}

pub(crate) fn rep_fraction(ballot: &ArgSet, pi: &ArgSet) -> Rational64 {
    Rational64::new(ballot.intersection_len(pi) as i64, ballot.len() as i64)
}

pub(crate) fn core_fraction(ballot: &ArgSet, pi: &ArgSet, maxdef: usize) -> Rational64 {
    if maxdef == 0 {
        Rational64::from_integer(1)
    } else {
        Rational64::new(ballot.intersection_len(pi) as i64, maxdef as i64)
    }
}

pub(crate) fn max_def_of(ballot: &ArgSet, prf: &[ArgSet]) -> usize {
    prf.iter().map(|p| p.intersection_len(ballot)).max().unwrap_or(0)
}

pub(crate) fn self_defending_of(af: &Af, ballot: &ArgSet) -> ArgSet {
    let mut sd = ballot.clone();
    for a in ballot {
        if !af.attackers(a).is_subset(af.targets(a)) {
            sd.remove(a);
        }
    }
    sd
}

/// A selected set of viewpoints together with its intended size bound `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub viewpoints: Vec<ArgSet>,
    pub k: usize,
}

impl Outcome {
    pub fn new(viewpoints: Vec<ArgSet>, k: usize) -> Result<Self> {
        if viewpoints.len() > k {
            return Err(Error::param(format!("outcome has {} viewpoints but k = {k}", viewpoints.len())));
        }
        for (i, v) in viewpoints.iter().enumerate() {
            if viewpoints[..i].contains(v) {
                return Err(Error::param("outcome contains a repeated viewpoint"));
            }
        }
        Ok(Outcome { viewpoints, k })
    }

    pub fn len(&self) -> usize {
        self.viewpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.viewpoints.is_empty()
    }

    pub fn contains(&self, pi: &ArgSet) -> bool {
        self.viewpoints.contains(pi)
    }
}

/// An ABSAF with its preferred extensions and per-ballot `maxDef` computed
/// once. Extensions are held in canonical order and referred to by index.
#[derive(Debug, Clone)]
pub struct Election {
    absaf: Absaf,
    prf: Vec<ArgSet>,
    max_def: Vec<usize>,
}

impl Election {
    pub fn new(absaf: Absaf) -> Result<Self> {
        Election::with_limits(absaf, EnumLimits::default())
    }

    pub fn with_limits(absaf: Absaf, limits: EnumLimits) -> Result<Self> {
        let prf = af::preferred_extensions_with(absaf.af(), limits)?;
        Ok(Election::with_extensions(absaf, prf))
    }

    /// Uses a precomputed (canonically ordered) preferred-extension list.
    pub fn with_extensions(absaf: Absaf, prf: Vec<ArgSet>) -> Self {
        let max_def = absaf.ballots().iter().map(|b| max_def_of(&b.approved, &prf)).collect();
        Election { absaf, prf, max_def }
    }

    pub fn absaf(&self) -> &Absaf {
        &self.absaf
    }

    pub fn af(&self) -> &Af {
        self.absaf.af()
    }

    pub fn prf(&self) -> &[ArgSet] {
        &self.prf
    }

    pub fn n(&self) -> usize {
        self.absaf.n()
    }

    pub fn extension_index(&self, pi: &ArgSet) -> Option<usize> {
        self.prf.binary_search(pi).ok()
    }

    pub fn max_def(&self, voter: usize) -> Result<usize> {
        Ok(self.max_def[self.absaf.group_of(voter)?])
    }

    /// Representation of ballot group `g` by extension `pi`.
    pub(crate) fn group_rep(&self, g: usize, pi: &ArgSet, mode: RepMode) -> Rational64 {
        let ballot = &self.absaf.ballots()[g].approved;
        match mode {
            RepMode::Regular => rep_fraction(ballot, pi),
            RepMode::Core => core_fraction(ballot, pi, self.max_def[g]),
        }
    }

    pub fn rep(&self, voter: usize, pi: &ArgSet, mode: RepMode) -> Result<Rational64> {
        Ok(self.group_rep(self.absaf.group_of(voter)?, pi, mode))
    }

    /// `rep_i(Ω)`: the best representation over the outcome's viewpoints.
    pub fn rep_outcome(&self, voter: usize, omega: &Outcome, mode: RepMode) -> Result<Rational64> {
        let g = self.absaf.group_of(voter)?;
        omega.viewpoints.iter().map(|pi| self.group_rep(g, pi, mode)).max().ok_or(Error::EmptyOutcome)
    }

    /// Per-voter `rep_i(Ω)` for voters `1..=n`, in voter order.
    pub fn rep_vector(&self, omega: &Outcome, mode: RepMode) -> Result<Vec<Rational64>> {
        if omega.is_empty() {
            return Err(Error::EmptyOutcome);
        }
        let mut out = Vec::with_capacity(self.n());
        for (g, b) in self.absaf.ballots().iter().enumerate() {
            let r = omega.viewpoints.iter().map(|pi| self.group_rep(g, pi, mode)).max().unwrap();
            out.extend(std::iter::repeat_n(r, b.multiplicity as usize));
        }
        Ok(out)
    }

    /// `V(π)`: voters (as a bitset over ids `0..n`, voter `i` at bit `i-1`)
    /// whose representation by `pi` is exactly 1.
    pub fn cover_set(&self, pi: &ArgSet, mode: RepMode) -> BitSet {
        let mut v = BitSet::empty(self.n());
        for g in 0..self.absaf.ballots().len() {
            if self.group_rep(g, pi, mode) == Rational64::from_integer(1) {
                for i in self.absaf.voters_of(g) {
                    v.insert(i - 1);
                }
            }
        }
        v
    }

    /// Builds an outcome from extension indices, rejecting out-of-range or
    /// repeated indices.
    pub fn outcome(&self, indices: &[usize], k: usize) -> Result<Outcome> {
        let viewpoints = indices
            .iter()
            .map(|&j| self.prf.get(j).cloned().ok_or_else(|| Error::param(format!("extension index {j} out of range"))))
            .collect::<Result<Vec<_>>>()?;
        Outcome::new(viewpoints, k)
    }

    /// Builds an outcome from label lists, each of which must name a
    /// preferred extension.
    pub fn outcome_from_labels<S: AsRef<str>>(&self, viewpoints: &[Vec<S>], k: usize) -> Result<Outcome> {
        let sets = viewpoints
            .iter()
            .map(|labels| {
                let s = self.af().set_of(labels.iter().map(AsRef::as_ref))?;
                if self.extension_index(&s).is_none() {
                    return Err(Error::NotPreferred(self.af().display_set(&s).to_string()));
                }
                Ok(s)
            })
            .collect::<Result<Vec<_>>>()?;
        Outcome::new(sets, k)
    }

    /// Checks that every viewpoint is a preferred extension.
    pub fn validate_outcome(&self, omega: &Outcome) -> Result<()> {
        for v in &omega.viewpoints {
            if self.extension_index(v).is_none() {
                return Err(Error::NotPreferred(self.af().display_set(v).to_string()));
            }
        }
        Ok(())
    }
}
