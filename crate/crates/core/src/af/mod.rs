//! Abstract argumentation frameworks: arguments, attacks, and the
//! conflict-free / admissible / preferred semantics.

mod enumerate;
mod parse;

use std::collections::HashMap;
use std::fmt;

pub use self::enumerate::{preferred_extensions, preferred_extensions_with, EnumLimits};
pub use self::parse::{parse_af, write_apx, Format};
use crate::bitset::ArgSet;
use crate::error::{Error, Result};

/// Dense argument index, `0..af.len()`.
pub type ArgId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Argument {
    pub id: ArgId,
    pub label: String,
}

/// An AF `(Arg, Att)` with per-argument attacker/target bitsets.
#[derive(Clone)]
pub struct Af {
    labels: Vec<String>,
    index: HashMap<String, ArgId>,
    attacks: Vec<(ArgId, ArgId)>,
    attackers: Vec<ArgSet>,
    targets: Vec<ArgSet>,
}

impl Af {
    /// Builds an AF from labels and attack pairs. Duplicate attacks are
    /// merged; self-attacks are kept.
    pub fn new<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        attacks: impl IntoIterator<Item = (ArgId, ArgId)>,
    ) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(labels.len());
        for (id, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), id).is_some() {
                return Err(Error::DuplicateArgument(label.clone()));
            }
        }
        let n = labels.len();
        let mut attacks: Vec<(ArgId, ArgId)> = attacks.into_iter().collect();
        for &(a, b) in &attacks {
            if a >= n || b >= n {
                return Err(Error::UndeclaredArgument(format!("#{}", a.max(b))));
            }
        }
        attacks.sort_unstable();
        attacks.dedup();
        let mut attackers = vec![ArgSet::empty(n); n];
        let mut targets = vec![ArgSet::empty(n); n];
        for &(a, b) in &attacks {
            targets[a].insert(b);
            attackers[b].insert(a);
        }
        Ok(Af { labels, index, attacks, attackers, targets })
    }

    /// Same as [`Af::new`] but attacks are given by label.
    pub fn from_labels(labels: &[&str], attacks: &[(&str, &str)]) -> Result<Self> {
        let index: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
        let resolve = |l: &str| index.get(l).copied().ok_or_else(|| Error::UndeclaredArgument(l.to_string()));
        let pairs = attacks.iter().map(|(a, b)| Ok((resolve(a)?, resolve(b)?))).collect::<Result<Vec<_>>>()?;
        Af::new(labels.iter().copied(), pairs)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn arguments(&self) -> impl Iterator<Item = Argument> + '_ {
        self.labels.iter().enumerate().map(|(id, label)| Argument { id, label: label.clone() })
    }

    pub fn label(&self, id: ArgId) -> &str {
        &self.labels[id]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn id(&self, label: &str) -> Option<ArgId> {
        self.index.get(label).copied()
    }

    /// Attack pairs, sorted and deduplicated.
    pub fn attacks(&self) -> &[(ArgId, ArgId)] {
        &self.attacks
    }

    pub fn attacks_pair(&self, a: ArgId, b: ArgId) -> bool {
        self.targets[a].contains(b)
    }

    pub fn attackers(&self, a: ArgId) -> &ArgSet {
        &self.attackers[a]
    }

    pub fn targets(&self, a: ArgId) -> &ArgSet {
        &self.targets[a]
    }

    pub fn empty_set(&self) -> ArgSet {
        ArgSet::empty(self.len())
    }

    /// Resolves labels into an argument set.
    pub fn set_of<S: AsRef<str>>(&self, labels: impl IntoIterator<Item = S>) -> Result<ArgSet> {
        let mut s = self.empty_set();
        for l in labels {
            let l = l.as_ref();
            s.insert(self.id(l).ok_or_else(|| Error::UnknownLabel(l.to_string()))?);
        }
        Ok(s)
    }

    pub fn labels_of(&self, s: &ArgSet) -> Vec<&str> {
        s.iter().map(|i| self.label(i)).collect()
    }

    pub fn display_set<'a>(&'a self, s: &'a ArgSet) -> DisplaySet<'a> {
        DisplaySet { af: self, set: s }
    }

    /// `S⁺`: every argument attacked by some member of `s`.
    pub fn attacked_set(&self, s: &ArgSet) -> ArgSet {
        let mut out = self.empty_set();
        for a in s {
            out.union_with(&self.targets[a]);
        }
        out
    }

    pub fn is_conflict_free(&self, s: &ArgSet) -> bool {
        s.iter().all(|a| self.targets[a].is_disjoint(s))
    }

    /// Conflict-free, and every attacker of a member is attacked by `s`.
    pub fn is_admissible(&self, s: &ArgSet) -> bool {
        if !self.is_conflict_free(s) {
            return false;
        }
        let plus = self.attacked_set(s);
        s.iter().all(|a| self.attackers[a].is_subset(&plus))
    }

    /// True iff `a` belongs to some preferred extension.
    pub fn credulously_accepted(&self, a: ArgId) -> Result<bool> {
        Ok(preferred_extensions(self)?.iter().any(|e| e.contains(a)))
    }

    pub fn is_symmetric(&self) -> bool {
        self.attacks.iter().all(|&(a, b)| self.attacks_pair(b, a))
    }

    /// True iff the attack graph has no directed cycle (self-loops count).
    pub fn is_acyclic(&self) -> bool {
        // Kahn's algorithm on in-degrees.
        let n = self.len();
        let mut indeg: Vec<usize> = (0..n).map(|a| self.attackers[a].len()).collect();
        let mut queue: Vec<ArgId> = (0..n).filter(|&a| indeg[a] == 0).collect();
        let mut seen = 0;
        while let Some(a) = queue.pop() {
            seen += 1;
            for b in &self.targets[a] {
                indeg[b] -= 1;
                if indeg[b] == 0 {
                    queue.push(b);
                }
            }
        }
        seen == n
    }
}

impl fmt::Debug for Af {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Af").field("arguments", &self.labels).field("attacks", &self.attacks.len()).finish()
    }
}

pub struct DisplaySet<'a> {
    af: &'a Af,
    set: &'a ArgSet,
}

impl fmt::Display for DisplaySet<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.set.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.af.label(a))?;
        }
        write!(f, "}}")
    }
}
