//! Preferred-extension enumeration by labelling-based backtracking.
//!
//! Every search node carries a labelling of the arguments:
//!
//! * `In`     : chosen for the candidate extension,
//! * `Out`    : attacked by some `In` argument,
//! * `MustOut`: attacks some `In` argument but is not yet attacked back,
//! * `Undec`  : excluded from the candidate (branch decision or self-attack),
//! * `Blank`  : not decided yet.
//!
//! A leaf (no `Blank` left) whose `MustOut` set is empty has an admissible
//! `In` set. A `Blank` argument whose attackers are all `Out` is forced `In`,
//! since every preferred extension above the current `In` set contains it.
//! A node is abandoned when some `MustOut` argument has no `Blank` attacker
//! left, when an `Undec` argument has only `Out` attackers, or when
//! `In ∪ Blank` is covered by an extension already found. A leaf is recorded
//! only if no admissible strict superset exists, so every recorded set is
//! preferred and the extension cap can stop the search early.

use super::Af;
use crate::bitset::ArgSet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct EnumLimits {
    /// Search nodes visited before giving up.
    pub max_nodes: u64,
    pub max_arguments: Option<usize>,
    pub max_extensions: Option<usize>,
}

impl Default for EnumLimits {
    fn default() -> Self {
        EnumLimits { max_nodes: 5_000_000, max_arguments: None, max_extensions: None }
    }
}

/// All preferred extensions of `af` in canonical order, under default limits.
pub fn preferred_extensions(af: &Af) -> Result<Vec<ArgSet>> {
    preferred_extensions_with(af, EnumLimits::default())
}

pub fn preferred_extensions_with(af: &Af, limits: EnumLimits) -> Result<Vec<ArgSet>> {
    if let Some(max) = limits.max_arguments {
        if af.len() > max {
            return Err(Error::ResourceLimit(format!("{} arguments exceeds cap of {max}", af.len())));
        }
    }
    let self_attacking = ArgSet::from_indices(af.len(), (0..af.len()).filter(|&a| af.attacks_pair(a, a)));
    let mut search = Search { af, limits, nodes: 0, found: Vec::new(), self_attacking };
    let mut state = State { in_set: af.empty_set(), blank: ArgSet::full(af.len()), must_out: af.empty_set() };
    state.blank.difference_with(&search.self_attacking);
    search.run(state)?;
    let mut found = search.found;
    found.sort();
    Ok(found)
}

#[derive(Clone)]
struct State {
    in_set: ArgSet,
    blank: ArgSet,
    must_out: ArgSet,
}

struct Search<'a> {
    af: &'a Af,
    limits: EnumLimits,
    nodes: u64,
    found: Vec<ArgSet>,
    self_attacking: ArgSet,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.limits.max_nodes {
            return Err(Error::ResourceLimit(format!(
                "preferred enumeration visited more than {} nodes",
                self.limits.max_nodes
            )));
        }
        Ok(())
    }

    fn run(&mut self, mut state: State) -> Result<()> {
        loop {
            self.tick()?;
            if self.is_hopeless(&state) || !self.propagate(&mut state) {
                return Ok(());
            }
            let Some(x) = self.select(&state) else {
                if state.must_out.is_empty() && !self.extendable(&state.in_set)? {
                    self.record(state.in_set)?;
                }
                return Ok(());
            };
            let mut with_x = state.clone();
            self.label_in(&mut with_x, x);
            self.run(with_x)?;
            // Continue iteratively with x undecided.
            state.blank.remove(x);
        }
    }

    /// Forces defended `Blank` arguments `In`. Returns `false` when an
    /// `Undec` argument is defended, as no preferred extension can then
    /// extend this branch.
    fn propagate(&self, state: &mut State) -> bool {
        loop {
            let out = self.af.attacked_set(&state.in_set);
            let defended = |x: &usize| self.af.attackers(*x).is_subset(&out);
            let mut undec = ArgSet::full(self.af.len());
            undec.difference_with(&state.in_set);
            undec.difference_with(&state.blank);
            undec.difference_with(&state.must_out);
            undec.difference_with(&out);
            undec.difference_with(&self.self_attacking);
            if undec.iter().any(|x| defended(&x)) {
                return false;
            }
            match state.blank.iter().find(defended) {
                Some(x) => self.label_in(state, x),
                None => return true,
            }
        }
    }

    /// Whether some admissible set strictly contains the admissible `base`.
    fn extendable(&mut self, base: &ArgSet) -> Result<bool> {
        let mut blank = ArgSet::full(self.af.len());
        blank.difference_with(base);
        blank.difference_with(&self.af.attacked_set(base));
        blank.difference_with(&self.self_attacking);
        for a in base.iter() {
            blank.difference_with(self.af.attackers(a));
        }
        let state = State { in_set: base.clone(), blank, must_out: self.af.empty_set() };
        self.grows(state, base.len())
    }

    fn grows(&mut self, mut state: State, base_len: usize) -> Result<bool> {
        loop {
            self.tick()?;
            if state.in_set.len() > base_len && state.must_out.is_empty() {
                return Ok(true);
            }
            if state.must_out.iter().any(|y| self.af.attackers(y).is_disjoint(&state.blank)) {
                return Ok(false);
            }
            let Some(x) = self.select(&state) else { return Ok(false) };
            let mut with_x = state.clone();
            self.label_in(&mut with_x, x);
            if self.grows(with_x, base_len)? {
                return Ok(true);
            }
            state.blank.remove(x);
        }
    }

    fn is_hopeless(&self, state: &State) -> bool {
        if state.must_out.iter().any(|y| self.af.attackers(y).is_disjoint(&state.blank)) {
            return true;
        }
        let reachable = state.in_set.union(&state.blank);
        self.found.iter().any(|f| reachable.is_subset(f))
    }

    /// Resolve pending `MustOut` arguments first, through their scarcest
    /// blank attacker; otherwise take the lowest blank argument.
    fn select(&self, state: &State) -> Option<usize> {
        let pending = state.must_out.iter().map(|y| (self.af.attackers(y).intersection_len(&state.blank), y)).min();
        match pending {
            Some((_, y)) => self.af.attackers(y).intersection(&state.blank).iter().next(),
            None => state.blank.iter().next(),
        }
    }

    fn label_in(&self, state: &mut State, x: usize) {
        state.in_set.insert(x);
        state.blank.remove(x);
        let targets = self.af.targets(x);
        // Targets become Out, whatever they were.
        state.blank.difference_with(targets);
        state.must_out.difference_with(targets);
        let plus = self.af.attacked_set(&state.in_set);
        for y in self.af.attackers(x) {
            if !plus.contains(y) {
                state.blank.remove(y);
                state.must_out.insert(y);
            }
        }
    }

    fn record(&mut self, s: ArgSet) -> Result<()> {
        if self.found.iter().any(|f| s.is_subset(f)) {
            return Ok(());
        }
        self.found.retain(|f| !f.is_subset(&s));
        self.found.push(s);
        if let Some(max) = self.limits.max_extensions {
            if self.found.len() > max {
                return Err(Error::ResourceLimit(format!("more than {max} preferred extensions")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    /// Filters all 2^n subsets. Only for small AFs.
    pub(crate) fn brute_force_preferred(af: &Af) -> Vec<ArgSet> {
        let n = af.len();
        assert!(n <= 16);
        let admissible: Vec<ArgSet> = (0u32..1 << n)
            .map(|mask| ArgSet::from_indices(n, (0..n).filter(|i| mask >> i & 1 == 1)))
            .filter(|s| af.is_admissible(s))
            .collect();
        let mut prf: Vec<ArgSet> =
            admissible.iter().filter(|s| !admissible.iter().any(|t| *s != t && s.is_subset(t))).cloned().collect();
        prf.sort();
        prf
    }

    fn af_strategy(max_n: usize) -> impl Strategy<Value = Af> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..=(n * n).min(30))
                .prop_map(move |atts| Af::new((0..n).map(|i| format!("a{i}")), atts).unwrap())
        })
    }

    #[test]
    fn canada_has_eight() {
        let af = fixtures::canada_af();
        let prf = preferred_extensions(&af).unwrap();
        assert_eq!(prf.len(), 8);
        assert_eq!(prf, brute_force_preferred(&af));
    }

    #[test]
    fn undefended_extensions() {
        let s = fixtures::undefended_absaf();
        let af = s.af();
        let prf = preferred_extensions(af).unwrap();
        assert_eq!(prf, vec![af.set_of(["a", "b"]).unwrap(), af.set_of(["a", "c"]).unwrap()]);
    }

    #[test]
    fn self_attacker_yields_empty() {
        let af = Af::new(["x"], [(0, 0)]).unwrap();
        assert_eq!(preferred_extensions(&af).unwrap(), vec![af.empty_set()]);
        let empty = Af::new(Vec::<String>::new(), []).unwrap();
        assert_eq!(preferred_extensions(&empty).unwrap(), vec![empty.empty_set()]);
    }

    #[test]
    fn odd_cycle_yields_empty() {
        let af = Af::new(["a", "b", "c"], [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(preferred_extensions(&af).unwrap(), vec![af.empty_set()]);
    }

    #[test]
    fn node_cap_is_an_error() {
        let af = fixtures::canada_af();
        let limits = EnumLimits { max_nodes: 3, ..Default::default() };
        assert!(matches!(preferred_extensions_with(&af, limits), Err(Error::ResourceLimit(_))));
        let limits = EnumLimits { max_extensions: Some(4), ..Default::default() };
        assert!(matches!(preferred_extensions_with(&af, limits), Err(Error::ResourceLimit(_))));
        let limits = EnumLimits { max_arguments: Some(4), ..Default::default() };
        assert!(matches!(preferred_extensions_with(&af, limits), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn many_disjoint_two_cycles() {
        // 2^10 preferred extensions.
        let n = 20;
        let atts: Vec<_> = (0..n / 2).flat_map(|i| [(2 * i, 2 * i + 1), (2 * i + 1, 2 * i)]).collect();
        let af = Af::new((0..n).map(|i| format!("a{i}")), atts).unwrap();
        let prf = preferred_extensions(&af).unwrap();
        assert_eq!(prf.len(), 1024);
        assert!(prf.windows(2).all(|w| w[0] < w[1]));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn matches_brute_force(af in af_strategy(10)) {
            let prf = preferred_extensions(&af).unwrap();
            prop_assert_eq!(&prf, &brute_force_preferred(&af));
            for (i, e) in prf.iter().enumerate() {
                prop_assert!(af.is_admissible(e));
                for f in &prf[i + 1..] {
                    prop_assert!(!e.is_subset(f) && !f.is_subset(e));
                }
            }
        }

        #[test]
        fn symmetric_cf_is_admissible(n in 1usize..8, edges in proptest::collection::vec((0usize..8, 0usize..8), 0..12)) {
            let atts: Vec<_> = edges.iter()
                .filter(|(a, b)| *a < n && *b < n && a != b)
                .flat_map(|&(a, b)| [(a, b), (b, a)])
                .collect();
            let af = Af::new((0..n).map(|i| format!("a{i}")), atts).unwrap();
            for mask in 0u32..1 << n {
                let s = ArgSet::from_indices(n, (0..n).filter(|i| mask >> i & 1 == 1));
                if af.is_conflict_free(&s) {
                    prop_assert!(af.is_admissible(&s));
                }
            }
        }
    }
}
