//! Exhaustive reference implementations over bitmasks. They use the library
//! only to read an AF's attacks and an electorate's ballots.

#![allow(dead_code)]

use absaf::{Absaf, Af, RepMode};
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Mask = u64;

pub fn bits(m: Mask) -> u32 {
    m.count_ones()
}

fn low_bits(n: usize) -> std::ops::Range<Mask> {
    assert!(n <= 20, "exhaustive search over {n} elements");
    0..1 << n
}

pub fn to_mask(ids: impl IntoIterator<Item = usize>) -> Mask {
    ids.into_iter().fold(0, |m, i| m | 1 << i)
}

pub fn attack_masks(af: &Af) -> Vec<Mask> {
    assert!(af.len() <= 64);
    let mut attackers = vec![0; af.len()];
    for &(a, b) in af.attacks() {
        attackers[b] |= 1 << a;
    }
    attackers
}

/// Preferred extensions by filtering every subset, ascending as masks.
pub fn brute_prf(af: &Af) -> Vec<Mask> {
    let n = af.len();
    let attackers = attack_masks(af);
    let attacked_by = |s: Mask| (0..n).filter(|&b| attackers[b] & s != 0).fold(0, |m, b| m | 1 << b);
    let admissible: Vec<Mask> = low_bits(n)
        .filter(|&s| {
            let out = attacked_by(s);
            out & s == 0 && (0..n).filter(|&a| s >> a & 1 == 1).all(|a| attackers[a] & !out == 0)
        })
        .collect();
    let mut prf: Vec<Mask> =
        admissible.iter().copied().filter(|&s| !admissible.iter().any(|&t| t != s && s & t == s)).collect();
    prf.sort_unstable();
    prf
}

pub fn set_mask(s: &absaf::ArgSet) -> Mask {
    to_mask(s.iter())
}

/// One mask per voter, multiplicities expanded.
pub fn voter_masks(absaf: &Absaf) -> Vec<Mask> {
    absaf.voters().map(|(_, b)| set_mask(b)).collect()
}

pub struct Plain {
    pub prf: Vec<Mask>,
    pub voters: Vec<Mask>,
}

impl Plain {
    pub fn of(absaf: &Absaf) -> Self {
        Plain { prf: brute_prf(absaf.af()), voters: voter_masks(absaf) }
    }

    pub fn max_def(&self, i: usize) -> u32 {
        self.prf.iter().map(|p| bits(p & self.voters[i])).max().unwrap_or(0)
    }

    pub fn rep(&self, i: usize, p: Mask, mode: RepMode) -> Rational64 {
        let b = self.voters[i];
        let hit = bits(b & p) as i64;
        match mode {
            RepMode::Regular => Rational64::new(hit, bits(b) as i64),
            RepMode::Core => match self.max_def(i) {
                0 => Rational64::from_integer(1),
                d => Rational64::new(hit, d as i64),
            },
        }
    }

    pub fn rep_outcome(&self, i: usize, omega: &[Mask], mode: RepMode) -> Rational64 {
        omega.iter().map(|&p| self.rep(i, p, mode)).max().unwrap_or_else(|| Rational64::from_integer(0))
    }

    pub fn perfect(&self, i: usize, p: Mask, mode: RepMode) -> bool {
        self.rep(i, p, mode) == Rational64::from_integer(1)
    }

    /// Index subsets of `prf` with exactly `size` members.
    pub fn outcomes(&self, size: usize) -> Vec<Vec<usize>> {
        let m = self.prf.len();
        low_bits(m)
            .filter(|s| bits(*s) as usize == size)
            .map(|s| (0..m).filter(|j| s >> j & 1 == 1).collect())
            .collect()
    }

    pub fn masks(&self, idx: &[usize]) -> Vec<Mask> {
        idx.iter().map(|&j| self.prf[j]).collect()
    }

    /// Some outcome of size at most `k` represents every voter exactly 1.
    pub fn representable(&self, k: usize, mode: RepMode) -> bool {
        (1..=k.min(self.prf.len())).any(|s| {
            self.outcomes(s)
                .iter()
                .any(|o| (0..self.voters.len()).all(|i| o.iter().any(|&j| self.perfect(i, self.prf[j], mode))))
        })
    }

    /// Largest minimum representation over outcomes of size `min(k, m)`.
    pub fn best_min(&self, k: usize, mode: RepMode) -> Rational64 {
        self.outcomes(k.min(self.prf.len()))
            .iter()
            .map(|o| {
                let om = self.masks(o);
                (0..self.voters.len()).map(|i| self.rep_outcome(i, &om, mode)).min().unwrap()
            })
            .max()
            .unwrap()
    }

    fn groups(&self, k: usize) -> impl Iterator<Item = Mask> + '_ {
        let n = self.voters.len();
        low_bits(n).skip(1).filter(move |g| bits(*g) as usize * k >= n)
    }

    fn members(g: Mask, n: usize) -> impl Iterator<Item = usize> {
        (0..n).filter(move |i| g >> i & 1 == 1)
    }

    fn group_representable(&self, g: Mask, mode: RepMode) -> bool {
        let n = self.voters.len();
        self.prf.iter().any(|&p| Self::members(g, n).all(|i| self.perfect(i, p, mode)))
    }

    /// Every voter subset of size at least `n/k` that one extension fully
    /// represents is fully represented by one member of `omega`.
    pub fn sjr_holds(&self, omega: &[Mask], k: usize, mode: RepMode) -> bool {
        let n = self.voters.len();
        self.groups(k)
            .filter(|&g| self.group_representable(g, mode))
            .all(|g| omega.iter().any(|&w| Self::members(g, n).all(|i| self.perfect(i, w, mode))))
    }

    /// Every such group has some member fully represented by `omega`.
    pub fn jr_holds(&self, omega: &[Mask], k: usize, mode: RepMode) -> bool {
        let n = self.voters.len();
        self.groups(k)
            .filter(|&g| self.group_representable(g, mode))
            .all(|g| Self::members(g, n).any(|i| omega.iter().any(|&w| self.perfect(i, w, mode))))
    }

    /// JR through the uncovered part of each extension's cover set; no
    /// subset enumeration, so it scales to large electorates.
    pub fn jr_holds_fast(&self, omega: &[Mask], k: usize, mode: RepMode) -> bool {
        let n = self.voters.len();
        let uncovered: Vec<usize> = (0..n).filter(|&i| !omega.iter().any(|&w| self.perfect(i, w, mode))).collect();
        self.prf.iter().all(|&p| uncovered.iter().filter(|&&i| self.perfect(i, p, mode)).count() * k < n)
    }

    pub fn coverage(&self, omega: &[Mask], mode: RepMode) -> usize {
        (0..self.voters.len()).filter(|&i| omega.iter().any(|&w| self.perfect(i, w, mode))).count()
    }
}

/// Random AF whose ballots are drawn inside its preferred extensions, so
/// small outcomes often represent everyone. `None` if some extension is
/// empty.
pub fn planted_absaf(seed: u64, n_args: usize, n_voters: usize) -> Option<Absaf> {
    let base = absaf::fixtures::random_absaf(seed, n_args, 1);
    let af = base.af().clone();
    let prf = brute_prf(&af);
    if prf.contains(&0) {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let ballots = (0..n_voters)
        .map(|_| {
            let p = prf[rng.random_range(0..prf.len())];
            let ids: Vec<usize> = (0..n_args).filter(|&a| p >> a & 1 == 1).collect();
            let mut s = absaf::ArgSet::empty(n_args);
            while s.is_empty() {
                for &a in &ids {
                    if rng.random_bool(0.5) {
                        s.insert(a);
                    }
                }
            }
            absaf::Ballot::single(s)
        })
        .collect();
    Some(Absaf::new(af, ballots).unwrap())
}
