//! Synthetic instances: preferential-attachment AFs with injected 2-cycles,
//! ground truths drawn from the preferred extensions, and Mallows-style
//! approval ballots centred on them.
//!
//! All randomness comes from `ChaCha8Rng`. A child stream is the generator
//! seeded with `seed_from_u64(seed)` and switched to stream `id`; voter `v`
//! (0-based) samples from stream `v`, and the `t`-th attempt of
//! [`gen_until`] builds its AF from stream `t`.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::absaf::{Absaf, Ballot};
use crate::af::{self, Af, EnumLimits};
use crate::bitset::ArgSet;
use crate::error::{Error, Result};

pub fn child_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub n_args: usize,
    pub p_cycle: f64,
    /// Attacks drawn by each new argument.
    pub attachment: usize,
    pub seed: u64,
}

impl GenParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_args < 2 {
            return Err(Error::param("need at least 2 arguments"));
        }
        if self.attachment == 0 || self.attachment >= self.n_args {
            return Err(Error::param("attachment must lie in 1..n_args"));
        }
        if !(0.0..=1.0).contains(&self.p_cycle) {
            return Err(Error::param("cycle probability must lie in [0,1]"));
        }
        Ok(())
    }
}

pub fn gen_af(params: &GenParams) -> Result<Af> {
    gen_af_with(params, &mut child_rng(params.seed, 0))
}

/// Arguments `a0..` arrive in order; each new one attacks
/// `min(attachment, existing)` distinct earlier arguments chosen with
/// probability proportional to degree + 1. Then every argument, with
/// probability `p_cycle`, attacks back one of its attackers picked uniformly.
pub fn gen_af_with(params: &GenParams, rng: &mut ChaCha8Rng) -> Result<Af> {
    params.validate()?;
    let n = params.n_args;
    let mut degree = vec![0usize; n];
    let mut attacks = Vec::new();
    let mut attackers: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 1..n {
        let want = params.attachment.min(v);
        let mut picked: Vec<usize> = Vec::with_capacity(want);
        while picked.len() < want {
            let total: usize = (0..v).filter(|u| !picked.contains(u)).map(|u| degree[u] + 1).sum();
            let mut ticket = rng.random_range(0..total);
            for u in (0..v).filter(|u| !picked.contains(u)) {
                let w = degree[u] + 1;
                if ticket < w {
                    picked.push(u);
                    break;
                }
                ticket -= w;
            }
        }
        for &u in &picked {
            attacks.push((v, u));
            attackers[u].push(v);
            degree[u] += 1;
            degree[v] += 1;
        }
    }
    for (x, list) in attackers.iter().enumerate() {
        if rng.random_bool(params.p_cycle) && !list.is_empty() {
            let y = list[rng.random_range(0..list.len())];
            attacks.push((x, y));
        }
    }
    Af::new((0..n).map(|i| format!("a{i}")), attacks)
}

/// Regenerates from successive child streams until `accept` holds for the
/// AF and its preferred extensions. AFs whose enumeration exceeds `limits`
/// are skipped.
pub fn gen_until(
    params: &GenParams,
    limits: EnumLimits,
    max_tries: usize,
    mut accept: impl FnMut(&Af, &[ArgSet]) -> bool,
) -> Result<(Af, Vec<ArgSet>)> {
    for t in 0..max_tries {
        let af = gen_af_with(params, &mut child_rng(params.seed, t as u64))?;
        let Ok(prf) = af::preferred_extensions_with(&af, limits) else { continue };
        if accept(&af, &prf) {
            return Ok((af, prf));
        }
    }
    Err(Error::Generation(format!("no acceptable AF after {max_tries} attempts")))
}

/// `g` distinct indices into `prf`, uniform without replacement, ascending.
pub fn choose_ground_truths(m: usize, g: usize, rng: &mut impl Rng) -> Result<Vec<usize>> {
    if g > m {
        return Err(Error::param(format!("{g} ground truths requested from {m} extensions")));
    }
    let mut idx = index::sample(rng, m, g).into_vec();
    idx.sort_unstable();
    Ok(idx)
}

/// Stream for ground-truth draws; voters never reach it.
pub const TRUTH_STREAM: u64 = 1 << 40;

/// Ground truths from stream [`TRUTH_STREAM`], so the same seed can drive
/// the electorate.
pub fn sample_ground_truths(af: &Af, g: usize, seed: u64) -> Result<Vec<ArgSet>> {
    let prf = af::preferred_extensions(af)?;
    let idx = choose_ground_truths(prf.len(), g, &mut child_rng(seed, TRUTH_STREAM))?;
    Ok(idx.into_iter().map(|j| prf[j].clone()).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MallowsParams {
    pub phi: f64,
    pub ground_truth: ArgSet,
    pub seed: u64,
}

/// `|s' \ s|`: approved arguments outside the centre.
pub fn distance(center: &ArgSet, ballot: &ArgSet) -> usize {
    ballot.difference(center).len()
}

pub fn sample_ballot(af: &Af, mp: &MallowsParams) -> Result<ArgSet> {
    if mp.ground_truth.universe() != af.len() {
        return Err(Error::param("ground truth is over a different argument set"));
    }
    sample_ballot_with(&mp.ground_truth, mp.phi, &mut child_rng(mp.seed, 0))
}

/// Draws a nonempty `s'` with probability proportional to
/// `phi^|s' \ center|`: members of the centre are kept with probability 1/2,
/// others with `phi/(1+phi)`, and empty draws are rejected.
pub fn sample_ballot_with(center: &ArgSet, phi: f64, rng: &mut impl Rng) -> Result<ArgSet> {
    if !(0.0..=1.0).contains(&phi) {
        return Err(Error::param("dispersion must lie in [0,1]"));
    }
    if center.is_empty() {
        return Err(Error::param("ground truth must be nonempty"));
    }
    let outside = phi / (1.0 + phi);
    let n = center.universe();
    loop {
        let mut s = ArgSet::empty(n);
        for a in 0..n {
            let p = if center.contains(a) { 0.5 } else { outside };
            if rng.random_bool(p) {
                s.insert(a);
            }
        }
        if !s.is_empty() {
            return Ok(s);
        }
    }
}

/// A generated electorate with the ground truth behind each voter.
#[derive(Debug, Clone)]
pub struct Generated {
    pub absaf: Absaf,
    pub ground_truths: Vec<ArgSet>,
    /// `truth_of_voter[v]` indexes `ground_truths` for voter `v+1`.
    pub truth_of_voter: Vec<usize>,
}

/// `per_truth` voters per ground truth.
pub fn build_absaf(af: Af, ground_truths: &[ArgSet], per_truth: usize, phi: f64, seed: u64) -> Result<Generated> {
    if per_truth == 0 {
        return Err(Error::param("per_truth must be positive"));
    }
    let quotas = vec![per_truth; ground_truths.len()];
    build_absaf_with_quotas(af, ground_truths, &quotas, phi, seed)
}

/// `quotas[t]` voters around ground truth `t`; voter `v` draws from child
/// stream `v`.
pub fn build_absaf_with_quotas(
    af: Af,
    ground_truths: &[ArgSet],
    quotas: &[usize],
    phi: f64,
    seed: u64,
) -> Result<Generated> {
    if ground_truths.is_empty() || quotas.len() != ground_truths.len() {
        return Err(Error::param("need one positive quota per ground truth"));
    }
    if quotas.iter().sum::<usize>() == 0 {
        return Err(Error::param("electorate would be empty"));
    }
    let mut ballots = Vec::new();
    let mut truth_of_voter = Vec::new();
    for (t, (truth, &q)) in ground_truths.iter().zip(quotas).enumerate() {
        if truth.universe() != af.len() {
            return Err(Error::param("ground truth is over a different argument set"));
        }
        for _ in 0..q {
            let mut rng = child_rng(seed, truth_of_voter.len() as u64);
            ballots.push(Ballot::single(sample_ballot_with(truth, phi, &mut rng)?));
            truth_of_voter.push(t);
        }
    }
    Ok(Generated { absaf: Absaf::new(af, ballots)?, ground_truths: ground_truths.to_vec(), truth_of_voter })
}

/// Splits `total` voters over `g` truths evenly; the last truth takes the
/// remainder.
pub fn padded_quotas(total: usize, g: usize) -> Vec<usize> {
    if g == 0 {
        return Vec::new();
    }
    let base = total / g;
    let mut q = vec![base; g];
    q[g - 1] += total - base * g;
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, p: f64, att: usize, seed: u64) -> GenParams {
        GenParams { n_args: n, p_cycle: p, attachment: att, seed }
    }

    #[test]
    fn smallest_case() {
        let af = gen_af(&params(2, 0.0, 1, 7)).unwrap();
        assert_eq!(af.attacks(), &[(1, 0)]);
        assert!(af.is_acyclic());
    }

    #[test]
    fn acyclic_without_cycles_and_two_cycles_with() {
        for seed in 0..30 {
            let af = gen_af(&params(25, 0.0, 2, seed)).unwrap();
            assert!(af.is_acyclic());
            let af = gen_af(&params(25, 1.0, 2, seed)).unwrap();
            for a in 0..af.len() {
                if !af.attackers(a).is_empty() {
                    assert!(af.targets(a).intersection_len(af.attackers(a)) >= 1, "a{a} not on a 2-cycle");
                }
            }
        }
    }

    #[test]
    fn deterministic() {
        let p = params(30, 0.3, 2, 42);
        assert_eq!(gen_af(&p).unwrap().attacks(), gen_af(&p).unwrap().attacks());
        let other = gen_af(&params(30, 0.3, 2, 43)).unwrap();
        assert_ne!(gen_af(&p).unwrap().attacks(), other.attacks());
    }

    #[test]
    fn invalid_params() {
        assert!(gen_af(&params(1, 0.0, 1, 0)).is_err());
        assert!(gen_af(&params(5, 0.0, 5, 0)).is_err());
        assert!(gen_af(&params(5, 1.5, 1, 0)).is_err());
    }

    #[test]
    fn gen_until_filters_and_fails() {
        let p = params(20, 0.5, 1, 3);
        let (_, prf) = gen_until(&p, EnumLimits::default(), 500, |_, prf| prf.len() >= 4).unwrap();
        assert!(prf.len() >= 4);
        assert!(matches!(gen_until(&p, EnumLimits::default(), 5, |_, _| false), Err(Error::Generation(_))));
    }

    #[test]
    fn phi_zero_stays_inside_truth() {
        let truth = ArgSet::from_indices(8, [1, 4, 6]);
        let mut rng = child_rng(9, 0);
        for _ in 0..2000 {
            let s = sample_ballot_with(&truth, 0.0, &mut rng).unwrap();
            assert!(!s.is_empty() && s.is_subset(&truth));
            assert_eq!(distance(&truth, &s), 0);
        }
        assert!(sample_ballot_with(&ArgSet::empty(3), 0.5, &mut rng).is_err());
        assert!(sample_ballot_with(&truth, 1.5, &mut rng).is_err());
    }

    #[test]
    fn build_sizes_and_determinism() {
        let (af, prf) = gen_until(&params(20, 0.5, 1, 11), EnumLimits::default(), 500, |_, p| p.len() >= 5).unwrap();
        let truths: Vec<ArgSet> = prf[..5].to_vec();
        let a = build_absaf(af.clone(), &truths, 20, 0.4, 5).unwrap();
        assert_eq!(a.absaf.n(), 100);
        assert_eq!(a.truth_of_voter.len(), 100);
        let b = build_absaf(af.clone(), &truths, 20, 0.4, 5).unwrap();
        assert_eq!(a.absaf.ballots(), b.absaf.ballots());
        assert!(build_absaf(af, &truths, 0, 0.4, 5).is_err());
        assert_eq!(padded_quotas(100, 3), vec![33, 33, 34]);
    }

    #[test]
    fn ground_truth_sampling() {
        let af = Af::new((0..6).map(|i| format!("a{i}")), [(0, 1), (1, 0), (2, 3), (3, 2), (4, 5), (5, 4)]).unwrap();
        let all = sample_ground_truths(&af, 8, 1).unwrap();
        assert_eq!(all, af::preferred_extensions(&af).unwrap());
        assert_eq!(sample_ground_truths(&af, 3, 5).unwrap(), sample_ground_truths(&af, 3, 5).unwrap());
        assert!(sample_ground_truths(&af, 9, 1).is_err());
    }

    /// Marginals of the factorized sampler against normalized weights over
    /// all nonempty subsets.
    #[test]
    fn marginals_match_normalized_weights() {
        for (n, phi) in [(4usize, 0.3f64), (5, 0.7), (6, 0.5)] {
            let truth = ArgSet::from_indices(n, [0, 2]);
            let mut z = 0.0;
            let mut incl = vec![0.0; n];
            for mask in 1u32..1 << n {
                let s = ArgSet::from_indices(n, (0..n).filter(|i| mask >> i & 1 == 1));
                let w = phi.powi(distance(&truth, &s) as i32);
                z += w;
                for a in &s {
                    incl[a] += w;
                }
            }
            let draws = 40_000;
            let mut rng = child_rng(77, n as u64);
            let mut counts = vec![0usize; n];
            for _ in 0..draws {
                for a in &sample_ballot_with(&truth, phi, &mut rng).unwrap() {
                    counts[a] += 1;
                }
            }
            for a in 0..n {
                let expected = incl[a] / z;
                let got = counts[a] as f64 / draws as f64;
                assert!((expected - got).abs() < 0.015, "n={n} phi={phi} a={a}: {expected} vs {got}");
            }
        }
    }
}
