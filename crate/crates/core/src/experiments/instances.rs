//! AF pools filtered by extension count, and the electorates built on them.

use rand::{Rng, RngCore};
use rayon::prelude::*;
use serde::Serialize;

use super::config::ExperimentConfig;
use crate::absaf::Election;
use crate::af::{self, Af, EnumLimits};
use crate::bitset::ArgSet;
use crate::error::{Error, Result};
use crate::generators::{self, child_rng, GenParams, Generated};

// Seed domains, so that pools, electorates and baselines never share streams.
pub(crate) const DOMAIN_POOL: u64 = 0x504f_4f4c;
pub(crate) const DOMAIN_PERF_POOL: u64 = 0x5045_5246;
pub(crate) const DOMAIN_ELECTORATE: u64 = 0x454c_4543;
pub(crate) const DOMAIN_PERF_ELECTORATE: u64 = 0x5045_4c45;
/// Streams at and above this index are never used by voters.
pub(crate) const AUX_STREAM: u64 = generators::TRUTH_STREAM;

pub fn derive_seed(base: u64, domain: u64, index: u64) -> u64 {
    child_rng(base ^ domain.rotate_left(17), index).next_u64()
}

#[derive(Debug, Clone, Serialize)]
pub struct PoolEntry {
    pub id: usize,
    #[serde(flatten)]
    pub params: GenParams,
    pub extensions: usize,
    #[serde(skip)]
    pub af: Af,
    #[serde(skip)]
    pub prf: Vec<ArgSet>,
}

/// Draws candidates round-robin over argument counts (`n_args`) and cycle
/// probabilities and keeps the first `count` whose extension count lies in
/// `window`. Candidates are checked in parallel batches but kept in
/// candidate order.
#[allow(clippy::too_many_arguments)]
pub fn select_afs(
    seed: u64,
    domain: u64,
    n_args: (usize, usize),
    p_cycle: &[f64],
    attachment: usize,
    window: (usize, usize),
    count: usize,
    max_tries: usize,
) -> Result<Vec<PoolEntry>> {
    let span = n_args.1 - n_args.0 + 1;
    let limits = EnumLimits { max_extensions: Some(window.1), ..EnumLimits::default() };
    let mut out = Vec::with_capacity(count);
    let batch = 512;
    let mut next = 0usize;
    while out.len() < count && next < max_tries {
        let end = (next + batch).min(max_tries);
        let found: Vec<Option<PoolEntry>> = (next..end)
            .into_par_iter()
            .map(|c| -> Result<Option<PoolEntry>> {
                let n = n_args.0 + c % span;
                let params = GenParams {
                    n_args: n,
                    p_cycle: p_cycle[(c / span) % p_cycle.len()],
                    attachment: attachment.min(n - 1),
                    seed: derive_seed(seed, domain, c as u64),
                };
                let af = generators::gen_af(&params)?;
                Ok(match af::preferred_extensions_with(&af, limits) {
                    Ok(prf) if (window.0..=window.1).contains(&prf.len()) => {
                        Some(PoolEntry { id: 0, params, extensions: prf.len(), af, prf })
                    }
                    _ => None,
                })
            })
            .collect::<Result<_>>()?;
        for mut e in found.into_iter().flatten() {
            if out.len() == count {
                break;
            }
            e.id = out.len();
            out.push(e);
        }
        next = end;
    }
    Ok(out)
}

pub fn main_pool(cfg: &ExperimentConfig) -> Result<Vec<PoolEntry>> {
    let pool = select_afs(
        cfg.seed,
        DOMAIN_POOL,
        (cfg.n_args_min, cfg.n_args_max),
        &cfg.p_cycle,
        cfg.attachment,
        (cfg.extensions_min, cfg.extensions_max),
        cfg.afs,
        cfg.max_tries,
    )?;
    if pool.len() < cfg.afs {
        return Err(Error::Generation(format!(
            "found {} of {} AFs with {}..={} preferred extensions in {} attempts",
            pool.len(),
            cfg.afs,
            cfg.extensions_min,
            cfg.extensions_max,
            cfg.max_tries
        )));
    }
    Ok(pool)
}

/// One electorate: an AF from the pool, a dispersion value, and ballots
/// around ground truths drawn for this electorate.
#[derive(Debug, Clone)]
pub struct Instance {
    pub id: usize,
    pub af_id: usize,
    pub phi: f64,
    pub seed: u64,
    /// Indices of the ground truths in `election.prf()`.
    pub truths: Vec<usize>,
    pub election: Election,
    pub truth_of_voter: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceInfo {
    pub id: usize,
    pub af: usize,
    pub phi: f64,
    pub seed: u64,
    pub truths: Vec<usize>,
    pub voters: usize,
}

impl Instance {
    pub fn info(&self) -> InstanceInfo {
        InstanceInfo {
            id: self.id,
            af: self.af_id,
            phi: self.phi,
            seed: self.seed,
            truths: self.truths.clone(),
            voters: self.election.n(),
        }
    }
}

/// Builds an electorate of `quotas[t]` voters around each of `g` truths.
pub fn build_instance(
    id: usize,
    entry: &PoolEntry,
    phi: f64,
    seed: u64,
    g: usize,
    quotas: impl FnOnce(usize) -> Vec<usize>,
) -> Result<Instance> {
    let truths = generators::choose_ground_truths(entry.prf.len(), g, &mut child_rng(seed, AUX_STREAM))?;
    let truth_sets: Vec<ArgSet> = truths.iter().map(|&j| entry.prf[j].clone()).collect();
    let Generated { absaf, truth_of_voter, .. } =
        generators::build_absaf_with_quotas(entry.af.clone(), &truth_sets, &quotas(g), phi, seed)?;
    let election = Election::with_extensions(absaf, entry.prf.clone());
    Ok(Instance { id, af_id: entry.id, phi, seed, truths, election, truth_of_voter })
}

/// Every (AF, phi, repeat) electorate, numbered in that order.
pub fn main_instances(cfg: &ExperimentConfig, pool: &[PoolEntry]) -> Result<Vec<Instance>> {
    let mut specs = Vec::new();
    for entry in pool {
        for &phi in &cfg.phi {
            for _ in 0..cfg.repeats {
                specs.push((specs.len(), entry, phi));
            }
        }
    }
    specs
        .into_par_iter()
        .map(|(id, entry, phi)| {
            let seed = derive_seed(cfg.seed, DOMAIN_ELECTORATE, id as u64);
            build_instance(id, entry, phi, seed, cfg.truths, |g| vec![cfg.per_truth; g])
        })
        .collect()
}

/// `k` distinct extension indices drawn uniformly, ascending.
pub fn random_extensions(m: usize, k: usize, seed: u64, stream: u64) -> Vec<usize> {
    let mut rng = child_rng(seed, AUX_STREAM + 1 + stream);
    let mut idx = rand::seq::index::sample(&mut rng, m, k.min(m)).into_vec();
    idx.sort_unstable();
    idx
}

/// Uniform pick from a nonempty slice.
pub fn pick<T: Copy>(items: &[T], seed: u64, stream: u64) -> T {
    let mut rng = child_rng(seed, AUX_STREAM + (1 << 30) + stream);
    items[rng.random_range(0..items.len())]
}
