//! Storage cluster simulation: one coordinate per node, random or explicit
//! node failures, peeling repair, and degraded reads through disjoint repair
//! groups.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evalcode::{EvaluationCode, ReceivedWord};
use crate::gf::Elem;
use crate::recovery::{recover, CertifiedStructure};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum FailureModel {
    /// Each node fails independently with probability `p`.
    Iid { p: f64 },
    /// The same nodes fail in every trial.
    Explicit { nodes: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterModel {
    pub nodes: usize,
    pub failures: FailureModel,
    pub seed: u64,
}

impl ClusterModel {
    pub fn iid(nodes: usize, p: f64, seed: u64) -> Result<ClusterModel> {
        let m = ClusterModel { nodes, failures: FailureModel::Iid { p }, seed };
        m.validate()?;
        Ok(m)
    }

    pub fn explicit(nodes: usize, failed: Vec<usize>) -> Result<ClusterModel> {
        let m = ClusterModel { nodes, failures: FailureModel::Explicit { nodes: failed }, seed: 0 };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match &self.failures {
            FailureModel::Iid { p } if !(0.0..=1.0).contains(p) => {
                Err(Error::invalid(format!("failure probability {p} is outside [0, 1]")))
            }
            FailureModel::Explicit { nodes } => match nodes.iter().find(|&&i| i >= self.nodes) {
                Some(&index) => Err(Error::IndexOutOfRange { index, n: self.nodes }),
                None => Ok(()),
            },
            _ => Ok(()),
        }
    }

    /// Failed nodes of trial `i`, drawn from a ChaCha8 stream seeded with
    /// `seed ^ i`. Two seeds that differ only in bits below the trial count
    /// therefore run the same set of trials in a different order.
    pub fn sample(&self, trial: u64) -> Vec<usize> {
        match &self.failures {
            FailureModel::Explicit { nodes } => {
                let mut v = nodes.clone();
                v.sort_unstable();
                v.dedup();
                v
            }
            FailureModel::Iid { p } => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ trial);
                (0..self.nodes).filter(|_| rng.gen_bool(*p)).collect()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimReport {
    pub trials: u64,
    pub failed_nodes: u64,
    pub repaired: u64,
    /// repaired / failed; `None` when nothing failed.
    pub locally_repaired_fraction: Option<f64>,
    /// Symbols read over all repairs.
    pub bandwidth_total: u64,
    pub mean_bandwidth: Option<f64>,
    /// Largest number of symbols read by one repair.
    pub max_bandwidth: usize,
    /// Number of (trial, coordinate) pairs by count of disjoint repair groups
    /// with every helper alive.
    pub parallel_read_capacity: BTreeMap<usize, u64>,
    pub residual: u64,
    pub residual_rate: Option<f64>,
    pub trials_with_residual: u64,
}

#[derive(Default)]
struct Tally {
    failed: u64,
    repaired: u64,
    bandwidth: u64,
    max_bw: usize,
    capacity: BTreeMap<usize, u64>,
    residual: u64,
    trials_with_residual: u64,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.failed += other.failed;
        self.repaired += other.repaired;
        self.bandwidth += other.bandwidth;
        self.max_bw = self.max_bw.max(other.max_bw);
        for (k, v) in other.capacity {
            *self.capacity.entry(k).or_insert(0) += v;
        }
        self.residual += other.residual;
        self.trials_with_residual += other.trials_with_residual;
        self
    }
}

fn ratio(a: u64, b: u64) -> Option<f64> {
    (b > 0).then(|| a as f64 / b as f64)
}

/// Runs `trials` independent failure trials. Repairs run on the all-zero
/// codeword, since which coordinates peel depends only on the erasure
/// pattern; repaired values are checked to be zero.
pub fn simulate(code: &EvaluationCode, certified: &CertifiedStructure, model: &ClusterModel, trials: u64) -> Result<SimReport> {
    let structure = certified.structure();
    if structure.len() != code.len() {
        return Err(Error::WordLength { got: structure.len(), expected: code.len() });
    }
    if model.nodes != code.len() {
        return Err(Error::invalid(format!("cluster has {} nodes, code length is {}", model.nodes, code.len())));
    }
    model.validate()?;
    let field = code.field();
    let n = code.len();
    let tally = (0..trials)
        .into_par_iter()
        .map(|i| -> Result<Tally> {
            let failed = model.sample(i);
            let mut alive = vec![true; n];
            for &j in &failed {
                alive[j] = false;
            }
            let mut t = Tally { failed: failed.len() as u64, ..Tally::default() };
            for c in 0..n {
                let cap = structure.disjoint_groups_where(c, |g| g.support.iter().all(|&j| alive[j])).len();
                *t.capacity.entry(cap).or_insert(0) += 1;
            }
            if failed.is_empty() {
                return Ok(t);
            }
            let mut word = ReceivedWord(vec![Some(Elem::ZERO); n]);
            for &j in &failed {
                word.0[j] = None;
            }
            let (out, rep) = recover(field, &word, structure)?;
            debug_assert!(out.0.iter().flatten().all(|v| v.is_zero()));
            t.repaired = rep.repaired.len() as u64;
            t.bandwidth = rep.bandwidth as u64;
            t.max_bw = rep.repairs.iter().map(|r| r.support.len()).max().unwrap_or(0);
            t.residual = rep.residual.len() as u64;
            t.trials_with_residual = u64::from(!rep.residual.is_empty());
            Ok(t)
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
    Ok(SimReport {
        trials,
        failed_nodes: tally.failed,
        repaired: tally.repaired,
        locally_repaired_fraction: ratio(tally.repaired, tally.failed),
        bandwidth_total: tally.bandwidth,
        mean_bandwidth: ratio(tally.bandwidth, tally.repaired),
        max_bandwidth: tally.max_bw,
        parallel_read_capacity: tally.capacity,
        residual: tally.residual,
        residual_rate: ratio(tally.residual, tally.failed),
        trials_with_residual: tally.trials_with_residual,
    })
}

/// Readers of coordinate `hot` served at once: one direct read if the node
/// is alive, plus one per pairwise-disjoint repair group whose helpers are
/// all alive, capped at `readers`.
pub fn degraded_read(certified: &CertifiedStructure, hot: usize, readers: usize, failed: &[usize]) -> Result<usize> {
    let s = certified.structure();
    let n = s.len();
    if let Some(&index) = failed.iter().chain(std::iter::once(&hot)).find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange { index, n });
    }
    let mut alive = vec![true; n];
    for &j in failed {
        alive[j] = false;
    }
    let direct = usize::from(alive[hot]);
    let groups = s.disjoint_groups_where(hot, |g| g.support.iter().all(|&j| alive[j])).len();
    Ok(readers.min(direct + groups))
}
