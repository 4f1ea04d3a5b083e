//! Learning unknown thresholds from snapshots of a system's dynamics.
//!
//! The learner sees the network, the master-function kind and the thresholds
//! of every vertex outside the unknown set. For each unknown vertex it picks,
//! per layer, the smallest threshold consistent with every example where the
//! vertex stayed off (OR), or the largest consistent with every example where
//! it turned on (AND).

mod bounds;
mod sampling;
mod training;

pub use bounds::{sample_size_generic, sample_size_pac, sample_size_pmac};
pub use sampling::{BernoulliDistribution, ConfigSampler, TrajectoryReplay};
pub use training::{load_training_set, make_training_set, TrainingSet};

use std::sync::Arc;

use rand::Rng;

use crate::configuration::Configuration;
use crate::dynamics::{score, MasterKind, ThresholdSystem};
use crate::error::{invalid, Result};
use crate::graph::MultilayerNetwork;
use crate::rng::SeededRng;

/// Number of evaluation samples used when none is given.
pub const DEFAULT_EVAL_SAMPLES: usize = 10_000;

/// What the learner is told about the target system.
#[derive(Debug, Clone)]
pub struct LearningProblem {
    net: Arc<MultilayerNetwork>,
    master: MasterKind,
    /// Sorted, distinct.
    unknown: Vec<usize>,
    is_unknown: Vec<bool>,
    /// Layer-major; `None` exactly at unknown vertices.
    known: Vec<Option<u32>>,
}

impl LearningProblem {
    /// `known_table` is a full layer-major threshold table; entries of
    /// unknown vertices are discarded unread.
    pub fn new(
        net: Arc<MultilayerNetwork>,
        master: MasterKind,
        unknown: &[usize],
        known_table: &[u32],
    ) -> Result<Self> {
        let n = net.n();
        if known_table.len() != n * net.k() {
            return Err(invalid("known threshold table must have n·k entries"));
        }
        let mut is_unknown = vec![false; n];
        for &v in unknown {
            if v >= n {
                return Err(invalid(format!("unknown vertex {v} out of range (n = {n})")));
            }
            is_unknown[v] = true;
        }
        let unknown: Vec<usize> = (0..n).filter(|&v| is_unknown[v]).collect();
        let mut known = Vec::with_capacity(known_table.len());
        for (idx, &t) in known_table.iter().enumerate() {
            let (layer, v) = (idx / n, idx % n);
            if is_unknown[v] {
                known.push(None);
            } else {
                let cap = net.degree(v, layer) as u32 + 2;
                if t > cap {
                    return Err(invalid(format!(
                        "known threshold {t} of vertex {v} on layer {layer} exceeds degree + 2"
                    )));
                }
                known.push(Some(t));
            }
        }
        Ok(LearningProblem {
            net,
            master,
            unknown,
            is_unknown,
            known,
        })
    }

    /// The problem of recovering `target`'s thresholds on `unknown`.
    pub fn from_target(target: &ThresholdSystem, unknown: &[usize]) -> Result<Self> {
        Self::new(target.net().clone(), target.master(), unknown, target.table())
    }

    pub fn net(&self) -> &Arc<MultilayerNetwork> {
        &self.net
    }

    pub fn master(&self) -> MasterKind {
        self.master
    }

    pub fn unknown(&self) -> &[usize] {
        &self.unknown
    }

    pub fn is_unknown(&self, v: usize) -> bool {
        self.is_unknown[v]
    }

    pub fn sigma(&self) -> usize {
        self.unknown.len()
    }

    pub fn known_tau(&self, v: usize, layer: usize) -> Option<u32> {
        self.known[layer * self.net.n() + v]
    }

    /// A hypothesis: known thresholds as given, unknown ones from `fill`.
    pub fn complete(&self, mut fill: impl FnMut(usize, usize) -> u32) -> Result<ThresholdSystem> {
        ThresholdSystem::from_fn(self.net.clone(), self.master, |v, i| {
            self.known_tau(v, i).unwrap_or_else(|| fill(v, i))
        })
    }
}

/// The consistent learner.
///
/// OR: `τ(v, i) = 1 + max { score_i(C, v) : (C, C') ∈ T, C'(v) = 0 }`, or 0
/// when `v` is on in every example. AND: `τ(v, i) = min { score_i(C, v) :
/// C'(v) = 1 }`, or `deg_i(v) + 2` when `v` is off in every example.
/// Contradictory examples are not repaired; [`empirical_risk`] will report them.
pub fn pac_learn(problem: &LearningProblem, training: &TrainingSet) -> Result<ThresholdSystem> {
    let net = problem.net();
    let (n, k) = (net.n(), net.k());
    for (j, (c, succ)) in training.pairs().iter().enumerate() {
        if c.len() != n || succ.len() != n {
            return Err(invalid(format!(
                "training pair {j} has lengths ({}, {}), expected n = {n}",
                c.len(),
                succ.len()
            )));
        }
    }
    let mut learned = vec![0u32; n * k];
    for &v in problem.unknown() {
        for i in 0..k {
            let relevant = training
                .pairs()
                .iter()
                .filter(|(_, succ)| succ.get(v) == (problem.master() == MasterKind::And))
                .map(|(c, _)| score(net, c, v, i));
            learned[i * n + v] = match problem.master() {
                MasterKind::Or => relevant.max().map_or(0, |s| s + 1),
                MasterKind::And => relevant.min().unwrap_or(net.degree(v, i) as u32 + 2),
            };
        }
    }
    problem.complete(|v, i| learned[i * n + v])
}

/// Number of training pairs the hypothesis gets wrong.
pub fn empirical_risk(h: &ThresholdSystem, training: &TrainingSet) -> usize {
    training
        .pairs()
        .iter()
        .filter(|(c, succ)| h.successor(c) != *succ)
        .count()
}

/// Vertices whose thresholds differ between two systems on the same network.
/// Only these can ever have different next states.
fn differing_vertices(h: &ThresholdSystem, target: &ThresholdSystem) -> Option<Vec<usize>> {
    let same_net = Arc::ptr_eq(h.net(), target.net()) || h.net() == target.net();
    if !same_net || h.master() != target.master() {
        return None;
    }
    Some(
        (0..h.n())
            .filter(|&v| (0..h.k()).any(|i| h.tau(v, i) != target.tau(v, i)))
            .collect(),
    )
}

fn check_comparable(h: &ThresholdSystem, target: &ThresholdSystem) -> Result<()> {
    if h.n() != target.n() {
        return Err(invalid("hypothesis and target have different vertex counts"));
    }
    Ok(())
}

/// Fraction of `samples` draws with `h(C) ≠ target(C)`.
pub fn estimate_true_error(
    h: &ThresholdSystem,
    target: &ThresholdSystem,
    sampler: &dyn ConfigSampler,
    samples: usize,
    rng: &mut SeededRng,
) -> Result<f64> {
    check_comparable(h, target)?;
    if samples == 0 {
        return Err(invalid("need at least one evaluation sample"));
    }
    let n = h.n();
    let candidates = differing_vertices(h, target);
    let mut wrong = 0usize;
    for _ in 0..samples {
        let c = sampler.sample(n, rng);
        let differs = match &candidates {
            Some(vs) => vs.iter().any(|&v| h.next_state(&c, v) != target.next_state(&c, v)),
            None => h.successor(&c) != target.successor(&c),
        };
        wrong += differs as usize;
    }
    Ok(wrong as f64 / samples as f64)
}

/// Number of vertices of `unknown` whose states differ between `predicted` and `truth`.
pub fn pmac_mismatch(predicted: &Configuration, truth: &Configuration, unknown: &[usize]) -> usize {
    assert_eq!(predicted.len(), truth.len(), "configurations must have equal length");
    unknown
        .iter()
        .filter(|&&v| predicted.get(v) != truth.get(v))
        .count()
}

/// Fraction of draws where `h` mispredicts at least `beta·σ` vertices of `unknown`.
pub fn estimate_pmac_error(
    h: &ThresholdSystem,
    target: &ThresholdSystem,
    unknown: &[usize],
    sampler: &dyn ConfigSampler,
    beta: f64,
    samples: usize,
    rng: &mut SeededRng,
) -> Result<f64> {
    check_comparable(h, target)?;
    if !(beta > 0.0 && beta < 1.0) {
        return Err(invalid(format!("beta = {beta} must lie in (0, 1)")));
    }
    if samples == 0 {
        return Err(invalid("need at least one evaluation sample"));
    }
    let n = h.n();
    let cutoff = beta * unknown.len() as f64;
    let watch: Vec<usize> = match differing_vertices(h, target) {
        Some(vs) => {
            let mut is_unknown = vec![false; n];
            unknown.iter().for_each(|&v| is_unknown[v] = true);
            vs.into_iter().filter(|&v| is_unknown[v]).collect()
        }
        None => unknown.to_vec(),
    };
    let mut bad = 0usize;
    for _ in 0..samples {
        let c = sampler.sample(n, rng);
        let mismatches = watch
            .iter()
            .filter(|&&v| h.next_state(&c, v) != target.next_state(&c, v))
            .count();
        bad += (mismatches as f64 >= cutoff) as usize;
    }
    Ok(bad as f64 / samples as f64)
}

/// A target system with every threshold drawn uniformly from `[0, deg + 2]`.
pub fn random_system(
    net: Arc<MultilayerNetwork>,
    master: MasterKind,
    rng: &mut SeededRng,
) -> ThresholdSystem {
    let caps: Vec<u32> = (0..net.k())
        .flat_map(|i| {
            let net = &net;
            (0..net.n()).map(move |v| net.degree(v, i) as u32 + 2)
        })
        .collect();
    let tau = caps.into_iter().map(|cap| rng.gen_range(0..=cap)).collect();
    ThresholdSystem::new(net, master, tau).expect("drawn thresholds are in range")
}
