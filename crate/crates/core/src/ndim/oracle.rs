//! Exact shattering decisions for small instances.
//!
//! A hypothesis picks each unknown vertex's thresholds independently, and a
//! vertex's next state depends only on its own thresholds and scores. So `R`
//! is shattered iff every unknown vertex `v` can be given a set `S_v ⊆ R` of
//! entries it contests (its state is free on `S_v` and fixed elsewhere) such
//! that every labeling of `S_v` is realizable, and the sets `S_v` cover `R`.
//!
//! Under OR, a labeling is realizable iff each 1-labelled entry beats every
//! 0-labelled one in some layer. The hardest labelings of `S` are "one entry
//! of `S` on, the rest off" and "all of `S` off"; the fixed entries are best
//! split by starting with all of them at 1 and demoting the ones that cannot
//! stay there until nothing changes. AND reduces to OR by scoring
//! `deg + 1 − Γ` and flipping labels.

use crate::configuration::Configuration;
use crate::dynamics::{score_vector, MasterKind};
use crate::error::{invalid, Error, Result};
use crate::learner::LearningProblem;

use super::{check_entries, AssociatedPair, ShatterCandidate};

/// Size limits for the exhaustive procedures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_entries: usize,
    pub max_vertices: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_entries: 12,
            max_vertices: 16,
        }
    }
}

/// Masks are `u32` and the tables have `2^|R|` slots.
const HARD_ENTRY_LIMIT: usize = 24;

fn check_guard(problem: &LearningProblem, r: &[Configuration], limits: OracleLimits) -> Result<()> {
    if limits.max_entries > HARD_ENTRY_LIMIT {
        return Err(invalid(format!(
            "max_entries may be at most {HARD_ENTRY_LIMIT}"
        )));
    }
    let n = problem.net().n();
    if r.len() > limits.max_entries {
        return Err(Error::GuardExceeded(format!(
            "{} configurations, limit {}",
            r.len(),
            limits.max_entries
        )));
    }
    if n > limits.max_vertices {
        return Err(Error::GuardExceeded(format!(
            "{n} vertices, limit {}",
            limits.max_vertices
        )));
    }
    if r.iter().any(|c| c.len() != n) {
        return Err(invalid(format!("candidate configurations must have length {n}")));
    }
    check_entries(r)
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&c| mask & (1 << c) != 0)
}

/// One unknown vertex's scores on every entry, oriented so that the OR rule applies.
struct Oriented {
    /// `scores[entry][layer]`
    scores: Vec<Vec<i64>>,
    k: usize,
}

impl Oriented {
    fn new(problem: &LearningProblem, r: &[Configuration], v: usize) -> Self {
        let net = problem.net();
        let k = net.k();
        let scores = r
            .iter()
            .map(|c| {
                score_vector(net, c, v)
                    .into_iter()
                    .enumerate()
                    .map(|(i, s)| match problem.master() {
                        MasterKind::Or => s as i64,
                        MasterKind::And => net.degree(v, i) as i64 + 1 - s as i64,
                    })
                    .collect()
            })
            .collect();
        Oriented { scores, k }
    }

    fn layer_max(&self, mask: u32) -> Vec<i64> {
        let mut out = vec![-1; self.k];
        for c in bits(mask) {
            for (m, &s) in out.iter_mut().zip(&self.scores[c]) {
                *m = (*m).max(s);
            }
        }
        out
    }

    fn beats(&self, c: usize, maxes: &[i64]) -> bool {
        self.scores[c].iter().zip(maxes).any(|(s, m)| s > m)
    }

    /// For contested set `s`, the smallest set of fixed entries that must sit
    /// at 0, or `None` when `s` is not admissible.
    fn fixed_zeros(&self, s: u32, all: u32) -> Option<u32> {
        let mut zeros = 0u32;
        loop {
            let maxes = self.layer_max(s | zeros);
            let failing = bits(all & !s & !zeros)
                .filter(|&c| !self.beats(c, &maxes))
                .fold(0u32, |acc, c| acc | 1 << c);
            if failing == 0 {
                break;
            }
            zeros |= failing;
        }
        bits(s)
            .all(|c| self.beats(c, &self.layer_max((s & !(1 << c)) | zeros)))
            .then_some(zeros)
    }

    /// Inclusion-maximal admissible contested sets. Admissibility is closed
    /// under taking subsets, and every subset of a mask is numerically smaller.
    fn maximal_sets(&self, m: usize) -> Vec<u32> {
        let all = if m == 0 { 0 } else { u32::MAX >> (32 - m) };
        let mut ok = vec![false; 1 << m];
        ok[0] = true;
        for t in 1..(1u32 << m) {
            ok[t as usize] = bits(t).all(|d| ok[(t & !(1 << d)) as usize])
                && self.fixed_zeros(t, all).is_some();
        }
        (0..(1u32 << m))
            .filter(|&t| ok[t as usize] && (0..m).all(|c| t & (1 << c) != 0 || !ok[(t | 1 << c) as usize]))
            .collect()
    }
}

/// Exact shattering decision with the default [`OracleLimits`].
pub fn shatter_oracle(problem: &LearningProblem, r: &[Configuration]) -> Result<bool> {
    shatter_oracle_with(problem, r, OracleLimits::default())
}

pub fn shatter_oracle_with(problem: &LearningProblem, r: &[Configuration], limits: OracleLimits) -> Result<bool> {
    Ok(shatter_witness(problem, r, limits)?.is_some())
}

/// Forced next state of a known vertex.
fn forced_state(problem: &LearningProblem, c: &Configuration, v: usize) -> bool {
    let scores = score_vector(problem.net(), c, v);
    let mut fires = scores
        .iter()
        .enumerate()
        .map(|(i, &s)| s >= problem.known_tau(v, i).expect("known vertex"));
    match problem.master() {
        MasterKind::Or => fires.any(|b| b),
        MasterKind::And => fires.all(|b| b),
    }
}

/// Associated configurations shattering `r`, or `None` when `r` is not shattered.
pub fn shatter_witness(
    problem: &LearningProblem,
    r: &[Configuration],
    limits: OracleLimits,
) -> Result<Option<ShatterCandidate>> {
    check_guard(problem, r, limits)?;
    let m = r.len();
    let all: u32 = if m == 0 { 0 } else { u32::MAX >> (32 - m) };
    let unknown = problem.unknown();
    let views: Vec<Oriented> = unknown.iter().map(|&v| Oriented::new(problem, r, v)).collect();

    // parent[j][mask]: how `mask` was first reached after vertex j chose its set.
    let mut reach = vec![false; 1 << m];
    reach[0] = true;
    let mut parent: Vec<Vec<Option<(u32, u32)>>> = Vec::with_capacity(unknown.len());
    for view in &views {
        let sets = view.maximal_sets(m);
        let mut step: Vec<Option<(u32, u32)>> = vec![None; 1 << m];
        for prev in (0..(1u32 << m)).filter(|&p| reach[p as usize]) {
            for &s in sets.iter().chain(std::iter::once(&0)) {
                let next = prev | s;
                if step[next as usize].is_none() {
                    step[next as usize] = Some((prev, s));
                }
            }
        }
        for (mask, p) in step.iter().enumerate() {
            reach[mask] |= p.is_some();
        }
        parent.push(step);
    }
    if !reach[all as usize] {
        return Ok(None);
    }

    let mut chosen = vec![0u32; unknown.len()];
    let mut mask = all;
    for j in (0..unknown.len()).rev() {
        let (prev, s) = parent[j][mask as usize].expect("reachable mask has a parent");
        // Only the entries this vertex newly covers need contesting.
        chosen[j] = s & !prev;
        mask = prev;
    }
    debug_assert_eq!(mask, 0);

    let n = problem.net().n();
    let mut pairs: Vec<AssociatedPair> = r
        .iter()
        .map(|c| {
            let forced = Configuration::from_bits((0..n).map(|v| {
                !problem.is_unknown(v) && forced_state(problem, c, v)
            }));
            AssociatedPair {
                a: forced.clone(),
                b: forced,
            }
        })
        .collect();
    for (j, &v) in unknown.iter().enumerate() {
        let s = chosen[j];
        let zeros = views[j].fixed_zeros(s, all).expect("subset of an admissible set");
        for (c, pair) in pairs.iter_mut().enumerate() {
            if s & (1 << c) != 0 {
                pair.a.set(v, true);
                pair.b.set(v, false);
            } else {
                let oriented = zeros & (1 << c) == 0;
                let value = match problem.master() {
                    MasterKind::Or => oriented,
                    MasterKind::And => !oriented,
                };
                pair.a.set(v, value);
                pair.b.set(v, value);
            }
        }
    }
    ShatterCandidate::new(r.to_vec(), Some(pairs)).map(Some)
}

/// Whether some thresholds for `v` produce exactly `labels` on `r`.
fn realizable(problem: &LearningProblem, scores: &[Vec<u32>], v: usize, labels: &[bool]) -> bool {
    let net = problem.net();
    let k = net.k();
    match problem.master() {
        MasterKind::Or => {
            let tau: Vec<u32> = (0..k)
                .map(|i| {
                    scores
                        .iter()
                        .zip(labels)
                        .filter(|(_, &l)| !l)
                        .map(|(s, _)| s[i] + 1)
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            scores
                .iter()
                .zip(labels)
                .filter(|(_, &l)| l)
                .all(|(s, _)| (0..k).any(|i| s[i] >= tau[i]))
        }
        MasterKind::And => {
            let tau: Vec<u32> = (0..k)
                .map(|i| {
                    scores
                        .iter()
                        .zip(labels)
                        .filter(|(_, &l)| l)
                        .map(|(s, _)| s[i])
                        .min()
                        .unwrap_or(net.degree(v, i) as u32 + 2)
                })
                .collect();
            scores
                .iter()
                .zip(labels)
                .filter(|(_, &l)| !l)
                .all(|(s, _)| (0..k).any(|i| s[i] < tau[i]))
        }
    }
}

/// Checks a candidate's associated configurations directly: known vertices
/// take their forced values in both, and for every subset of entries each
/// unknown vertex can realize the demanded states.
pub fn verify_witness(problem: &LearningProblem, candidate: &ShatterCandidate, limits: OracleLimits) -> Result<bool> {
    let r = candidate.entries();
    check_guard(problem, r, limits)?;
    let pairs = candidate
        .assoc()
        .ok_or_else(|| invalid("candidate has no associated configurations"))?;
    let n = problem.net().n();
    if pairs.iter().any(|p| p.a.len() != n || p.b.len() != n) {
        return Err(invalid(format!("associated configurations must have length {n}")));
    }
    for (c, p) in r.iter().zip(pairs) {
        for v in (0..n).filter(|&v| !problem.is_unknown(v)) {
            let f = forced_state(problem, c, v);
            if p.a.get(v) != f || p.b.get(v) != f {
                return Ok(false);
            }
        }
    }
    let m = r.len();
    for &v in problem.unknown() {
        let scores: Vec<Vec<u32>> = r.iter().map(|c| score_vector(problem.net(), c, v)).collect();
        for subset in 0..(1u32 << m) {
            let labels: Vec<bool> = pairs
                .iter()
                .enumerate()
                .map(|(c, p)| if subset & (1 << c) != 0 { p.a.get(v) } else { p.b.get(v) })
                .collect();
            if !realizable(problem, &scores, v, &labels) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
