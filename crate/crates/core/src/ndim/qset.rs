use std::collections::HashSet;

use crate::configuration::Configuration;
use crate::dynamics::MasterKind;
use crate::error::{invalid, Result};
use crate::graph::{generate_multi_gnp, sorted_is_subset, MultilayerNetwork, VertexLayerPair};
use crate::learner::LearningProblem;
use crate::rng::{trial_rng, SeededRng};

use super::{AssociatedPair, QSet, ShatterCandidate};

use rand::Rng;

/// `true` iff the pairs are distinct, name vertices of `unknown` and existing
/// layers, and no pair's closed neighborhood is contained in another's.
pub fn q_set_check(net: &MultilayerNetwork, unknown: &[usize], pairs: &[VertexLayerPair]) -> bool {
    let allowed: HashSet<usize> = unknown.iter().copied().collect();
    let mut seen = HashSet::new();
    for p in pairs {
        if !allowed.contains(&p.v) || p.v >= net.n() || p.layer >= net.k() || !seen.insert(*p) {
            return false;
        }
    }
    let hoods: Vec<Vec<usize>> = pairs
        .iter()
        .map(|p| net.closed_neighborhood(p.v, p.layer))
        .collect();
    for a in 0..hoods.len() {
        for b in (a + 1)..hoods.len() {
            if nested(&hoods[a], &hoods[b]) {
                return false;
            }
        }
    }
    true
}

/// One of the two sorted sets contains the other (equal sets count).
fn nested(a: &[usize], b: &[usize]) -> bool {
    if a.len() <= b.len() {
        sorted_is_subset(a, b)
    } else {
        sorted_is_subset(b, a)
    }
}

/// The shatterable set built from a Q-set: entry `(v, i)` switches on exactly
/// the closed neighborhood of `v` in layer `i`.
///
/// The witness hypotheses give `v` threshold `deg + 1` in layer `i` (fire only
/// on a full neighborhood) or `deg + 2` (never fire), and `deg + 2` in layers
/// outside the Q-set. Under AND everything is complemented.
pub fn shatterable_from_qset(problem: &LearningProblem, q: &QSet) -> Result<ShatterCandidate> {
    let net = problem.net();
    if !super::q_set_check(net, problem.unknown(), q.pairs()) {
        return Err(invalid("pairs do not form a Q-set for this problem"));
    }
    let n = net.n();
    let in_q: HashSet<VertexLayerPair> = q.pairs().iter().copied().collect();
    let or_tau = |v: usize, i: usize, on: bool| {
        let deg = net.degree(v, i) as u32;
        if on && in_q.contains(&VertexLayerPair::new(v, i)) {
            deg + 1
        } else {
            deg + 2
        }
    };
    let oriented = |v: usize, i: usize, on: bool| match problem.master() {
        MasterKind::Or => or_tau(v, i, on),
        MasterKind::And => net.degree(v, i) as u32 + 2 - or_tau(v, i, on),
    };
    let h_a = problem.complete(|v, i| oriented(v, i, true))?;
    let h_b = problem.complete(|v, i| oriented(v, i, false))?;

    let mut r = Vec::with_capacity(q.len());
    let mut pairs = Vec::with_capacity(q.len());
    for p in q.pairs() {
        let hood = Configuration::indicator(n, net.closed_neighborhood(p.v, p.layer));
        let c = match problem.master() {
            MasterKind::Or => hood,
            MasterKind::And => hood.complement(),
        };
        pairs.push(AssociatedPair {
            a: h_a.successor(&c),
            b: h_b.successor(&c),
        });
        r.push(c);
    }
    ShatterCandidate::new(r, Some(pairs))
}

/// Pairs of `unknown × layers` forming the largest class of a greedy coloring
/// of the nesting conflict graph. Always a valid Q-set.
///
/// Pairs are colored in order of decreasing conflict degree, ties by `(v, i)`;
/// among equally large classes the one with the smallest color wins.
pub fn pnn_certificate(net: &MultilayerNetwork, unknown: &[usize]) -> Result<Vec<VertexLayerPair>> {
    let mut vs: Vec<usize> = unknown.to_vec();
    vs.sort_unstable();
    vs.dedup();
    if let Some(&v) = vs.iter().find(|&&v| v >= net.n()) {
        return Err(invalid(format!("unknown vertex {v} out of range (n = {})", net.n())));
    }
    let pairs: Vec<VertexLayerPair> = vs
        .iter()
        .flat_map(|&v| (0..net.k()).map(move |i| VertexLayerPair::new(v, i)))
        .collect();
    let hoods: Vec<Vec<usize>> = pairs
        .iter()
        .map(|p| net.closed_neighborhood(p.v, p.layer))
        .collect();
    let m = pairs.len();
    let mut conflicts: Vec<Vec<usize>> = vec![Vec::new(); m];
    for a in 0..m {
        for b in (a + 1)..m {
            if nested(&hoods[a], &hoods[b]) {
                conflicts[a].push(b);
                conflicts[b].push(a);
            }
        }
    }

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| conflicts[b].len().cmp(&conflicts[a].len()).then(pairs[a].cmp(&pairs[b])));
    let mut color = vec![usize::MAX; m];
    let mut class_sizes: Vec<usize> = Vec::new();
    let mut used = Vec::new();
    for &x in &order {
        used.clear();
        used.resize(class_sizes.len() + 1, false);
        for &y in &conflicts[x] {
            if color[y] < used.len() {
                used[color[y]] = true;
            }
        }
        let c = used.iter().position(|&u| !u).expect("one more color than classes");
        if c == class_sizes.len() {
            class_sizes.push(0);
        }
        class_sizes[c] += 1;
        color[x] = c;
    }
    let Some(best) = (0..class_sizes.len()).max_by(|&a, &b| class_sizes[a].cmp(&class_sizes[b]).then(b.cmp(&a)))
    else {
        return Ok(Vec::new());
    };
    Ok((0..m).filter(|&x| color[x] == best).map(|x| pairs[x]).collect())
}

/// Size of [`pnn_certificate`]: a lower bound on the Natarajan dimension.
pub fn pnn_lower_bound(net: &MultilayerNetwork, unknown: &[usize]) -> Result<usize> {
    Ok(pnn_certificate(net, unknown)?.len())
}

/// `max(0, 1 − 4(σk)²(3/4)ⁿ)`: a lower bound on the fraction of `k`-layer
/// graphs on `n` vertices where all `σk` pairs form a Q-set.
pub fn qset_proportion_bound(n: usize, k: usize, sigma: usize) -> Result<f64> {
    if n == 0 || k < 2 || sigma == 0 || sigma > n {
        return Err(invalid(format!(
            "need n ≥ 1, k ≥ 2 and 1 ≤ σ ≤ n (got n = {n}, k = {k}, σ = {sigma})"
        )));
    }
    let sk = (sigma * k) as f64;
    let tail = 4.0 * sk * sk * 0.75f64.powi(n.min(i32::MAX as usize) as i32);
    Ok((1.0 - tail).max(0.0))
}

/// Fraction of `trials` random `k`-layer graphs (edge probability 1/2) in
/// which every pair of `{0..σ} × layers` is non-nested with every other.
///
/// Trial `t` uses seed `b + t`, where `b` is drawn once from `rng`.
pub fn estimate_full_qset_probability(
    n: usize,
    k: usize,
    sigma: usize,
    trials: usize,
    rng: &mut SeededRng,
) -> Result<f64> {
    if trials == 0 {
        return Err(invalid("need at least one trial"));
    }
    if sigma == 0 || sigma > n || k == 0 {
        return Err(invalid(format!("need k ≥ 1 and 1 ≤ σ ≤ n (got k = {k}, σ = {sigma}, n = {n})")));
    }
    let base: u64 = rng.gen();
    let unknown: Vec<usize> = (0..sigma).collect();
    let pairs: Vec<VertexLayerPair> = unknown
        .iter()
        .flat_map(|&v| (0..k).map(move |i| VertexLayerPair::new(v, i)))
        .collect();
    let mut hits = 0usize;
    for t in 0..trials {
        let net = generate_multi_gnp(n, k, 0.5, &mut trial_rng(base, t as u64))?;
        hits += q_set_check(&net, &unknown, &pairs) as usize;
    }
    Ok(hits as f64 / trials as f64)
}
