use crate::configuration::Configuration;
use crate::dynamics::score;
use crate::error::{invalid, Result};
use crate::graph::MultilayerNetwork;

use super::require_single_layer;

/// `true` iff `v`'s score under `r[idx]` differs from its score under every
/// other entry of `r`.
pub fn is_landmark(net: &MultilayerNetwork, r: &[Configuration], idx: usize, v: usize) -> Result<bool> {
    require_single_layer(net)?;
    if idx >= r.len() || v >= net.n() {
        return Err(invalid("entry index or vertex out of range"));
    }
    let own = score(net, &r[idx], v, 0);
    Ok(r
        .iter()
        .enumerate()
        .all(|(j, c)| j == idx || score(net, c, v, 0) != own))
}

/// An injective map from entries to landmark vertices in `unknown`, if one exists.
///
/// `Some(m)` has `m[j]` a landmark for `r[j]`, all distinct.
pub fn is_canonical(
    net: &MultilayerNetwork,
    r: &[Configuration],
    unknown: &[usize],
) -> Result<Option<Vec<usize>>> {
    require_single_layer(net)?;
    if r.len() > unknown.len() {
        return Ok(None);
    }
    let mut landmarks: Vec<Vec<usize>> = Vec::with_capacity(r.len());
    for idx in 0..r.len() {
        let mut vs = Vec::new();
        for &v in unknown {
            if is_landmark(net, r, idx, v)? {
                vs.push(v);
            }
        }
        landmarks.push(vs);
    }

    // Kuhn's augmenting paths, entries in order.
    let mut owner: Vec<Option<usize>> = vec![None; net.n()];
    for entry in 0..r.len() {
        let mut seen = vec![false; net.n()];
        if !augment(entry, &landmarks, &mut owner, &mut seen) {
            return Ok(None);
        }
    }
    let mut mapping = vec![usize::MAX; r.len()];
    for (v, o) in owner.iter().enumerate() {
        if let Some(entry) = o {
            mapping[*entry] = v;
        }
    }
    Ok(Some(mapping))
}

fn augment(entry: usize, landmarks: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for &v in &landmarks[entry] {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        let free = match owner[v] {
            None => true,
            Some(other) => augment(other, landmarks, owner, seen),
        };
        if free {
            owner[v] = Some(entry);
            return true;
        }
    }
    false
}

/// A canonical set of size `|unknown|`, built by depth-first search of the
/// subgraph induced by `unknown`.
///
/// Searches start at the lowest unvisited vertex and take neighbors in
/// increasing order. When a vertex is first reached, the emitted configuration
/// has exactly the vertices on the current search path set to 1.
pub fn dfs_canonical_set(net: &MultilayerNetwork, unknown: &[usize]) -> Result<Vec<Configuration>> {
    require_single_layer(net)?;
    let n = net.n();
    let mut in_set = vec![false; n];
    for &v in unknown {
        if v >= n {
            return Err(invalid(format!("unknown vertex {v} out of range (n = {n})")));
        }
        in_set[v] = true;
    }
    if !in_set.iter().any(|&b| b) {
        return Err(invalid("the unknown set is empty"));
    }

    let mut visited = vec![false; n];
    let mut out = Vec::new();
    // (vertex, position of the next neighbor to try)
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if !in_set[root] || visited[root] {
            continue;
        }
        visited[root] = true;
        stack.push((root, 0));
        out.push(Configuration::indicator(n, stack.iter().map(|&(u, _)| u)));
        while let Some(top) = stack.last_mut() {
            let (u, pos) = *top;
            let next = net.neighbors(u, 0)[pos..]
                .iter()
                .position(|&w| in_set[w] && !visited[w]);
            match next {
                Some(offset) => {
                    let w = net.neighbors(u, 0)[pos + offset];
                    top.1 = pos + offset + 1;
                    visited[w] = true;
                    stack.push((w, 0));
                    out.push(Configuration::indicator(n, stack.iter().map(|&(u, _)| u)));
                }
                None => {
                    stack.pop();
                }
            }
        }
    }
    Ok(out)
}
