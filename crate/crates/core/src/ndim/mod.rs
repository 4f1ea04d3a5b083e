//! Natarajan-dimension tools: landmark and canonical sets for single-layer
//! networks, an exact shattering oracle for small instances, and the
//! pairwise non-nested neighborhood (Q-set) constructions with their estimators.

mod canonical;
mod oracle;
mod qset;

pub use canonical::{dfs_canonical_set, is_canonical, is_landmark};
pub use oracle::{shatter_oracle, shatter_oracle_with, shatter_witness, verify_witness, OracleLimits};
pub use qset::{
    estimate_full_qset_probability, pnn_certificate, pnn_lower_bound, q_set_check,
    qset_proportion_bound, shatterable_from_qset,
};

use std::collections::HashSet;
use std::io::{BufRead, Write};

use crate::configuration::Configuration;
use crate::error::{invalid, parse_err, Error, Result};
use crate::graph::{content_lines, MultilayerNetwork, VertexLayerPair};

/// The two configurations an entry must be mapped to, one for members of a
/// chosen subset and one for non-members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociatedPair {
    pub a: Configuration,
    pub b: Configuration,
}

/// A set of configurations proposed for shattering, optionally with its witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShatterCandidate {
    r: Vec<Configuration>,
    assoc: Option<Vec<AssociatedPair>>,
    /// Per entry, the vertices whose states differ between its two associated configurations.
    contested: Option<Vec<Vec<usize>>>,
}

fn check_entries(r: &[Configuration]) -> Result<()> {
    if let Some(first) = r.first() {
        if r.iter().any(|c| c.len() != first.len()) {
            return Err(invalid("candidate configurations differ in length"));
        }
    }
    let mut seen = HashSet::new();
    for (idx, c) in r.iter().enumerate() {
        if !seen.insert(c) {
            return Err(invalid(format!("candidate entry {idx} ({c}) is repeated")));
        }
    }
    Ok(())
}

impl ShatterCandidate {
    /// Entries must be distinct and of equal length; every associated pair
    /// must consist of two different configurations of that length.
    pub fn new(r: Vec<Configuration>, assoc: Option<Vec<AssociatedPair>>) -> Result<Self> {
        check_entries(&r)?;
        let contested = match &assoc {
            None => None,
            Some(pairs) => {
                if pairs.len() != r.len() {
                    return Err(invalid("need exactly one associated pair per entry"));
                }
                let mut contested = Vec::with_capacity(r.len());
                for (idx, (c, p)) in r.iter().zip(pairs).enumerate() {
                    if p.a.len() != c.len() || p.b.len() != c.len() {
                        return Err(invalid(format!("associated pair {idx} has the wrong length")));
                    }
                    if p.a == p.b {
                        return Err(invalid(format!(
                            "associated configurations of entry {idx} are equal"
                        )));
                    }
                    contested.push((0..c.len()).filter(|&v| p.a.get(v) != p.b.get(v)).collect());
                }
                Some(contested)
            }
        };
        Ok(ShatterCandidate { r, assoc, contested })
    }

    pub fn entries(&self) -> &[Configuration] {
        &self.r
    }

    pub fn assoc(&self) -> Option<&[AssociatedPair]> {
        self.assoc.as_deref()
    }

    pub fn contested(&self) -> Option<&[Vec<usize>]> {
        self.contested.as_deref()
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// Blocks separated by blank lines: the entry, then its two associated
    /// configurations when present.
    pub fn write<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for (idx, c) in self.r.iter().enumerate() {
            if idx > 0 {
                writeln!(w)?;
            }
            writeln!(w, "{c}")?;
            if let Some(pairs) = &self.assoc {
                writeln!(w, "{}", pairs[idx].a)?;
                writeln!(w, "{}", pairs[idx].b)?;
            }
        }
        Ok(())
    }
}

/// Reads a candidate file. Each blank-line separated block holds one entry
/// and optionally its two associated configurations; blocks must agree on
/// whether those are present.
pub fn load_candidate<R: BufRead>(source: R) -> Result<ShatterCandidate> {
    let mut blocks: Vec<Vec<(usize, Configuration)>> = Vec::new();
    let mut current = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.starts_with('#') {
            continue;
        }
        if text.is_empty() {
            if !current.is_empty() {
                blocks.push(std::mem::take(&mut current));
            }
            continue;
        }
        let c: Configuration = text.parse().map_err(|e| parse_err(idx + 1, format!("{e}")))?;
        current.push((idx + 1, c));
    }
    if !current.is_empty() {
        blocks.push(current);
    }
    let with_assoc = blocks.first().is_some_and(|b| b.len() == 3);
    let mut r = Vec::new();
    let mut pairs = Vec::new();
    for block in blocks {
        let line = block[0].0;
        let mut it = block.into_iter().map(|(_, c)| c);
        match (with_assoc, it.len()) {
            (false, 1) => r.push(it.next().expect("one line")),
            (true, 3) => {
                r.push(it.next().expect("three lines"));
                let a = it.next().expect("three lines");
                let b = it.next().expect("three lines");
                pairs.push(AssociatedPair { a, b });
            }
            (_, len) => {
                return Err(parse_err(
                    line,
                    format!(
                        "block has {len} lines, expected {}",
                        if with_assoc { 3 } else { 1 }
                    ),
                ))
            }
        }
    }
    ShatterCandidate::new(r, with_assoc.then_some(pairs))
}

/// Vertex-layer pairs whose closed neighborhoods are pairwise non-nested.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSet {
    pairs: Vec<VertexLayerPair>,
}

impl QSet {
    /// Fails unless `pairs` passes [`q_set_check`] against `unknown`.
    pub fn new(net: &MultilayerNetwork, unknown: &[usize], pairs: Vec<VertexLayerPair>) -> Result<Self> {
        if !q_set_check(net, unknown, &pairs) {
            return Err(invalid("pairs do not form a Q-set"));
        }
        Ok(QSet { pairs })
    }

    pub fn pairs(&self) -> &[VertexLayerPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// One `v i` line per pair.
    pub fn write<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for p in &self.pairs {
            writeln!(w, "{p}")?;
        }
        Ok(())
    }
}

/// Reads `v i` lines. The result is not validated; pass it to [`QSet::new`].
pub fn load_pairs<R: BufRead>(source: R) -> Result<Vec<VertexLayerPair>> {
    let mut pairs = Vec::new();
    for item in content_lines(source) {
        let (line_no, line) = item?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parsed = match fields.as_slice() {
            [v, i] => v.parse().ok().zip(i.parse().ok()),
            _ => None,
        };
        let (v, layer) = parsed.ok_or_else(|| parse_err(line_no, "expected \"v i\""))?;
        pairs.push(VertexLayerPair::new(v, layer));
    }
    Ok(pairs)
}

fn require_single_layer(net: &MultilayerNetwork) -> Result<()> {
    if net.k() != 1 {
        return Err(Error::InvalidArgument(format!(
            "operation needs a single-layer network, got {} layers",
            net.k()
        )));
    }
    Ok(())
}
