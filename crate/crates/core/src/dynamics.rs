//! Threshold interaction functions, OR/AND master functions and synchronous
//! system evolution.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;
use std::sync::Arc;

use crate::configuration::Configuration;
use crate::error::{invalid, parse_err, Error, Result};
use crate::graph::{content_lines, MultilayerNetwork};

/// How a vertex combines its per-layer threshold outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MasterKind {
    /// Fires if the threshold is reached in at least one layer.
    Or,
    /// Fires only if the threshold is reached in every layer.
    And,
}

impl fmt::Display for MasterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MasterKind::Or => "or",
            MasterKind::And => "and",
        })
    }
}

impl FromStr for MasterKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "or" => Ok(MasterKind::Or),
            "and" => Ok(MasterKind::And),
            other => Err(invalid(format!("unknown master function {other:?}"))),
        }
    }
}

/// Number of state-1 vertices in the closed neighborhood of `v` in `layer`.
#[inline]
pub fn score(net: &MultilayerNetwork, c: &Configuration, v: usize, layer: usize) -> u32 {
    let own = c.get(v) as u32;
    own + net
        .neighbors(v, layer)
        .iter()
        .map(|&u| c.get(u) as u32)
        .sum::<u32>()
}

/// Per-layer scores of `v`, in layer order.
pub fn score_vector(net: &MultilayerNetwork, c: &Configuration, v: usize) -> Vec<u32> {
    (0..net.k()).map(|i| score(net, c, v, i)).collect()
}

/// A multilayer synchronous dynamical system with threshold interaction functions.
///
/// Thresholds are checked against `0 ≤ τ ≤ deg + 2` once, at construction.
#[derive(Clone, PartialEq, Eq)]
pub struct ThresholdSystem {
    net: Arc<MultilayerNetwork>,
    master: MasterKind,
    /// Layer-major: `tau[layer * n + v]`.
    tau: Vec<u32>,
}

impl fmt::Debug for ThresholdSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ThresholdSystem")
            .field("net", &self.net)
            .field("master", &self.master)
            .field("tau", &self.tau)
            .finish()
    }
}

impl ThresholdSystem {
    /// `tau` is layer-major: entry `layer * n + v`.
    pub fn new(net: Arc<MultilayerNetwork>, master: MasterKind, tau: Vec<u32>) -> Result<Self> {
        let n = net.n();
        if tau.len() != n * net.k() {
            return Err(invalid(format!(
                "threshold table has {} entries, expected n·k = {}",
                tau.len(),
                n * net.k()
            )));
        }
        for (idx, &t) in tau.iter().enumerate() {
            let (layer, v) = (idx / n.max(1), idx % n.max(1));
            let cap = net.degree(v, layer) as u32 + 2;
            if t > cap {
                return Err(invalid(format!(
                    "threshold {t} of vertex {v} on layer {layer} exceeds degree + 2 = {cap}"
                )));
            }
        }
        Ok(ThresholdSystem { net, master, tau })
    }

    pub fn from_fn(
        net: Arc<MultilayerNetwork>,
        master: MasterKind,
        mut f: impl FnMut(usize, usize) -> u32,
    ) -> Result<Self> {
        let n = net.n();
        let tau = (0..net.k())
            .flat_map(|i| (0..n).map(move |v| (v, i)))
            .map(|(v, i)| f(v, i))
            .collect();
        Self::new(net, master, tau)
    }

    pub fn net(&self) -> &Arc<MultilayerNetwork> {
        &self.net
    }

    pub fn master(&self) -> MasterKind {
        self.master
    }

    pub fn n(&self) -> usize {
        self.net.n()
    }

    pub fn k(&self) -> usize {
        self.net.k()
    }

    #[inline]
    pub fn tau(&self, v: usize, layer: usize) -> u32 {
        self.tau[layer * self.net.n() + v]
    }

    /// The layer-major threshold table.
    pub fn table(&self) -> &[u32] {
        &self.tau
    }

    /// Next state of `v` from configuration `c`.
    #[inline]
    pub fn next_state(&self, c: &Configuration, v: usize) -> bool {
        let mut fires = (0..self.k()).map(|i| score(&self.net, c, v, i) >= self.tau(v, i));
        match self.master {
            MasterKind::Or => fires.any(|b| b),
            MasterKind::And => fires.all(|b| b),
        }
    }

    /// One synchronous update of every vertex.
    pub fn successor(&self, c: &Configuration) -> Configuration {
        assert_eq!(c.len(), self.n(), "configuration length must equal n");
        Configuration::from_bits((0..self.n()).map(|v| self.next_state(c, v)))
    }

    /// `[c0, succ(c0), succ²(c0), …]` with `steps + 1` entries.
    pub fn trajectory(&self, c0: &Configuration, steps: usize) -> Vec<Configuration> {
        let mut out = Vec::with_capacity(steps + 1);
        out.push(c0.clone());
        for _ in 0..steps {
            let next = self.successor(out.last().expect("nonempty"));
            out.push(next);
        }
        out
    }

    /// The same thresholds under the other master function, with every
    /// threshold mapped to `deg + 2 − τ`.
    ///
    /// `dual().successor(!c) == !successor(c)` for every `c`.
    pub fn dual(&self) -> ThresholdSystem {
        let master = match self.master {
            MasterKind::Or => MasterKind::And,
            MasterKind::And => MasterKind::Or,
        };
        ThresholdSystem::from_fn(self.net.clone(), master, |v, i| {
            self.net.degree(v, i) as u32 + 2 - self.tau(v, i)
        })
        .expect("dual thresholds stay within bounds")
    }

    /// Writes the threshold file format: one `layer v tau` line per entry.
    pub fn write_thresholds<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for i in 0..self.k() {
            for v in 0..self.n() {
                writeln!(w, "{i} {v} {}", self.tau(v, i))?;
            }
        }
        Ok(())
    }
}

/// Reads a threshold file for `net`: lines `layer v tau`, every `(layer, v)`
/// exactly once. Returns the layer-major table.
pub fn load_threshold_table<R: BufRead>(source: R, net: &MultilayerNetwork) -> Result<Vec<u32>> {
    let (n, k) = (net.n(), net.k());
    let mut table: Vec<Option<u32>> = vec![None; n * k];
    for item in content_lines(source) {
        let (line_no, line) = item?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_err(line_no, "expected \"layer v tau\""));
        }
        let parse = |s: &str, what: &str| -> Result<usize> {
            s.parse()
                .map_err(|_| parse_err(line_no, format!("bad {what} {s:?}")))
        };
        let layer = parse(fields[0], "layer index")?;
        let v = parse(fields[1], "vertex id")?;
        let tau = parse(fields[2], "threshold")?;
        if layer >= k {
            return Err(parse_err(line_no, format!("layer index {layer} >= k = {k}")));
        }
        if v >= n {
            return Err(parse_err(line_no, format!("vertex id {v} >= n = {n}")));
        }
        let cap = net.degree(v, layer) + 2;
        if tau > cap {
            return Err(parse_err(
                line_no,
                format!("threshold {tau} exceeds degree + 2 = {cap}"),
            ));
        }
        let slot = &mut table[layer * n + v];
        if slot.is_some() {
            return Err(parse_err(
                line_no,
                format!("duplicate threshold for vertex {v} on layer {layer}"),
            ));
        }
        *slot = Some(tau as u32);
    }
    table
        .iter()
        .enumerate()
        .map(|(idx, t)| {
            t.ok_or_else(|| {
                invalid(format!(
                    "missing threshold for vertex {} on layer {}",
                    idx % n,
                    idx / n
                ))
            })
        })
        .collect()
}

pub fn load_thresholds<R: BufRead>(
    source: R,
    net: Arc<MultilayerNetwork>,
    master: MasterKind,
) -> Result<ThresholdSystem> {
    let table = load_threshold_table(source, &net)?;
    ThresholdSystem::new(net, master, table)
}
