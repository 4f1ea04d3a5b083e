//! Multilayer networks: `k` undirected simple graphs over the shared vertex set `0..n`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::{BufRead, Write};

use rand::Rng;

use crate::error::{invalid, parse_err, Error, Result};
use crate::rng::SeededRng;

/// A `k`-layer network over vertices `0..n`.
///
/// Neighbor lists are kept sorted so that neighborhood containment tests are
/// linear merges. Networks are immutable once built.
#[derive(Clone, PartialEq, Eq)]
pub struct MultilayerNetwork {
    n: usize,
    /// `layers[i][v]` is the sorted neighbor list of `v` in layer `i`.
    layers: Vec<Vec<Vec<usize>>>,
}

/// A vertex paired with one of the network's layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexLayerPair {
    pub v: usize,
    pub layer: usize,
}

impl VertexLayerPair {
    pub fn new(v: usize, layer: usize) -> Self {
        VertexLayerPair { v, layer }
    }
}

impl fmt::Display for VertexLayerPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.v, self.layer)
    }
}

impl fmt::Debug for MultilayerNetwork {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultilayerNetwork")
            .field("n", &self.n)
            .field("k", &self.k())
            .field("edges", &self.edge_count())
            .finish()
    }
}

impl MultilayerNetwork {
    /// An edgeless network with `n` vertices and `k` layers.
    pub fn empty(n: usize, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(invalid("a network needs at least one layer"));
        }
        Ok(MultilayerNetwork {
            n,
            layers: vec![vec![Vec::new(); n]; k],
        })
    }

    /// Builds a network from `(layer, u, v)` triples. Self-loops, out-of-range
    /// indices and repeated edges are rejected.
    pub fn from_edges<I>(n: usize, k: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, usize)>,
    {
        let mut builder = Builder::new(n, k)?;
        for (idx, (i, u, v)) in edges.into_iter().enumerate() {
            builder
                .add(i, u, v)
                .map_err(|msg| invalid(format!("edge #{idx} ({i} {u} {v}): {msg}")))?;
        }
        Ok(builder.finish())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.layers.len()
    }

    pub fn neighbors(&self, v: usize, layer: usize) -> &[usize] {
        &self.layers[layer][v]
    }

    pub fn degree(&self, v: usize, layer: usize) -> usize {
        self.layers[layer][v].len()
    }

    /// `adj(layer, v) ∪ {v}`, sorted.
    pub fn closed_neighborhood(&self, v: usize, layer: usize) -> Vec<usize> {
        let adj = &self.layers[layer][v];
        let pos = adj.partition_point(|&u| u < v);
        let mut out = Vec::with_capacity(adj.len() + 1);
        out.extend_from_slice(&adj[..pos]);
        out.push(v);
        out.extend_from_slice(&adj[pos..]);
        out
    }

    pub fn layer_edge_count(&self, layer: usize) -> usize {
        self.layers[layer].iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Total number of edges summed over layers.
    pub fn edge_count(&self) -> usize {
        (0..self.k()).map(|i| self.layer_edge_count(i)).sum()
    }

    /// Edges as `(layer, min, max)` in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.layers.iter().enumerate().flat_map(|(i, adj)| {
            adj.iter().enumerate().flat_map(move |(u, nbrs)| {
                nbrs.iter()
                    .copied()
                    .filter(move |&v| v > u)
                    .map(move |v| (i, u, v))
            })
        })
    }

    /// The single-layer network consisting of layer `layer` only.
    pub fn restrict_to_layer(&self, layer: usize) -> Result<Self> {
        if layer >= self.k() {
            return Err(invalid(format!("layer {layer} out of range (k = {})", self.k())));
        }
        Ok(MultilayerNetwork {
            n: self.n,
            layers: vec![self.layers[layer].clone()],
        })
    }

    /// Mean degree of `vset` in the union of all layers, parallel edges counted once.
    pub fn merged_average_degree(&self, vset: &[usize]) -> Result<f64> {
        if vset.is_empty() {
            return Err(invalid("vertex set must be nonempty"));
        }
        let mut total = 0usize;
        let mut seen = HashSet::new();
        for &v in vset {
            if v >= self.n {
                return Err(invalid(format!("vertex {v} out of range (n = {})", self.n)));
            }
            seen.clear();
            for layer in &self.layers {
                seen.extend(layer[v].iter().copied());
            }
            total += seen.len();
        }
        Ok(total as f64 / vset.len() as f64)
    }

    /// Writes the canonical edge-list form: header `n k`, then edges sorted by
    /// `(layer, min, max)`.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{} {}", self.n, self.k())?;
        for (i, u, v) in self.edges() {
            writeln!(w, "{i} {u} {v}")?;
        }
        Ok(())
    }

    pub fn to_edge_list_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_edge_list(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("edge list is ASCII")
    }
}

struct Builder {
    n: usize,
    layers: Vec<Vec<Vec<usize>>>,
    seen: Vec<HashSet<(usize, usize)>>,
}

impl Builder {
    fn new(n: usize, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(invalid("a network needs at least one layer"));
        }
        Ok(Builder {
            n,
            layers: vec![vec![Vec::new(); n]; k],
            seen: vec![HashSet::new(); k],
        })
    }

    fn add(&mut self, i: usize, u: usize, v: usize) -> std::result::Result<(), String> {
        let k = self.layers.len();
        if i >= k {
            return Err(format!("layer index {i} >= k = {k}"));
        }
        if u >= self.n || v >= self.n {
            return Err(format!("vertex id >= n = {}", self.n));
        }
        if u == v {
            return Err(format!("self-loop on vertex {u}"));
        }
        if !self.seen[i].insert((u.min(v), u.max(v))) {
            return Err(format!("duplicate edge {{{u}, {v}}} in layer {i}"));
        }
        self.layers[i][u].push(v);
        self.layers[i][v].push(u);
        Ok(())
    }

    fn finish(mut self) -> MultilayerNetwork {
        for layer in &mut self.layers {
            for nbrs in layer.iter_mut() {
                nbrs.sort_unstable();
            }
        }
        MultilayerNetwork {
            n: self.n,
            layers: self.layers,
        }
    }
}

/// Non-comment, non-blank lines with their 1-based line numbers.
pub(crate) fn content_lines<R: BufRead>(
    source: R,
) -> impl Iterator<Item = Result<(usize, String)>> {
    source
        .lines()
        .enumerate()
        .filter_map(|(idx, line)| match line {
            Err(e) => Some(Err(Error::Io(e))),
            Ok(line) => {
                let trimmed = line.trim();
                if trimmed.is_empty() || trimmed.starts_with('#') {
                    None
                } else {
                    Some(Ok((idx + 1, trimmed.to_string())))
                }
            }
        })
}

fn parse_header(line_no: usize, line: &str) -> Result<(usize, usize)> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(parse_err(line_no, "expected header \"n k\""));
    }
    let n = fields[0]
        .parse()
        .map_err(|_| parse_err(line_no, format!("bad vertex count {:?}", fields[0])))?;
    let k: usize = fields[1]
        .parse()
        .map_err(|_| parse_err(line_no, format!("bad layer count {:?}", fields[1])))?;
    if k == 0 {
        return Err(parse_err(line_no, "layer count must be at least 1"));
    }
    Ok((n, k))
}

fn split_edge_line(line_no: usize, line: &str) -> Result<(usize, [String; 2])> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(parse_err(line_no, "expected \"layer u v\""));
    }
    let layer = fields[0]
        .parse()
        .map_err(|_| parse_err(line_no, format!("bad layer index {:?}", fields[0])))?;
    Ok((layer, [fields[1].to_string(), fields[2].to_string()]))
}

/// Parses the edge-list format: first content line `n k`, then one `layer u v`
/// line per edge. `#` lines are comments.
pub fn load_edge_list<R: BufRead>(source: R) -> Result<MultilayerNetwork> {
    let mut lines = content_lines(source);
    let (line_no, header) = lines
        .next()
        .transpose()?
        .ok_or_else(|| parse_err(1, "missing header \"n k\""))?;
    let (n, k) = parse_header(line_no, &header)?;
    let mut builder = Builder::new(n, k)?;
    for item in lines {
        let (line_no, line) = item?;
        let (layer, [u, v]) = split_edge_line(line_no, &line)?;
        let u = u
            .parse()
            .map_err(|_| parse_err(line_no, format!("bad vertex id {u:?}")))?;
        let v = v
            .parse()
            .map_err(|_| parse_err(line_no, format!("bad vertex id {v:?}")))?;
        builder.add(layer, u, v).map_err(|m| parse_err(line_no, m))?;
    }
    Ok(builder.finish())
}

/// Maps arbitrary vertex labels onto dense ids `0..n` in order of first appearance.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelTable {
    labels: Vec<String>,
    ids: HashMap<String, usize>,
}

impl LabelTable {
    pub fn id(&self, label: &str) -> Option<usize> {
        self.ids.get(label).copied()
    }

    pub fn label(&self, id: usize) -> Option<&str> {
        self.labels.get(id).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    fn intern(&mut self, label: &str) -> usize {
        if let Some(&id) = self.ids.get(label) {
            return id;
        }
        let id = self.labels.len();
        self.labels.push(label.to_string());
        self.ids.insert(label.to_string(), id);
        id
    }
}

/// Like [`load_edge_list`], but vertex fields are free-form labels. Ids are
/// assigned in order of first appearance; ids past the last label are isolated
/// vertices.
pub fn load_labeled_edge_list<R: BufRead>(source: R) -> Result<(MultilayerNetwork, LabelTable)> {
    let mut lines = content_lines(source);
    let (line_no, header) = lines
        .next()
        .transpose()?
        .ok_or_else(|| parse_err(1, "missing header \"n k\""))?;
    let (n, k) = parse_header(line_no, &header)?;
    let mut builder = Builder::new(n, k)?;
    let mut table = LabelTable::default();
    for item in lines {
        let (line_no, line) = item?;
        let (layer, [u, v]) = split_edge_line(line_no, &line)?;
        let u = table.intern(&u);
        let v = table.intern(&v);
        if table.len() > n {
            return Err(parse_err(line_no, format!("more than n = {n} distinct labels")));
        }
        builder.add(layer, u, v).map_err(|m| parse_err(line_no, m))?;
    }
    Ok((builder.finish(), table))
}

/// Samples a `k`-layer network where each of the `k·n(n−1)/2` possible edges
/// is present independently with probability `edge_prob`.
pub fn generate_multi_gnp(
    n: usize,
    k: usize,
    edge_prob: f64,
    rng: &mut SeededRng,
) -> Result<MultilayerNetwork> {
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(invalid(format!("edge probability {edge_prob} not in [0, 1]")));
    }
    let mut net = MultilayerNetwork::empty(n, k)?;
    for layer in &mut net.layers {
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.gen_bool(edge_prob) {
                    layer[u].push(v);
                    layer[v].push(u);
                }
            }
        }
        // Pushes happen in ascending order of the other endpoint, so lists are already sorted.
    }
    Ok(net)
}

/// Edge probability giving an expected per-layer mean degree of `avg_degree`.
pub fn edge_prob_for_avg_degree(n: usize, avg_degree: f64) -> Result<f64> {
    if n < 2 {
        return Err(invalid("average degree needs at least two vertices"));
    }
    let p = avg_degree / (n - 1) as f64;
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!(
            "average degree {avg_degree} is not achievable with n = {n}"
        )));
    }
    Ok(p)
}

/// `true` iff sorted `a` is a subset of sorted `b`.
pub(crate) fn sorted_is_subset(a: &[usize], b: &[usize]) -> bool {
    if a.len() > b.len() {
        return false;
    }
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn path3() -> MultilayerNetwork {
        load_edge_list("3 1\n0 0 1\n0 1 2\n".as_bytes()).unwrap()
    }

    fn complete(n: usize) -> MultilayerNetwork {
        let edges = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (0, u, v)));
        MultilayerNetwork::from_edges(n, 1, edges).unwrap()
    }

    #[test]
    fn loads_path() {
        let g = path3();
        assert_eq!((g.n(), g.k(), g.edge_count()), (3, 1, 2));
        assert_eq!(g.neighbors(1, 0), &[0, 2]);
    }

    #[test]
    fn loads_edgeless_two_layers() {
        let g = load_edge_list("# comment\n4 2\n".as_bytes()).unwrap();
        assert_eq!((g.n(), g.k(), g.edge_count()), (4, 2, 0));
    }

    #[test]
    fn load_errors_name_the_line() {
        let cases = [
            ("3 1\n0 0 1\n0 0 1\n", 3, "duplicate"),
            ("3 1\n0 0 1\n\n1 1 2\n", 4, "layer index"),
            ("3 1\n0 0 3\n", 2, "vertex id"),
            ("3 1\n# c\n0 2 2\n", 3, "self-loop"),
            ("3 1\n0 x 2\n", 2, "bad vertex"),
            ("3 1\n0 1\n", 2, "expected"),
        ];
        for (text, line, needle) in cases {
            match load_edge_list(text.as_bytes()) {
                Err(Error::Parse { line: l, msg }) => {
                    assert_eq!(l, line, "{text:?}");
                    assert!(msg.contains(needle), "{msg}");
                }
                other => panic!("{text:?}: expected parse error, got {other:?}"),
            }
        }
        assert!(load_edge_list("".as_bytes()).is_err());
        assert!(load_edge_list("3 0\n".as_bytes()).is_err());
    }

    #[test]
    fn labeled_loader_assigns_dense_ids() {
        let text = "4 2\n0 alice bob\n1 bob carol\n";
        let (g, labels) = load_labeled_edge_list(text.as_bytes()).unwrap();
        assert_eq!(labels.id("alice"), Some(0));
        assert_eq!(labels.id("carol"), Some(2));
        assert_eq!(labels.label(1), Some("bob"));
        assert_eq!(g.neighbors(1, 0), &[0]);
        assert_eq!(g.neighbors(1, 1), &[2]);
        assert_eq!(g.degree(3, 0), 0);

        let too_many = "2 1\n0 a b\n0 b c\n";
        assert!(matches!(
            load_labeled_edge_list(too_many.as_bytes()),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn closed_neighborhoods() {
        let empty = MultilayerNetwork::empty(4, 1).unwrap();
        for v in 0..4 {
            assert_eq!(empty.closed_neighborhood(v, 0), vec![v]);
        }
        assert_eq!(path3().closed_neighborhood(1, 0), vec![0, 1, 2]);
        assert_eq!(path3().closed_neighborhood(2, 0), vec![1, 2]);
        let k4 = complete(4);
        for v in 0..4 {
            assert_eq!(k4.closed_neighborhood(v, 0), vec![0, 1, 2, 3]);
        }
    }

    #[test]
    fn degrees() {
        assert_eq!(MultilayerNetwork::empty(3, 2).unwrap().degree(1, 1), 0);
        assert_eq!(path3().degree(1, 0), 2);
        assert_eq!(complete(4).degree(2, 0), 3);
    }

    #[test]
    fn merged_degree_dedups_parallel_edges() {
        let g = MultilayerNetwork::from_edges(2, 2, [(0, 0, 1), (1, 0, 1)]).unwrap();
        assert_eq!(g.merged_average_degree(&[0, 1]).unwrap(), 1.0);

        let g = MultilayerNetwork::from_edges(3, 2, [(0, 0, 1), (1, 0, 2)]).unwrap();
        assert_eq!(g.merged_average_degree(&[0]).unwrap(), 2.0);

        let g = MultilayerNetwork::empty(5, 3).unwrap();
        assert_eq!(g.merged_average_degree(&[0, 3, 4]).unwrap(), 0.0);
        assert!(matches!(g.merged_average_degree(&[]), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn gnp_extremes() {
        let mut rng = seeded(1);
        let g = generate_multi_gnp(5, 2, 0.0, &mut rng).unwrap();
        assert_eq!(g.edge_count(), 0);
        let g = generate_multi_gnp(5, 2, 1.0, &mut rng).unwrap();
        assert_eq!(g.layer_edge_count(0), 10);
        assert_eq!(g.layer_edge_count(1), 10);
        assert!(generate_multi_gnp(5, 2, 1.5, &mut rng).is_err());
    }

    #[test]
    fn gnp_is_deterministic_per_seed() {
        let a = generate_multi_gnp(40, 3, 0.2, &mut seeded(9)).unwrap();
        let b = generate_multi_gnp(40, 3, 0.2, &mut seeded(9)).unwrap();
        let c = generate_multi_gnp(40, 3, 0.2, &mut seeded(10)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn generated_lists_are_sorted_and_symmetric() {
        let g = generate_multi_gnp(30, 2, 0.3, &mut seeded(3)).unwrap();
        for i in 0..2 {
            for v in 0..30 {
                let nb = g.neighbors(v, i);
                assert!(nb.windows(2).all(|w| w[0] < w[1]));
                for &u in nb {
                    assert!(g.neighbors(u, i).binary_search(&v).is_ok());
                }
            }
        }
    }

    #[test]
    fn subset_merge() {
        assert!(sorted_is_subset(&[], &[1]));
        assert!(sorted_is_subset(&[1, 3], &[0, 1, 2, 3]));
        assert!(!sorted_is_subset(&[1, 4], &[0, 1, 2, 3]));
        assert!(!sorted_is_subset(&[0, 1], &[1]));
    }
}
