use std::io::{BufRead, Write};

use crate::configuration::Configuration;
use crate::dynamics::ThresholdSystem;
use crate::error::{parse_err, Result};
use crate::graph::content_lines;
use crate::learner::ConfigSampler;
use crate::rng::SeededRng;

/// Ordered `(C, C')` snapshot pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TrainingSet {
    pairs: Vec<(Configuration, Configuration)>,
}

impl TrainingSet {
    pub fn new(pairs: Vec<(Configuration, Configuration)>) -> Self {
        TrainingSet { pairs }
    }

    pub fn pairs(&self) -> &[(Configuration, Configuration)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The first `q` pairs.
    pub fn prefix(&self, q: usize) -> TrainingSet {
        TrainingSet::new(self.pairs[..q.min(self.pairs.len())].to_vec())
    }

    pub fn extend(&mut self, other: &TrainingSet) {
        self.pairs.extend_from_slice(&other.pairs);
    }

    /// One `C C'` line per pair.
    pub fn write<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for (c, succ) in &self.pairs {
            writeln!(w, "{c} {succ}")?;
        }
        Ok(())
    }
}

/// `q` pairs `(C, target(C))` with `C` drawn from `sampler`.
pub fn make_training_set(
    target: &ThresholdSystem,
    sampler: &dyn ConfigSampler,
    q: usize,
    rng: &mut SeededRng,
) -> TrainingSet {
    let pairs = (0..q)
        .map(|_| {
            let c = sampler.sample(target.n(), rng);
            let succ = target.successor(&c);
            (c, succ)
        })
        .collect();
    TrainingSet { pairs }
}

/// Parses a training-set file. With `n` given, every bit string must have that length.
pub fn load_training_set<R: BufRead>(source: R, n: Option<usize>) -> Result<TrainingSet> {
    let mut pairs = Vec::new();
    let mut expected = n;
    for item in content_lines(source) {
        let (line_no, line) = item?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse_err(line_no, "expected two bit strings \"C C'\""));
        }
        let c: Configuration = fields[0]
            .parse()
            .map_err(|e| parse_err(line_no, format!("{e}")))?;
        let succ: Configuration = fields[1]
            .parse()
            .map_err(|e| parse_err(line_no, format!("{e}")))?;
        let want = *expected.get_or_insert(c.len());
        if c.len() != want || succ.len() != want {
            return Err(parse_err(
                line_no,
                format!("bit strings must both have length {want}"),
            ));
        }
        pairs.push((c, succ));
    }
    Ok(TrainingSet { pairs })
}
