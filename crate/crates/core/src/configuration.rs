use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error};

const WORD: usize = 64;

/// Vertex states at one time step, packed 64 per word.
///
/// Bits past `len` are always zero, so derived equality and hashing are exact.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    len: usize,
    words: Vec<u64>,
}

impl Configuration {
    pub fn zeros(len: usize) -> Self {
        Configuration {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut c = Configuration {
            len,
            words: vec![!0; len.div_ceil(WORD)],
        };
        c.clear_tail();
        c
    }

    /// The configuration whose state-1 vertices are exactly `members`.
    pub fn indicator(len: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut c = Configuration::zeros(len);
        for v in members {
            c.set(v, true);
        }
        c
    }

    pub fn from_bits(bits: impl IntoIterator<Item = bool>) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for b in bits {
            if len % WORD == 0 {
                words.push(0);
            }
            if b {
                words[len / WORD] |= 1 << (len % WORD);
            }
            len += 1;
        }
        Configuration { len, words }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, v: usize) -> bool {
        debug_assert!(v < self.len);
        self.words[v / WORD] >> (v % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, v: usize, state: bool) {
        assert!(v < self.len, "vertex {v} out of range for length {}", self.len);
        let mask = 1u64 << (v % WORD);
        if state {
            self.words[v / WORD] |= mask;
        } else {
            self.words[v / WORD] &= !mask;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn complement(&self) -> Self {
        let mut c = Configuration {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        c.clear_tail();
        c
    }

    /// Number of positions where `self` and `other` differ.
    pub fn hamming(&self, other: &Configuration) -> usize {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |v| self.get(v))
    }

    /// Indices of state-1 vertices, ascending.
    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&v| self.get(v))
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Configuration({self})")
    }
}

impl FromStr for Configuration {
    type Err = Error;

    /// Parses a bit string such as `"0110"`.
    fn from_str(s: &str) -> Result<Self, Error> {
        s.chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(invalid(format!("unexpected character {other:?} in bit string"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Configuration::from_bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basics() {
        let c: Configuration = "10110".parse().unwrap();
        assert_eq!(c.len(), 5);
        assert_eq!(c.count_ones(), 3);
        assert_eq!(c.to_string(), "10110");
        assert_eq!(c.complement().to_string(), "01001");
        assert_eq!(Configuration::ones(70).count_ones(), 70);
        assert_eq!(Configuration::ones(70).complement(), Configuration::zeros(70));
        assert_eq!(Configuration::indicator(4, [1, 3]).to_string(), "0101");
        assert!("01a".parse::<Configuration>().is_err());
    }

    proptest! {
        #[test]
        fn string_round_trip(bits in proptest::collection::vec(any::<bool>(), 0..200)) {
            let c = Configuration::from_bits(bits.iter().copied());
            let back: Configuration = c.to_string().parse().unwrap();
            prop_assert_eq!(&back, &c);
            prop_assert_eq!(c.iter().collect::<Vec<_>>(), bits);
            prop_assert_eq!(c.complement().complement(), c);
        }
    }
}
