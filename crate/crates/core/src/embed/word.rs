use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::graph::{Edge, FinitePath, VertexId};

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    pub fn flipped(self) -> Letter {
        match self {
            Letter::A => Letter::B,
            Letter::B => Letter::A,
        }
    }

    fn slot(self) -> usize {
        match self {
            Letter::A => 0,
            Letter::B => 1,
        }
    }
}

/// A finite word over `{a, b}`, i.e. a finite path in the rose with two
/// loops `a` and `b`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct BinaryWord(Vec<Letter>);

impl BinaryWord {
    pub fn empty() -> BinaryWord {
        BinaryWord(Vec::new())
    }

    pub fn repeat(l: Letter, n: usize) -> BinaryWord {
        BinaryWord(vec![l; n])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    pub fn extend(&mut self, w: &BinaryWord) {
        self.0.extend_from_slice(&w.0);
    }

    pub fn concat(&self, w: &BinaryWord) -> BinaryWord {
        let mut out = self.clone();
        out.extend(w);
        out
    }

    pub fn is_prefix_of(&self, w: &BinaryWord) -> bool {
        w.0.starts_with(&self.0)
    }

    /// The rest of `self` after `prefix`, if `prefix` is a prefix.
    pub fn strip_prefix(&self, prefix: &BinaryWord) -> Option<BinaryWord> {
        self.0.strip_prefix(&prefix.0[..]).map(|r| BinaryWord(r.to_vec()))
    }

    /// The word with the letter at `k` flipped.
    pub fn flip(&self, k: usize) -> BinaryWord {
        let mut out = self.clone();
        out.0[k] = out.0[k].flipped();
        out
    }

    /// The same word as a path in [`Graph::rose`](crate::graph::Graph::rose)`(2)`.
    pub fn to_path(&self) -> FinitePath {
        let v = VertexId(0);
        FinitePath::from_edges(v, self.edges())
    }

    pub fn edges(&self) -> Vec<Edge> {
        self.0.iter().map(|l| Edge { source: VertexId(0), slot: l.slot() }).collect()
    }

    pub fn from_edges(edges: &[Edge]) -> BinaryWord {
        BinaryWord(edges.iter().map(|e| if e.slot == 0 { Letter::A } else { Letter::B }).collect())
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            f.write_str(match l {
                Letter::A => "a",
                Letter::B => "b",
            })?;
        }
        Ok(())
    }
}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
#[error("not a binary word: {0:?}")]
pub struct WordError(pub String);

impl FromStr for BinaryWord {
    type Err = WordError;

    fn from_str(s: &str) -> Result<BinaryWord, WordError> {
        s.chars()
            .map(|c| match c {
                'a' => Ok(Letter::A),
                'b' => Ok(Letter::B),
                _ => Err(WordError(s.to_string())),
            })
            .collect::<Result<_, _>>()
            .map(BinaryWord)
    }
}

impl Serialize for BinaryWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BinaryWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<BinaryWord, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand for tests and examples; panics on letters other than `a`, `b`.
pub fn word(s: &str) -> BinaryWord {
    s.parse().expect("binary word")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing_and_prefixes() {
        let w = word("abb");
        assert_eq!(w.to_string(), "abb");
        assert!(word("ab").is_prefix_of(&w));
        assert_eq!(w.strip_prefix(&word("a")), Some(word("bb")));
        assert_eq!(w.strip_prefix(&word("b")), None);
        assert_eq!(w.flip(0), word("bbb"));
        assert!("abc".parse::<BinaryWord>().is_err());
        assert_eq!(BinaryWord::from_edges(&w.edges()), w);
    }
}
