use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A noncommutative monomial, stored as its sequence of generator indices.
///
/// The derived `Ord` is degree first, then lexicographic by index, i.e. the
/// deglex order for the identity ranking.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u16>);

impl MultiIndex {
    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn new(letters: &[usize]) -> Self {
        MultiIndex(letters.iter().map(|&g| g as u16).collect())
    }

    pub fn letter(g: usize) -> Self {
        MultiIndex(vec![g as u16])
    }

    pub fn pair(a: usize, b: usize) -> Self {
        MultiIndex(vec![a as u16, b as u16])
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&g| g as usize)
    }

    pub fn get(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.letters().collect()
    }

    pub fn concat(&self, other: &MultiIndex) -> MultiIndex {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        MultiIndex(v)
    }

    pub fn push(&mut self, g: usize) {
        self.0.push(g as u16);
    }

    /// Subword `[start, end)`.
    pub fn slice(&self, start: usize, end: usize) -> MultiIndex {
        MultiIndex(self.0[start..end].to_vec())
    }

    /// Replace the subword `[start, start + len)` by `middle`.
    pub fn splice(&self, start: usize, len: usize, middle: &MultiIndex) -> MultiIndex {
        let mut v = Vec::with_capacity(self.0.len() - len + middle.0.len());
        v.extend_from_slice(&self.0[..start]);
        v.extend_from_slice(&middle.0);
        v.extend_from_slice(&self.0[start + len..]);
        MultiIndex(v)
    }

    /// Apply a generator relabeling `g -> map[g]`.
    pub fn relabel(&self, map: &[usize]) -> MultiIndex {
        MultiIndex(self.0.iter().map(|&g| map[g as usize] as u16).collect())
    }

    pub fn max_letter(&self) -> Option<usize> {
        self.letters().max()
    }

    pub fn render(&self, labels: &[String]) -> String {
        self.letters()
            .map(|g| labels.get(g).cloned().unwrap_or_else(|| format!("#{}", g)))
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Degree-lexicographic order for a total order on the generators.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DeglexOrder {
    /// `rank[g]` is the position of generator `g` in the ascending order.
    rank: Vec<usize>,
}

impl DeglexOrder {
    pub fn identity(d: usize) -> Self {
        DeglexOrder {
            rank: (0..d).collect(),
        }
    }

    /// Build from generators listed smallest first.
    pub fn from_ascending(ascending: &[usize]) -> Result<Self> {
        let d = ascending.len();
        let mut rank = vec![usize::MAX; d];
        for (pos, &g) in ascending.iter().enumerate() {
            if g >= d || rank[g] != usize::MAX {
                return Err(Error::InvalidOrder(format!(
                    "{:?} is not a permutation of 0..{}",
                    ascending, d
                )));
            }
            rank[g] = pos;
        }
        Ok(DeglexOrder { rank })
    }

    pub fn num_generators(&self) -> usize {
        self.rank.len()
    }

    pub fn rank(&self, g: usize) -> usize {
        self.rank[g]
    }

    /// Generators listed smallest first.
    pub fn ascending(&self) -> Vec<usize> {
        let mut out = vec![0; self.rank.len()];
        for (g, &r) in self.rank.iter().enumerate() {
            out[r] = g;
        }
        out
    }

    /// The opposite ranking on generators.
    pub fn reversed(&self) -> Self {
        let d = self.rank.len();
        DeglexOrder {
            rank: self.rank.iter().map(|&r| d - 1 - r).collect(),
        }
    }

    pub fn compare(&self, a: &MultiIndex, b: &MultiIndex) -> Ordering {
        a.degree().cmp(&b.degree()).then_with(|| {
            for (x, y) in a.letters().zip(b.letters()) {
                if x != y {
                    return self.rank[x].cmp(&self.rank[y]);
                }
            }
            Ordering::Equal
        })
    }

    pub fn max<'a>(&self, a: &'a MultiIndex, b: &'a MultiIndex) -> &'a MultiIndex {
        if self.compare(a, b) == Ordering::Less {
            b
        } else {
            a
        }
    }
}

impl Serialize for DeglexOrder {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.ascending().serialize(s)
    }
}

impl<'de> Deserialize<'de> for DeglexOrder {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let asc = Vec::<usize>::deserialize(d)?;
        DeglexOrder::from_ascending(&asc).map_err(serde::de::Error::custom)
    }
}
