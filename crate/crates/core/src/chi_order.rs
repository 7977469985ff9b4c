//! Left/right words χ, the permutation s_χ they induce, and the χ-order.
//!
//! All positions in this module are 1-based.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn as_char(self) -> char {
        match self {
            Side::Left => 'l',
            Side::Right => 'r',
        }
    }
}

/// A nonempty word over `{l, r}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChiMap {
    sides: Vec<Side>,
}

impl ChiMap {
    pub fn new(sides: Vec<Side>) -> Result<Self> {
        if sides.is_empty() {
            return Err(Error::Parse("chi map must be nonempty".into()));
        }
        Ok(ChiMap { sides })
    }

    pub fn constant(side: Side, n: usize) -> Result<Self> {
        ChiMap::new(vec![side; n])
    }

    /// All `2^n` maps of length `n`, in lexicographic order (`l < r`).
    pub fn all(n: usize) -> Vec<ChiMap> {
        assert!(n >= 1 && n < usize::BITS as usize);
        (0..1usize << n)
            .map(|mask| {
                let sides = (0..n)
                    .map(|i| if mask >> (n - 1 - i) & 1 == 1 { Side::Right } else { Side::Left })
                    .collect();
                ChiMap { sides }
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.sides.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sides(&self) -> &[Side] {
        &self.sides
    }

    /// Side at 1-based position `i`.
    pub fn side(&self, i: usize) -> Result<Side> {
        self.check_index(i)?;
        Ok(self.sides[i - 1])
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.len() {
            return Err(Error::IndexOutOfRange { index: i, n: self.len() });
        }
        Ok(())
    }

    /// s_χ: left positions in increasing order, then right positions in
    /// decreasing order.
    pub fn s_chi(&self) -> Perm {
        let lefts = (1..=self.len()).filter(|&i| self.sides[i - 1] == Side::Left);
        let rights = (1..=self.len()).rev().filter(|&i| self.sides[i - 1] == Side::Right);
        Perm { images: lefts.chain(rights).collect() }
    }

    /// The positions listed in χ-order (equal to `s_chi().images()`).
    pub fn chi_order(&self) -> Vec<usize> {
        self.s_chi().images
    }

    /// `i ≺_χ j`.
    pub fn less(&self, i: usize, j: usize) -> Result<bool> {
        self.check_index(i)?;
        self.check_index(j)?;
        let inv = self.s_chi().inverse();
        Ok(inv.apply(i) < inv.apply(j))
    }

    /// χ restricted to `v`, relabelled onto `1..=|v|` preserving order.
    pub fn restrict(&self, v: &[usize]) -> Result<ChiMap> {
        if v.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut v = v.to_vec();
        v.sort_unstable();
        v.dedup();
        for &i in &v {
            self.check_index(i)?;
        }
        Ok(ChiMap { sides: v.iter().map(|&i| self.sides[i - 1]).collect() })
    }

    /// Concatenation, used to build χ̂ for grouped arguments.
    pub fn repeat_each(&self, counts: &[usize]) -> Result<ChiMap> {
        if counts.len() != self.len() {
            return Err(Error::SizeMismatch { expected: self.len(), got: counts.len() });
        }
        let sides = self
            .sides
            .iter()
            .zip(counts)
            .flat_map(|(&s, &k)| std::iter::repeat_n(s, k))
            .collect();
        ChiMap::new(sides)
    }
}

impl fmt::Display for ChiMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.sides.iter().map(|s| s.as_char()).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for ChiMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChiMap({self})")
    }
}

impl FromStr for ChiMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let sides = s
            .chars()
            .map(|c| match c {
                'l' => Ok(Side::Left),
                'r' => Ok(Side::Right),
                other => Err(Error::Parse(format!("invalid chi symbol '{other}' in '{s}'"))),
            })
            .collect::<Result<Vec<_>>>()?;
        ChiMap::new(sides)
    }
}

impl Serialize for ChiMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ChiMap {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

/// A permutation of `1..=n`, stored by its images: `images[k-1] = s(k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x == 0 || x > n || seen[x - 1] {
                return Err(Error::Parse(format!("{images:?} is not a permutation")));
            }
            seen[x - 1] = true;
        }
        Ok(Perm { images })
    }

    pub fn identity(n: usize) -> Self {
        Perm { images: (1..=n).collect() }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, k: usize) -> usize {
        self.images[k - 1]
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.len()];
        for (k, &x) in self.images.iter().enumerate() {
            inv[x - 1] = k + 1;
        }
        Perm { images: inv }
    }

    /// `(self ∘ other)(k) = self(other(k))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm { images: other.images.iter().map(|&k| self.apply(k)).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &x)| x == k + 1)
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Perm::new(Vec::<usize>::deserialize(deserializer)?).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi(s: &str) -> ChiMap {
        s.parse().unwrap()
    }

    #[test]
    fn s_chi_examples() {
        assert_eq!(chi("lllrrl").s_chi().images(), &[1, 2, 3, 6, 5, 4]);
        assert!(chi("lll").s_chi().is_identity());
        assert_eq!(chi("rr").s_chi().images(), &[2, 1]);
    }

    #[test]
    fn chi_less_examples() {
        assert!(!chi("lr").less(2, 1).unwrap());
        assert!(chi("rr").less(2, 1).unwrap());
        assert!(chi("lllrrl").less(6, 5).unwrap());
        assert!(matches!(chi("lr").less(3, 1), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn restrict_examples() {
        assert_eq!(chi("llrr").restrict(&[2, 3]).unwrap(), chi("lr"));
        assert_eq!(chi("lllrrl").restrict(&[1, 4]).unwrap(), chi("lr"));
        assert_eq!(chi("lr").restrict(&[1, 2]).unwrap(), chi("lr"));
        assert!(matches!(chi("lr").restrict(&[]), Err(Error::EmptySet)));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("x".parse::<ChiMap>().is_err());
        assert!("".parse::<ChiMap>().is_err());
        assert_eq!(chi("lrl").to_string(), "lrl");
    }

    #[test]
    fn chi_less_is_strict_total_order() {
        for n in 1..=6 {
            for c in ChiMap::all(n) {
                for i in 1..=n {
                    assert!(!c.less(i, i).unwrap());
                    for j in 1..=n {
                        if i != j {
                            assert_ne!(c.less(i, j).unwrap(), c.less(j, i).unwrap());
                        }
                        for k in 1..=n {
                            if c.less(i, j).unwrap() && c.less(j, k).unwrap() {
                                assert!(c.less(i, k).unwrap());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn s_chi_is_bijection_with_inverse() {
        for n in 1..=8 {
            for c in ChiMap::all(n) {
                let s = c.s_chi();
                assert!(Perm::new(s.images().to_vec()).is_ok());
                assert!(s.compose(&s.inverse()).is_identity());
                assert!(s.inverse().compose(&s).is_identity());
            }
        }
    }

    #[test]
    fn perm_json_is_an_array() {
        let s = chi("lllrrl").s_chi();
        assert_eq!(serde_json::to_string(&s).unwrap(), "[1,2,3,6,5,4]");
        let back: Perm = serde_json::from_str("[1,2,3,6,5,4]").unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<Perm>("[1,1]").is_err());
    }
}
