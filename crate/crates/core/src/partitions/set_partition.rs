use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::chi_order::Perm;
use crate::error::{Error, Result};

/// A partition of `{1, …, n}` in canonical form: blocks sorted by their
/// minimum, elements ascending. Equality, ordering and hashing are structural
/// on the block lists.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetPartition {
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Builds a partition of `{1..n}` from 1-based blocks in any order.
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::Parse("empty block".into()));
            }
            for &x in block {
                if x == 0 || x > n {
                    return Err(Error::IndexOutOfRange { index: x, n });
                }
                if seen[x - 1] {
                    return Err(Error::Parse(format!("element {x} appears twice")));
                }
                seen[x - 1] = true;
            }
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::Parse(format!("element {} is not covered", missing + 1)));
        }
        Ok(Self::canonical(blocks))
    }

    fn canonical(mut blocks: Vec<Vec<usize>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        SetPartition { blocks }
    }

    /// From a label per position (0-based positions, arbitrary labels).
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut slot: Vec<Option<usize>> = Vec::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (pos, &lab) in labels.iter().enumerate() {
            if lab >= slot.len() {
                slot.resize(lab + 1, None);
            }
            let idx = *slot[lab].get_or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[idx].push(pos + 1);
        }
        // first-occurrence order is already the canonical order
        SetPartition { blocks }
    }

    /// `0_n`: all singletons.
    pub fn zero(n: usize) -> Self {
        SetPartition { blocks: (1..=n).map(|i| vec![i]).collect() }
    }

    /// `1_n`: a single block.
    pub fn one(n: usize) -> Self {
        if n == 0 {
            return SetPartition { blocks: Vec::new() };
        }
        SetPartition { blocks: vec![(1..=n).collect()] }
    }

    /// The interval partition with consecutive blocks of the given sizes.
    pub fn intervals(sizes: &[usize]) -> Result<Self> {
        let mut blocks = Vec::with_capacity(sizes.len());
        let mut start = 1;
        for &k in sizes {
            if k == 0 {
                return Err(Error::Precondition("empty segment".into()));
            }
            blocks.push((start..start + k).collect());
            start += k;
        }
        Ok(SetPartition { blocks })
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Canonical block index for each 0-based position.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.n()];
        for (b, block) in self.blocks.iter().enumerate() {
            for &x in block {
                labels[x - 1] = b;
            }
        }
        labels
    }

    /// `i ∼_π j` for 1-based `i`, `j`.
    pub fn same_block(&self, i: usize, j: usize) -> bool {
        self.blocks.iter().any(|b| b.contains(&i) && b.contains(&j))
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    pub fn is_one(&self) -> bool {
        self.blocks.len() <= 1
    }

    /// Refinement order: every block of `self` lies inside a block of `other`.
    pub fn leq(&self, other: &SetPartition) -> bool {
        if self.n() != other.n() {
            return false;
        }
        let labels = other.labels();
        self.blocks.iter().all(|b| b.iter().all(|&x| labels[x - 1] == labels[b[0] - 1]))
    }

    pub fn is_noncrossing(&self) -> bool {
        let labels = self.labels();
        let n = labels.len();
        // a < b < c < d with a ~ c, b ~ d, a ≁ b
        for a in 0..n {
            for c in a + 2..n {
                if labels[a] != labels[c] {
                    continue;
                }
                for b in a + 1..c {
                    if labels[b] == labels[a] {
                        continue;
                    }
                    if (c + 1..n).any(|d| labels[d] == labels[b]) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `s·π`: replaces every element `i` by `s(i)`.
    pub fn apply_perm(&self, s: &Perm) -> Result<SetPartition> {
        if s.len() != self.n() {
            return Err(Error::SizeMismatch { expected: self.n(), got: s.len() });
        }
        let blocks = self.blocks.iter().map(|b| b.iter().map(|&x| s.apply(x)).collect()).collect();
        Ok(Self::canonical(blocks))
    }

    /// Join in the lattice of all partitions.
    pub fn join(&self, other: &SetPartition) -> Result<SetPartition> {
        let n = self.n();
        if other.n() != n {
            return Err(Error::SizeMismatch { expected: n, got: other.n() });
        }
        let mut uf = UnionFind::new(n);
        for b in self.blocks.iter().chain(other.blocks.iter()) {
            for w in b.windows(2) {
                uf.union(w[0] - 1, w[1] - 1);
            }
        }
        Ok(uf.into_partition())
    }

    /// Meet in the lattice of all partitions.
    pub fn meet(&self, other: &SetPartition) -> Result<SetPartition> {
        let n = self.n();
        if other.n() != n {
            return Err(Error::SizeMismatch { expected: n, got: other.n() });
        }
        let (a, b) = (self.labels(), other.labels());
        let keyed: Vec<usize> = (0..n).map(|i| a[i] * n + b[i]).collect();
        Ok(SetPartition::from_labels(&keyed))
    }

    /// π restricted to the 1-based subset `w`, relabelled onto `1..=|w|`
    /// preserving order.
    pub fn restrict(&self, w: &[usize]) -> SetPartition {
        let labels = self.labels();
        let mut w = w.to_vec();
        w.sort_unstable();
        let sub: Vec<usize> = w.iter().map(|&x| labels[x - 1]).collect();
        SetPartition::from_labels(&sub)
    }

    /// Smallest non-crossing partition above `self`: crossing blocks are
    /// merged until none remain.
    pub fn nc_closure(&self) -> SetPartition {
        let n = self.n();
        let mut current = self.clone();
        loop {
            let labels = current.labels();
            let mut uf = UnionFind::new(n);
            for b in current.blocks() {
                for w in b.windows(2) {
                    uf.union(w[0] - 1, w[1] - 1);
                }
            }
            let mut merged = false;
            'scan: for a in 0..n {
                for b in a + 1..n {
                    if labels[b] == labels[a] {
                        continue;
                    }
                    for c in b + 1..n {
                        if labels[c] != labels[a] {
                            continue;
                        }
                        if (c + 1..n).any(|d| labels[d] == labels[b]) {
                            uf.union(a, b);
                            merged = true;
                            break 'scan;
                        }
                    }
                }
            }
            if !merged {
                return current;
            }
            current = uf.into_partition();
        }
    }

    /// Bitmask of the pairs `{i < j}` lying in a common block.
    pub(crate) fn pair_mask(&self) -> u128 {
        let n = self.n();
        assert!(n * n.saturating_sub(1) / 2 <= 128, "pair mask needs n <= 16");
        let labels = self.labels();
        let mut mask = 0u128;
        let mut bit = 0;
        for i in 0..n {
            for j in i + 1..n {
                if labels[i] == labels[j] {
                    mask |= 1 << bit;
                }
                bit += 1;
            }
        }
        mask
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                f.write_str("|")?;
            }
            let items: Vec<String> = b.iter().map(usize::to_string).collect();
            f.write_str(&items.join(","))?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for SetPartition {
    type Err = Error;

    /// Parses `{1,4|2,5|3,6}`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("partition '{s}' must be wrapped in braces")))?;
        let mut blocks = Vec::new();
        if !inner.trim().is_empty() {
            for part in inner.split('|') {
                let block = part
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad element '{t}' in '{s}'")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                blocks.push(block);
            }
        }
        let n = blocks.iter().map(Vec::len).sum();
        SetPartition::new(n, blocks)
    }
}

impl Serialize for SetPartition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.blocks.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SetPartition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let blocks = Vec::<Vec<usize>>::deserialize(deserializer)?;
        let n = blocks.iter().map(Vec::len).sum();
        SetPartition::new(n, blocks).map_err(serde::de::Error::custom)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    fn into_partition(mut self) -> SetPartition {
        let labels: Vec<usize> = (0..self.parent.len()).map(|x| self.find(x)).collect();
        SetPartition::from_labels(&labels)
    }
}
