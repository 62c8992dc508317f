//! Partitions of `{0,…,n−1}` and the disjoint-set forest used to build them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Disjoint-set forest with union by size and path compression.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
    blocks: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            blocks: n,
        }
    }

    /// Seeds the forest with the blocks of an existing partition.
    pub fn from_partition(p: &Partition) -> Self {
        let mut uf = UnionFind::new(p.len());
        for i in 0..p.len() {
            uf.union(i, p.rep(i));
        }
        uf
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn block_count(&self) -> usize {
        self.blocks
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] as usize != root {
            root = self.parent[root] as usize;
        }
        let mut cur = x;
        while self.parent[cur] as usize != root {
            let next = self.parent[cur] as usize;
            self.parent[cur] = root as u32;
            cur = next;
        }
        root
    }

    /// Merges the blocks of `a` and `b`; returns `true` when they were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big as u32;
        self.size[big] += self.size[small];
        self.blocks -= 1;
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    pub fn to_partition(&mut self) -> Partition {
        let n = self.len();
        let mut least = vec![u32::MAX; n];
        let mut rep = vec![0u32; n];
        for i in 0..n {
            let r = self.find(i);
            if least[r] == u32::MAX {
                least[r] = i as u32;
            }
            rep[i] = least[r];
        }
        Partition { rep }
    }
}

/// An equivalence relation on `{0,…,n−1}`, stored as the map sending every
/// element to the least element of its block.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    rep: Vec<u32>,
}

impl Partition {
    /// The equality relation `0`.
    pub fn discrete(n: usize) -> Self {
        Partition {
            rep: (0..n as u32).collect(),
        }
    }

    /// The all relation `1`.
    pub fn total(n: usize) -> Self {
        Partition { rep: vec![0; n] }
    }

    /// Elements with equal labels share a block.
    pub fn from_labels<T: Eq + std::hash::Hash>(labels: &[T]) -> Self {
        let mut first: std::collections::HashMap<&T, u32> = std::collections::HashMap::new();
        let rep = labels
            .iter()
            .enumerate()
            .map(|(i, l)| *first.entry(l).or_insert(i as u32))
            .collect();
        Partition { rep }
    }

    /// Builds a partition from a list of blocks; elements not mentioned form singletons.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut uf = UnionFind::new(n);
        for block in blocks {
            for &x in block {
                if x >= n {
                    return Err(Error::ElementOutOfRange { element: x, size: n });
                }
                if seen[x] {
                    return Err(Error::Parse(format!("element {x} occurs in two blocks")));
                }
                seen[x] = true;
            }
            for w in block.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        Ok(uf.to_partition())
    }

    /// Smallest equivalence containing the given pairs.
    pub fn generated_by(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut uf = UnionFind::new(n);
        for &(a, b) in pairs {
            for x in [a, b] {
                if x >= n {
                    return Err(Error::ElementOutOfRange { element: x, size: n });
                }
            }
            uf.union(a, b);
        }
        Ok(uf.to_partition())
    }

    pub fn len(&self) -> usize {
        self.rep.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rep.is_empty()
    }

    #[inline]
    pub fn rep(&self, x: usize) -> usize {
        self.rep[x] as usize
    }

    pub fn reps(&self) -> &[u32] {
        &self.rep
    }

    #[inline]
    pub fn related(&self, a: usize, b: usize) -> bool {
        self.rep[a] == self.rep[b]
    }

    pub fn is_discrete(&self) -> bool {
        self.rep.iter().enumerate().all(|(i, &r)| r as usize == i)
    }

    pub fn is_total(&self) -> bool {
        self.rep.iter().all(|&r| r == 0)
    }

    pub fn block_count(&self) -> usize {
        self.rep
            .iter()
            .enumerate()
            .filter(|&(i, &r)| r as usize == i)
            .count()
    }

    /// Index of the block of each element, blocks numbered by least element.
    pub fn block_indices(&self) -> Vec<usize> {
        let mut idx = vec![usize::MAX; self.len()];
        let mut next = 0;
        for i in 0..self.len() {
            let r = self.rep(i);
            if r == i {
                idx[i] = next;
                next += 1;
            } else {
                idx[i] = idx[r];
            }
        }
        idx
    }

    /// Blocks in canonical order: ordered by least element, each sorted.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let idx = self.block_indices();
        let mut blocks = vec![Vec::new(); self.block_count()];
        for (i, &b) in idx.iter().enumerate() {
            blocks[b].push(i);
        }
        blocks
    }

    /// Number of related ordered pairs.
    pub fn pair_count(&self) -> usize {
        self.blocks().iter().map(|b| b.len() * b.len()).sum()
    }

    /// All related ordered pairs `(a,b)`, lexicographically.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let blocks = self.blocks();
        let idx = self.block_indices();
        let mut out = Vec::with_capacity(self.pair_count());
        for a in 0..self.len() {
            for &b in &blocks[idx[a]] {
                out.push((a, b));
            }
        }
        out
    }

    fn check_len(&self, other: &Partition) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::AlgebraMismatch(format!(
                "partitions of {} and {} elements",
                self.len(),
                other.len()
            )));
        }
        Ok(())
    }

    /// `self ⊆ other` as relations.
    pub fn leq(&self, other: &Partition) -> bool {
        self.len() == other.len()
            && (0..self.len()).all(|i| other.related(i, self.rep(i)))
    }

    pub fn meet(&self, other: &Partition) -> Result<Partition> {
        self.check_len(other)?;
        let pairs: Vec<(u32, u32)> = self.rep.iter().zip(&other.rep).map(|(&a, &b)| (a, b)).collect();
        Ok(Partition::from_labels(&pairs))
    }

    pub fn join(&self, other: &Partition) -> Result<Partition> {
        self.check_len(other)?;
        let mut uf = UnionFind::from_partition(self);
        for i in 0..other.len() {
            uf.union(i, other.rep(i));
        }
        Ok(uf.to_partition())
    }

    /// For each `a`, the set `{c : a self b other c}` as a bitmask row.
    fn composite_rows(&self, other: &Partition) -> Vec<Vec<u64>> {
        let n = self.len();
        let words = n.div_ceil(64);
        let other_blocks = other.blocks();
        let other_idx = other.block_indices();
        let mut block_mask = vec![vec![0u64; words]; other_blocks.len()];
        for (b, block) in other_blocks.iter().enumerate() {
            for &x in block {
                block_mask[b][x / 64] |= 1 << (x % 64);
            }
        }
        let self_blocks = self.blocks();
        let self_idx = self.block_indices();
        // a and a' in the same self-block have equal rows
        let mut row_of_block = vec![vec![0u64; words]; self_blocks.len()];
        for (sb, block) in self_blocks.iter().enumerate() {
            let row = &mut row_of_block[sb];
            for &b in block {
                for (w, m) in row.iter_mut().zip(&block_mask[other_idx[b]]) {
                    *w |= m;
                }
            }
        }
        (0..n).map(|a| row_of_block[self_idx[a]].clone()).collect()
    }

    /// Whether `self ∘ other = other ∘ self` as sets of pairs.
    pub fn permutes_with(&self, other: &Partition) -> Result<bool> {
        Ok(self.permutation_witness(other)?.is_none())
    }

    /// A pair in `self ∘ other` but not in `other ∘ self` (or vice versa), if any.
    pub fn permutation_witness(&self, other: &Partition) -> Result<Option<(usize, usize)>> {
        self.check_len(other)?;
        let left = self.composite_rows(other);
        let right = other.composite_rows(self);
        for a in 0..self.len() {
            if left[a] != right[a] {
                for c in 0..self.len() {
                    let l = left[a][c / 64] >> (c % 64) & 1;
                    let r = right[a][c / 64] >> (c % 64) & 1;
                    if l != r {
                        return Ok(Some((a, c)));
                    }
                }
            }
        }
        Ok(None)
    }

    /// The image of the relation under `f`, closed to an equivalence on `{0,…,m−1}`.
    pub fn image(&self, f: &[usize], m: usize) -> Result<Partition> {
        let mut uf = UnionFind::new(m);
        for i in 0..self.len() {
            let (a, b) = (f[i], f[self.rep(i)]);
            if a >= m || b >= m {
                return Err(Error::ElementOutOfRange { element: a.max(b), size: m });
            }
            uf.union(a, b);
        }
        Ok(uf.to_partition())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, block) in self.blocks().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("[")?;
            for (j, x) in block.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.blocks().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let blocks: Vec<Vec<usize>> = Vec::deserialize(d)?;
        let n = blocks.iter().flatten().map(|&x| x + 1).max().unwrap_or(0);
        let covered: usize = blocks.iter().map(Vec::len).sum();
        if covered != n {
            return Err(serde::de::Error::custom(format!(
                "blocks cover {covered} elements but mention elements up to {}",
                n.saturating_sub(1)
            )));
        }
        Partition::from_blocks(n, &blocks).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_reps_are_least_elements() {
        let p = Partition::generated_by(5, &[(4, 2), (3, 1)]).unwrap();
        assert_eq!(p.reps(), &[0, 1, 2, 1, 2]);
        assert_eq!(p.blocks(), vec![vec![0], vec![1, 3], vec![2, 4]]);
        assert_eq!(p.to_string(), "[[0],[1,3],[2,4]]");
    }

    #[test]
    fn join_and_meet_of_mod_two_and_mod_three() {
        let m2 = Partition::from_labels(&(0..6).map(|i| i % 2).collect::<Vec<_>>());
        let m3 = Partition::from_labels(&(0..6).map(|i| i % 3).collect::<Vec<_>>());
        assert!(m2.join(&m3).unwrap().is_total());
        assert!(m2.meet(&m3).unwrap().is_discrete());
    }

    #[test]
    fn non_permuting_partitions_have_a_witness() {
        // {0,1}{2} and {0}{1,2}: 0~1~2 in one order only
        let a = Partition::from_blocks(3, &[vec![0, 1]]).unwrap();
        let b = Partition::from_blocks(3, &[vec![1, 2]]).unwrap();
        assert_eq!(a.permutation_witness(&b).unwrap(), Some((0, 2)));
        assert!(a.permutes_with(&a).unwrap());
    }

    #[test]
    fn serde_round_trip() {
        let p = Partition::from_blocks(4, &[vec![0, 2], vec![1, 3]]).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[[0,2],[1,3]]");
        let q: Partition = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
        assert!(serde_json::from_str::<Partition>("[[0,2]]").is_err());
    }

    #[test]
    fn size_mismatch_is_an_error() {
        assert!(Partition::discrete(2).join(&Partition::discrete(3)).is_err());
    }
}
