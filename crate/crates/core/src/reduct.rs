//! Recognition of group and ring reducts among the basic operations.

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};

/// Names tried first when looking for a group operation.
const GROUP_NAMES: [&str; 4] = ["+", "mul", "*", "·"];

/// A basic binary operation forming a group on the whole carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupReduct {
    pub op: usize,
    pub identity: usize,
    pub inverse: Vec<usize>,
    pub abelian: bool,
}

fn binary(a: &FiniteAlgebra, s: usize, x: usize, y: usize) -> usize {
    a.table(s)[x * a.size() + y] as usize
}

fn is_associative(a: &FiniteAlgebra, s: usize) -> bool {
    let n = a.size();
    (0..n).all(|x| {
        (0..n).all(|y| {
            let xy = binary(a, s, x, y);
            (0..n).all(|z| binary(a, s, xy, z) == binary(a, s, x, binary(a, s, y, z)))
        })
    })
}

impl GroupReduct {
    /// Checks whether basic operation `s` is a group multiplication.
    pub fn for_symbol(a: &FiniteAlgebra, s: usize) -> Option<Self> {
        if a.signature().arity(s) != 2 {
            return None;
        }
        let n = a.size();
        let identity = (0..n).find(|&e| (0..n).all(|x| binary(a, s, e, x) == x && binary(a, s, x, e) == x))?;
        let mut inverse = Vec::with_capacity(n);
        for x in 0..n {
            inverse.push((0..n).find(|&y| binary(a, s, x, y) == identity)?);
        }
        if !is_associative(a, s) {
            return None;
        }
        let abelian = (0..n).all(|x| (0..n).all(|y| binary(a, s, x, y) == binary(a, s, y, x)));
        Some(GroupReduct { op: s, identity, inverse, abelian })
    }

    /// The first group operation, preferring the conventional names.
    pub fn detect(a: &FiniteAlgebra) -> Option<Self> {
        let sig = a.signature();
        let named = GROUP_NAMES.iter().filter_map(|n| sig.index_of(n));
        let rest = 0..sig.len();
        let mut seen = vec![false; sig.len()];
        for s in named.chain(rest) {
            if std::mem::replace(&mut seen[s], true) {
                continue;
            }
            if let Some(g) = GroupReduct::for_symbol(a, s) {
                return Some(g);
            }
        }
        None
    }

    pub fn require(a: &FiniteAlgebra) -> Result<Self> {
        GroupReduct::detect(a)
            .ok_or_else(|| Error::MissingReduct(format!("`{}` has no group operation", a.name())))
    }

    pub fn mul(&self, a: &FiniteAlgebra, x: usize, y: usize) -> usize {
        binary(a, self.op, x, y)
    }

    /// `x⁻¹ y⁻¹ x y`
    pub fn commutator(&self, a: &FiniteAlgebra, x: usize, y: usize) -> usize {
        let l = self.mul(a, self.inverse[x], self.inverse[y]);
        self.mul(a, l, self.mul(a, x, y))
    }

    /// Subgroup generated by `gens` (always contains the identity).
    pub fn subgroup(&self, a: &FiniteAlgebra, gens: &[usize]) -> Vec<bool> {
        let mut member = vec![false; a.size()];
        member[self.identity] = true;
        let mut list = vec![self.identity];
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            for &g in gens {
                let y = self.mul(a, x, g);
                if !member[y] {
                    member[y] = true;
                    list.push(y);
                }
            }
            i += 1;
        }
        member
    }

    /// The coset partition of a normal subgroup: `x ~ y` iff `x⁻¹y ∈ N`.
    pub fn coset_labels(&self, a: &FiniteAlgebra, normal: &[bool]) -> Vec<usize> {
        let n = a.size();
        let mut label = vec![usize::MAX; n];
        for x in 0..n {
            if label[x] == usize::MAX {
                for y in x..n {
                    if normal[self.mul(a, self.inverse[x], y)] {
                        label[y] = x;
                    }
                }
            }
        }
        label
    }
}

/// An abelian group operation and a second binary operation that is
/// associative and distributes over it on both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingReduct {
    pub add: GroupReduct,
    pub mul: usize,
}

impl RingReduct {
    pub fn detect(a: &FiniteAlgebra) -> Option<Self> {
        let add = GroupReduct::detect(a).filter(|g| g.abelian)?;
        let sig = a.signature();
        let n = a.size();
        let plus = |x, y| binary(a, add.op, x, y);
        let candidates = ["*", "·", "mul"].iter().filter_map(|m| sig.index_of(m)).chain(0..sig.len());
        for s in candidates {
            if s == add.op || sig.arity(s) != 2 || !is_associative(a, s) {
                continue;
            }
            let times = |x, y| binary(a, s, x, y);
            let distributes = (0..n).all(|x| {
                (0..n).all(|y| {
                    (0..n).all(|z| {
                        times(x, plus(y, z)) == plus(times(x, y), times(x, z))
                            && times(plus(x, y), z) == plus(times(x, z), times(y, z))
                    })
                })
            });
            if distributes {
                return Some(RingReduct { add, mul: s });
            }
        }
        None
    }

    pub fn require(a: &FiniteAlgebra) -> Result<Self> {
        RingReduct::detect(a).ok_or_else(|| Error::MissingReduct(format!("`{}` has no ring operations", a.name())))
    }

    pub fn add(&self, a: &FiniteAlgebra, x: usize, y: usize) -> usize {
        binary(a, self.add.op, x, y)
    }

    pub fn times(&self, a: &FiniteAlgebra, x: usize, y: usize) -> usize {
        binary(a, self.mul, x, y)
    }

    /// Additive subgroup spanned by `gens`.
    pub fn span(&self, a: &FiniteAlgebra, gens: &[usize]) -> Vec<bool> {
        self.add.subgroup(a, gens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn detects_groups() {
        let s3 = zoo::symmetric_group_3();
        let g = GroupReduct::detect(&s3).unwrap();
        assert_eq!(g.op, s3.symbol("mul").unwrap());
        assert_eq!(g.identity, 0);
        assert!(!g.abelian);
        assert!(GroupReduct::detect(&zoo::lattice_2()).is_none());
        assert!(GroupReduct::detect(&zoo::z_mod(4)).unwrap().abelian);
    }

    #[test]
    fn detects_rings() {
        let r = RingReduct::detect(&zoo::ring_z(8)).unwrap();
        assert_eq!(r.times(&zoo::ring_z(8), 2, 2), 4);
        assert!(RingReduct::detect(&zoo::ring_upper_triangular_z2()).is_some());
        assert!(RingReduct::detect(&zoo::z_mod(4)).is_none());
    }

    #[test]
    fn commutator_subgroup_of_s3() {
        let s3 = zoo::symmetric_group_3();
        let g = GroupReduct::detect(&s3).unwrap();
        let comms: Vec<usize> = (0..6).flat_map(|x| (0..6).map(move |y| (x, y))).map(|(x, y)| g.commutator(&s3, x, y)).collect();
        let sub = g.subgroup(&s3, &comms);
        assert_eq!(sub, vec![true, false, false, true, true, false]);
    }
}
