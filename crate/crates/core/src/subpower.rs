//! Subuniverses of finite powers `A^m` with tuples packed into integer keys.
//!
//! Generation exploits a group operation when one is present: the basic
//! operations are then classified against it and, if every one is covered
//! (constants, the inverse, endomorphisms, maps multiplicative in each
//! argument), the subuniverse is the subgroup generated by a small basis that
//! is extended coset by coset. Otherwise the generic semi-naive closure runs.

use rustc_hash::FxHashSet;

use crate::algebra::FiniteAlgebra;
use crate::closure::{close_tuples, ClosureOptions, ClosureStatus};
use crate::error::{Error, Result};
use crate::reduct::GroupReduct;

/// Tuples over `{0,…,n−1}` of fixed width as `u64`, coordinate 0 most significant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Packing {
    width: usize,
    bits: u32,
}

impl Packing {
    pub fn new(n: usize, width: usize) -> Result<Self> {
        let bits = (usize::BITS - n.saturating_sub(1).leading_zeros()).max(1);
        if width as u32 * bits > 64 {
            return Err(Error::CapExceeded {
                what: "packed tuple width in bits",
                requested: (width as u128) * bits as u128,
                cap: 64,
            });
        }
        Ok(Packing { width, bits })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn total_bits(&self) -> u32 {
        self.width as u32 * self.bits
    }

    fn shift(&self, c: usize) -> u32 {
        self.bits * (self.width - 1 - c) as u32
    }

    pub fn encode(&self, tuple: &[u32]) -> u64 {
        tuple.iter().fold(0u64, |k, &v| (k << self.bits) | v as u64)
    }

    pub fn get(&self, key: u64, c: usize) -> u32 {
        ((key >> self.shift(c)) & ((1u64 << self.bits) - 1)) as u32
    }

    pub fn decode_into(&self, key: u64, out: &mut [u32]) {
        for (c, slot) in out.iter_mut().enumerate() {
            *slot = self.get(key, c);
        }
    }

    pub fn decode(&self, key: u64) -> Vec<u32> {
        let mut v = vec![0; self.width];
        self.decode_into(key, &mut v);
        v
    }
}

#[derive(Debug, Clone)]
enum KeySet {
    Dense(Vec<u64>),
    Sparse(FxHashSet<u64>),
}

impl KeySet {
    fn new(bits: u32) -> Self {
        if bits <= 28 {
            KeySet::Dense(vec![0; ((1usize << bits) / 64).max(1)])
        } else {
            KeySet::Sparse(FxHashSet::default())
        }
    }

    fn contains(&self, k: u64) -> bool {
        match self {
            KeySet::Dense(b) => b[(k / 64) as usize] >> (k % 64) & 1 == 1,
            KeySet::Sparse(s) => s.contains(&k),
        }
    }

    fn insert(&mut self, k: u64) -> bool {
        match self {
            KeySet::Dense(b) => {
                let w = &mut b[(k / 64) as usize];
                let bit = 1u64 << (k % 64);
                let fresh = *w & bit == 0;
                *w |= bit;
                fresh
            }
            KeySet::Sparse(s) => s.insert(k),
        }
    }
}

/// How a subpower was generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Subgroup of the power of a group reduct, extended from a basis.
    Group { basis: usize },
    /// Semi-naive closure under every operation.
    Generic,
}

/// A subuniverse of `A^width`, elements in discovery order.
#[derive(Debug, Clone)]
pub struct Subpower {
    packing: Packing,
    keys: Vec<u64>,
    set: KeySet,
    strategy: Strategy,
}

impl Subpower {
    fn empty(packing: Packing, strategy: Strategy) -> Self {
        Subpower { packing, keys: Vec::new(), set: KeySet::new(packing.total_bits()), strategy }
    }

    fn insert(&mut self, k: u64, cap: usize) -> Result<bool> {
        if self.set.insert(k) {
            self.keys.push(k);
            if self.keys.len() > cap {
                return Err(Error::CapExceeded {
                    what: "generated subpower",
                    requested: self.keys.len() as u128,
                    cap: cap as u128,
                });
            }
            return Ok(true);
        }
        Ok(false)
    }

    pub fn packing(&self) -> Packing {
        self.packing
    }

    pub fn width(&self) -> usize {
        self.packing.width
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[u64] {
        &self.keys
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn contains(&self, tuple: &[u32]) -> bool {
        tuple.len() == self.width() && self.set.contains(self.packing.encode(tuple))
    }

    pub fn contains_key(&self, k: u64) -> bool {
        self.set.contains(k)
    }

    pub fn tuples(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        self.keys.iter().map(|&k| self.packing.decode(k))
    }
}

enum Role {
    GroupOp,
    Constant,
    Inverse,
    Endomorphism,
    Bimultiplicative,
}

fn classify(a: &FiniteAlgebra, g: &GroupReduct) -> Option<Vec<Role>> {
    let n = a.size();
    let sig = a.signature();
    let mul = |x, y| g.mul(a, x, y);
    (0..sig.len())
        .map(|s| {
            let t = a.table(s);
            match sig.arity(s) {
                _ if s == g.op => Some(Role::GroupOp),
                0 => Some(Role::Constant),
                1 if (0..n).all(|x| t[x] as usize == g.inverse[x]) => Some(Role::Inverse),
                1 if (0..n).all(|x| (0..n).all(|y| t[mul(x, y)] as usize == mul(t[x] as usize, t[y] as usize))) => {
                    Some(Role::Endomorphism)
                }
                2 => {
                    let f = |x: usize, y: usize| t[x * n + y] as usize;
                    let ok = (0..n).all(|x| {
                        (0..n).all(|y| {
                            (0..n).all(|z| f(mul(x, y), z) == mul(f(x, z), f(y, z)) && f(x, mul(y, z)) == mul(f(x, y), f(x, z)))
                        })
                    });
                    ok.then_some(Role::Bimultiplicative)
                }
                _ => None,
            }
        })
        .collect()
}

struct Ops<'a> {
    a: &'a FiniteAlgebra,
    p: Packing,
    buf: Vec<u32>,
}

impl Ops<'_> {
    fn unary(&mut self, s: usize, x: u64) -> u64 {
        let t = self.a.table(s);
        for c in 0..self.p.width {
            self.buf[c] = t[self.p.get(x, c) as usize];
        }
        self.p.encode(&self.buf)
    }

    fn binary(&mut self, s: usize, x: u64, y: u64) -> u64 {
        let t = self.a.table(s);
        let n = self.a.size();
        let mut k = 0u64;
        for c in 0..self.p.width {
            let v = t[self.p.get(x, c) as usize * n + self.p.get(y, c) as usize];
            k = (k << self.p.bits) | v as u64;
        }
        k
    }
}

/// The subuniverse of `A^width` generated by `gens`, failing once it exceeds `cap` elements.
pub fn subpower(a: &FiniteAlgebra, width: usize, gens: &[Vec<u32>], cap: usize) -> Result<Subpower> {
    let packing = Packing::new(a.size(), width)?;
    for g in gens {
        if g.len() != width {
            return Err(Error::precondition(format!("generator of width {} in a power of width {width}", g.len())));
        }
        if let Some(&x) = g.iter().find(|&&x| x as usize >= a.size()) {
            return Err(Error::ElementOutOfRange { element: x as usize, size: a.size() });
        }
    }
    if let Some(g) = GroupReduct::detect(a) {
        if let Some(roles) = classify(a, &g) {
            return group_subpower(a, &g, &roles, packing, gens, cap);
        }
    }
    generic_subpower(a, packing, gens, cap)
}

fn generic_subpower(a: &FiniteAlgebra, packing: Packing, gens: &[Vec<u32>], cap: usize) -> Result<Subpower> {
    let coords = vec![a; packing.width];
    let cl = close_tuples(&coords, gens, &ClosureOptions { max_elements: cap, stop: None })?;
    if cl.status() == ClosureStatus::CapReached {
        return Err(Error::CapExceeded { what: "generated subpower", requested: cl.len() as u128 + 1, cap: cap as u128 });
    }
    let mut sp = Subpower::empty(packing, Strategy::Generic);
    for t in cl.iter() {
        sp.insert(packing.encode(t), cap)?;
    }
    Ok(sp)
}

fn group_subpower(
    a: &FiniteAlgebra,
    g: &GroupReduct,
    roles: &[Role],
    packing: Packing,
    gens: &[Vec<u32>],
    cap: usize,
) -> Result<Subpower> {
    let mut sp = Subpower::empty(packing, Strategy::Group { basis: 0 });
    let mut ops = Ops { a, p: packing, buf: vec![0; packing.width] };
    let mut pending: Vec<u64> = gens.iter().map(|t| packing.encode(t)).collect();
    for (s, role) in roles.iter().enumerate() {
        if let Role::Constant = role {
            pending.push(packing.encode(&vec![a.table(s)[0]; packing.width]));
        }
    }
    let mut basis: Vec<u64> = Vec::new();
    // basis elements (and ordered pairs of them) already pushed through the derived operations
    let mut derived_upto = 0;
    loop {
        for k in std::mem::take(&mut pending) {
            if !sp.contains_key(k) {
                basis.push(k);
                extend(&mut sp, &mut ops, g, &basis, k, cap)?;
            }
        }
        if derived_upto == basis.len() {
            break;
        }
        let m = basis.len();
        for (s, role) in roles.iter().enumerate() {
            match role {
                Role::Endomorphism => {
                    for &b in &basis[derived_upto..m] {
                        pending.push(ops.unary(s, b));
                    }
                }
                Role::Bimultiplicative => {
                    for i in 0..m {
                        for j in 0..m {
                            if i >= derived_upto || j >= derived_upto {
                                pending.push(ops.binary(s, basis[i], basis[j]));
                            }
                        }
                    }
                }
                _ => {}
            }
        }
        derived_upto = m;
    }
    sp.strategy = Strategy::Group { basis: basis.len() };
    Ok(sp)
}

/// Replaces the subgroup `H` held in `sp` by `⟨H, x⟩`.
fn extend(sp: &mut Subpower, ops: &mut Ops<'_>, g: &GroupReduct, basis: &[u64], x: u64, cap: usize) -> Result<()> {
    let op = g.op;
    if sp.is_empty() {
        // ⟨x⟩ = {x, x², …}, which ends at the identity
        let mut y = x;
        while sp.insert(y, cap)? {
            y = ops.binary(op, y, x);
        }
        if basis.len() == 1 {
            return Ok(());
        }
    }
    if g.abelian {
        // ⟨H, x⟩ is the disjoint union of the cosets H + t·x for t below the order of x mod H
        let base = sp.len();
        let mut shift = x;
        while !sp.contains_key(shift) {
            for i in 0..base {
                let h = sp.keys[i];
                let y = ops.binary(op, h, shift);
                sp.insert(y, cap)?;
            }
            shift = ops.binary(op, shift, x);
        }
        return Ok(());
    }
    // right-multiply everything by the new generator, then close new elements under the whole basis
    let old = sp.len();
    for i in 0..old {
        let y = ops.binary(op, sp.keys[i], x);
        sp.insert(y, cap)?;
    }
    let mut i = old;
    while i < sp.len() {
        let e = sp.keys[i];
        for &b in basis {
            let y = ops.binary(op, e, b);
            sp.insert(y, cap)?;
        }
        i += 1;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    fn generic(a: &FiniteAlgebra, width: usize, gens: &[Vec<u32>]) -> Vec<u64> {
        let p = Packing::new(a.size(), width).unwrap();
        let mut k: Vec<u64> = generic_subpower(a, p, gens, usize::MAX).unwrap().keys().to_vec();
        k.sort_unstable();
        k
    }

    fn fast(a: &FiniteAlgebra, width: usize, gens: &[Vec<u32>]) -> (Vec<u64>, Strategy) {
        let sp = subpower(a, width, gens, usize::MAX).unwrap();
        let mut k = sp.keys().to_vec();
        k.sort_unstable();
        (k, sp.strategy())
    }

    #[test]
    fn packing_round_trip() {
        let p = Packing::new(6, 4).unwrap();
        let t = vec![5, 0, 3, 1];
        assert_eq!(p.decode(p.encode(&t)), t);
        assert!(Packing::new(256, 9).is_err());
    }

    #[test]
    fn group_strategy_matches_generic() {
        let cases: Vec<(FiniteAlgebra, Vec<Vec<u32>>)> = vec![
            (zoo::symmetric_group_3(), vec![vec![1, 3, 0], vec![3, 3, 5]]),
            (zoo::dihedral_group(4), vec![vec![1, 4, 0, 2], vec![4, 1, 5, 5]]),
            (zoo::z_mod(6), vec![vec![2, 3], vec![1, 1]]),
            (zoo::ring_z(4), vec![vec![2, 1, 0]]),
            (zoo::ring_upper_triangular_z2(), vec![vec![2, 4], vec![1, 6]]),
            (zoo::quaternion_group(), vec![]),
        ];
        for (a, gens) in cases {
            let width = gens.first().map_or(2, Vec::len);
            let (keys, strategy) = fast(&a, width, &gens);
            assert!(matches!(strategy, Strategy::Group { .. }), "{}", a.name());
            assert_eq!(keys, generic(&a, width, &gens), "{}", a.name());
        }
    }

    #[test]
    fn lattices_use_generic() {
        let (keys, strategy) = fast(&zoo::lattice_2(), 2, &[vec![0, 1], vec![1, 0]]);
        assert_eq!(strategy, Strategy::Generic);
        assert_eq!(keys.len(), 4);
    }

    #[test]
    fn cap_is_an_error() {
        let z8 = zoo::ring_z(8);
        let err = subpower(&z8, 3, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], 100).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
    }
}
