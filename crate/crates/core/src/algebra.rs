//! Finite algebras given by operation tables.

use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::partition::Partition;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// An ordered list of operation symbols with arities.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Signature {
    symbols: Vec<Symbol>,
}

impl Signature {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let symbols: Vec<Symbol> = symbols
            .into_iter()
            .map(|(name, arity)| Symbol { name: name.into(), arity })
            .collect();
        for (i, s) in symbols.iter().enumerate() {
            if s.name.is_empty() {
                return Err(Error::Signature("empty symbol name".into()));
            }
            if symbols[..i].iter().any(|t| t.name == s.name) {
                return Err(Error::Signature(format!("duplicate symbol `{}`", s.name)));
            }
        }
        Ok(Signature { symbols })
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn arity(&self, symbol: usize) -> usize {
        self.symbols[symbol].arity
    }

    pub fn name(&self, symbol: usize) -> &str {
        &self.symbols[symbol].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}/{}", s.name, s.arity)?;
        }
        f.write_str(")")
    }
}

/// An algebra on `{0,…,n−1}`. Tables are flat, row-major, last argument fastest.
#[derive(Debug, Clone)]
pub struct FiniteAlgebra {
    name: String,
    size: usize,
    signature: Signature,
    tables: Vec<Vec<u32>>,
    fingerprint: u64,
}

impl PartialEq for FiniteAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.signature == other.signature && self.tables == other.tables
    }
}

impl Eq for FiniteAlgebra {}

fn table_len(size: usize, arity: usize) -> Option<usize> {
    size.checked_pow(arity as u32)
}

impl FiniteAlgebra {
    pub fn new(
        name: impl Into<String>,
        size: usize,
        signature: Signature,
        tables: Vec<Vec<u32>>,
    ) -> Result<Self> {
        let name = name.into();
        let bad = |reason: String| Error::Algebra { name: name.clone(), reason };
        if size == 0 {
            return Err(bad("carrier must be non-empty".into()));
        }
        if size > u32::MAX as usize {
            return Err(bad("carrier too large".into()));
        }
        if tables.len() != signature.len() {
            return Err(bad(format!(
                "{} tables for {} symbols",
                tables.len(),
                signature.len()
            )));
        }
        for (sym, table) in signature.symbols().iter().zip(&tables) {
            let expected = table_len(size, sym.arity)
                .ok_or_else(|| bad(format!("table of `{}` overflows", sym.name)))?;
            if table.len() != expected {
                return Err(bad(format!(
                    "table of `{}` has {} entries, expected {}^{} = {}",
                    sym.name,
                    table.len(),
                    size,
                    sym.arity,
                    expected
                )));
            }
            if let Some(pos) = table.iter().position(|&v| v as usize >= size) {
                return Err(bad(format!(
                    "table of `{}` entry {} is {}, not below {}",
                    sym.name, pos, table[pos], size
                )));
            }
        }
        let fingerprint = {
            let mut h = std::collections::hash_map::DefaultHasher::new();
            size.hash(&mut h);
            signature.hash(&mut h);
            tables.hash(&mut h);
            h.finish()
        };
        Ok(FiniteAlgebra {
            name,
            size,
            signature,
            tables,
            fingerprint,
        })
    }

    /// Tabulates operations given as functions.
    pub fn from_fn(
        name: impl Into<String>,
        size: usize,
        signature: Signature,
        mut op: impl FnMut(usize, &[usize]) -> usize,
    ) -> Result<Self> {
        let mut tables = Vec::with_capacity(signature.len());
        for (s, sym) in signature.symbols().iter().enumerate() {
            let len = table_len(size, sym.arity).ok_or_else(|| Error::CapExceeded {
                what: "operation table",
                requested: u128::MAX,
                cap: usize::MAX as u128,
            })?;
            let mut table = Vec::with_capacity(len);
            let mut args = vec![0usize; sym.arity];
            for _ in 0..len {
                table.push(op(s, &args) as u32);
                for a in args.iter_mut().rev() {
                    *a += 1;
                    if *a < size {
                        break;
                    }
                    *a = 0;
                }
            }
            tables.push(table);
        }
        FiniteAlgebra::new(name, size, signature, tables)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn table(&self, symbol: usize) -> &[u32] {
        &self.tables[symbol]
    }

    pub fn tables(&self) -> &[Vec<u32>] {
        &self.tables
    }

    /// Structural hash, equal for equal algebras regardless of name.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn symbol(&self, name: &str) -> Option<usize> {
        self.signature.index_of(name)
    }

    #[inline]
    pub fn offset(&self, args: &[usize]) -> usize {
        args.iter().fold(0, |acc, &a| acc * self.size + a)
    }

    /// Applies `symbol` to `args` (unchecked beyond slice bounds).
    #[inline]
    pub fn apply(&self, symbol: usize, args: &[usize]) -> usize {
        self.tables[symbol][self.offset(args)] as usize
    }

    pub fn try_apply(&self, symbol: usize, args: &[usize]) -> Result<usize> {
        let arity = self.signature.arity(symbol);
        if args.len() != arity {
            return Err(Error::Arity {
                symbol: self.signature.name(symbol).to_string(),
                expected: arity,
                found: args.len(),
            });
        }
        if let Some(&a) = args.iter().find(|&&a| a >= self.size) {
            return Err(Error::ElementOutOfRange { element: a, size: self.size });
        }
        Ok(self.apply(symbol, args))
    }

    pub fn same_signature(&self, other: &FiniteAlgebra) -> Result<()> {
        if self.signature != other.signature {
            return Err(Error::SignatureMismatch(format!(
                "`{}` has {} but `{}` has {}",
                self.name, self.signature, other.name, other.signature
            )));
        }
        Ok(())
    }

    /// Calls `f(symbol, args, value)` for every table entry.
    pub fn for_each_entry(&self, mut f: impl FnMut(usize, &[usize], usize) -> bool) -> bool {
        for s in 0..self.signature.len() {
            let arity = self.signature.arity(s);
            let mut args = vec![0usize; arity];
            for &v in &self.tables[s] {
                if !f(s, &args, v as usize) {
                    return false;
                }
                for a in args.iter_mut().rev() {
                    *a += 1;
                    if *a < self.size {
                        break;
                    }
                    *a = 0;
                }
            }
        }
        true
    }

    /// The first tuple pair witnessing that `p` is not compatible, if any.
    pub fn compatibility_violation(&self, p: &Partition) -> Option<Error> {
        if p.len() != self.size {
            return Some(Error::AlgebraMismatch(format!(
                "partition of {} elements on algebra of size {}",
                p.len(),
                self.size
            )));
        }
        let n = self.size;
        for s in 0..self.signature.len() {
            let arity = self.signature.arity(s);
            // changing one argument at a time inside its block suffices
            let mut args = vec![0usize; arity];
            let total = self.tables[s].len();
            for _ in 0..total {
                let v = self.apply(s, &args);
                for pos in 0..arity {
                    let orig = args[pos];
                    let r = p.rep(orig);
                    if r != orig {
                        let mut other = args.clone();
                        other[pos] = r;
                        let w = self.apply(s, &other);
                        if !p.related(v, w) {
                            return Some(Error::NotCompatible {
                                symbol: self.signature.name(s).to_string(),
                                left: other,
                                right: args.clone(),
                                image_left: w,
                                image_right: v,
                            });
                        }
                    }
                }
                for a in args.iter_mut().rev() {
                    *a += 1;
                    if *a < n {
                        break;
                    }
                    *a = 0;
                }
            }
        }
        None
    }

    pub fn is_compatible(&self, p: &Partition) -> bool {
        self.compatibility_violation(p).is_none()
    }
}

/// Mixed-radix codec between product coordinates and flat indices; the first
/// coordinate is most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedRadix {
    radices: Vec<usize>,
    weights: Vec<u64>,
    total: u64,
}

impl MixedRadix {
    pub fn new(radices: Vec<usize>) -> Result<Self> {
        let mut weights = vec![0u64; radices.len()];
        let mut acc: u64 = 1;
        for i in (0..radices.len()).rev() {
            weights[i] = acc;
            acc = acc.checked_mul(radices[i] as u64).ok_or(Error::CapExceeded {
                what: "product carrier",
                requested: u128::MAX,
                cap: u64::MAX as u128,
            })?;
        }
        Ok(MixedRadix { radices, weights, total: acc })
    }

    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    pub fn width(&self) -> usize {
        self.radices.len()
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    #[inline]
    pub fn encode(&self, coords: &[usize]) -> u64 {
        coords
            .iter()
            .zip(&self.weights)
            .map(|(&c, &w)| c as u64 * w)
            .sum()
    }

    #[inline]
    pub fn encode_u32(&self, coords: &[u32]) -> u64 {
        coords
            .iter()
            .zip(&self.weights)
            .map(|(&c, &w)| c as u64 * w)
            .sum()
    }

    pub fn decode(&self, mut index: u64) -> Vec<usize> {
        let mut out = vec![0; self.radices.len()];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (index / self.weights[i]) as usize;
            index %= self.weights[i];
        }
        out
    }

    pub fn decode_into(&self, mut index: u64, out: &mut [u32]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = (index / self.weights[i]) as u32;
            index %= self.weights[i];
        }
    }

    #[inline]
    pub fn coordinate(&self, index: u64, i: usize) -> usize {
        ((index / self.weights[i]) % self.radices[i] as u64) as usize
    }
}

/// `A₁×⋯×A_n` materialized, with its codec.
pub fn direct_product(factors: &[&FiniteAlgebra], caps: &Caps) -> Result<(FiniteAlgebra, MixedRadix)> {
    let first = factors
        .first()
        .ok_or_else(|| Error::precondition("direct product of no factors"))?;
    for f in &factors[1..] {
        first.same_signature(f)?;
    }
    let codec = MixedRadix::new(factors.iter().map(|f| f.size()).collect())?;
    if codec.total() > caps.max_carrier {
        return Err(Error::CapExceeded {
            what: "product carrier",
            requested: codec.total() as u128,
            cap: caps.max_carrier as u128,
        });
    }
    let size = codec.total() as usize;
    let sig = first.signature().clone();
    for s in 0..sig.len() {
        let entries = (size as u128).checked_pow(sig.arity(s) as u32).unwrap_or(u128::MAX);
        if entries > caps.max_carrier as u128 * 16 {
            return Err(Error::CapExceeded {
                what: "product operation table",
                requested: entries,
                cap: caps.max_carrier as u128 * 16,
            });
        }
    }
    let name = factors.iter().map(|f| f.name()).collect::<Vec<_>>().join("×");
    let decoded: Vec<Vec<usize>> = (0..size as u64).map(|i| codec.decode(i)).collect();
    let mut coord_args = Vec::new();
    let mut out = vec![0usize; factors.len()];
    let algebra = FiniteAlgebra::from_fn(name, size, sig, |s, args| {
        for (c, f) in factors.iter().enumerate() {
            coord_args.clear();
            coord_args.extend(args.iter().map(|&a| decoded[a][c]));
            out[c] = f.apply(s, &coord_args);
        }
        codec.encode(&out) as usize
    })?;
    Ok((algebra, codec))
}

/// A quotient algebra together with the canonical surjection.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub algebra: FiniteAlgebra,
    /// element ↦ index of its block (blocks ordered by least element)
    pub surjection: Vec<usize>,
}

/// `A/θ`; fails with the violating operation and tuple when `θ` is not a congruence.
pub fn quotient(a: &FiniteAlgebra, theta: &Partition) -> Result<Quotient> {
    if let Some(err) = a.compatibility_violation(theta) {
        return Err(err);
    }
    let surjection = theta.block_indices();
    let blocks = theta.blocks();
    let reps: Vec<usize> = blocks.iter().map(|b| b[0]).collect();
    let mut args = Vec::new();
    let algebra = FiniteAlgebra::from_fn(
        format!("{}/θ", a.name()),
        blocks.len(),
        a.signature().clone(),
        |s, block_args| {
            args.clear();
            args.extend(block_args.iter().map(|&b| reps[b]));
            surjection[a.apply(s, &args)]
        },
    )?;
    Ok(Quotient { algebra, surjection })
}

/// Why a map fails to be a homomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomViolation {
    pub symbol: String,
    pub args: Vec<usize>,
    /// `f(op(args))`
    pub image_of_value: usize,
    /// `op(f(args))`
    pub value_of_images: usize,
}

impl fmt::Display for HomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{:?}: f(value) = {} but value of images = {}",
            self.symbol, self.args, self.image_of_value, self.value_of_images
        )
    }
}

fn check_map(a: &FiniteAlgebra, b: &FiniteAlgebra, map: &[usize]) -> Result<()> {
    a.same_signature(b)?;
    if map.len() != a.size() {
        return Err(Error::precondition(format!(
            "map has {} entries for a carrier of size {}",
            map.len(),
            a.size()
        )));
    }
    if let Some(&x) = map.iter().find(|&&x| x >= b.size()) {
        return Err(Error::ElementOutOfRange { element: x, size: b.size() });
    }
    Ok(())
}

/// First operation/tuple where `map` fails to commute, or `None` for a homomorphism.
pub fn homomorphism_violation(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    map: &[usize],
) -> Result<Option<HomViolation>> {
    check_map(a, b, map)?;
    // constants first, then by increasing arity
    let mut order: Vec<usize> = (0..a.signature().len()).collect();
    order.sort_by_key(|&s| a.signature().arity(s));
    let mut image_args = Vec::new();
    for s in order {
        let arity = a.signature().arity(s);
        let mut args = vec![0usize; arity];
        for &v in a.table(s) {
            image_args.clear();
            image_args.extend(args.iter().map(|&x| map[x]));
            let w = b.apply(s, &image_args);
            if map[v as usize] != w {
                return Ok(Some(HomViolation {
                    symbol: a.signature().name(s).to_string(),
                    args,
                    image_of_value: map[v as usize],
                    value_of_images: w,
                }));
            }
            for x in args.iter_mut().rev() {
                *x += 1;
                if *x < a.size() {
                    break;
                }
                *x = 0;
            }
        }
    }
    Ok(None)
}

pub fn is_homomorphism(a: &FiniteAlgebra, b: &FiniteAlgebra, map: &[usize]) -> Result<bool> {
    Ok(homomorphism_violation(a, b, map)?.is_none())
}

/// The kernel `{(x,y) : f(x)=f(y)}` as a partition.
pub fn kernel(map: &[usize]) -> Partition {
    Partition::from_labels(map)
}

pub fn missed_by(map: &[usize], codomain: usize) -> Option<usize> {
    let mut hit = vec![false; codomain];
    for &x in map {
        if x < codomain {
            hit[x] = true;
        }
    }
    hit.iter().position(|&h| !h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn rejects_short_table() {
        let sig = Signature::new([("+", 2)]).unwrap();
        let err = FiniteAlgebra::new("bad", 2, sig, vec![vec![0, 1, 1]]).unwrap_err();
        assert!(err.to_string().contains("3 entries"));
    }

    #[test]
    fn rejects_out_of_range_entry() {
        let sig = Signature::new([("f", 1)]).unwrap();
        assert!(FiniteAlgebra::new("bad", 2, sig, vec![vec![0, 2]]).is_err());
    }

    #[test]
    fn duplicate_symbols_rejected() {
        assert!(Signature::new([("f", 1), ("f", 2)]).is_err());
    }

    #[test]
    fn klein_group_as_product() {
        let z2 = zoo::cyclic_group(2);
        let (v, codec) = direct_product(&[&z2, &z2], &Caps::default()).unwrap();
        assert_eq!(v.size(), 4);
        assert_eq!(codec.decode(2), vec![1, 0]);
        let mul = v.symbol("mul").unwrap();
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(v.apply(mul, &[x, y]), x ^ y);
            }
        }
    }

    #[test]
    fn single_factor_product_has_identity_codec() {
        let s3 = zoo::symmetric_group_3();
        let (p, codec) = direct_product(&[&s3], &Caps::default()).unwrap();
        assert_eq!(p.tables(), s3.tables());
        assert_eq!(codec.encode(&[4]), 4);
    }

    #[test]
    fn product_cap_is_reported() {
        let z2 = zoo::cyclic_group(2);
        let caps = Caps { max_carrier: 4, ..Caps::default() };
        let err = direct_product(&[&z2, &z2, &z2], &caps).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { requested: 8, .. }));
    }

    #[test]
    fn product_signature_mismatch() {
        let err = direct_product(&[&zoo::cyclic_group(2), &zoo::z_mod(2)], &Caps::default());
        assert!(matches!(err, Err(Error::SignatureMismatch(_))));
    }

    #[test]
    fn z4_mod_two_quotient() {
        let z4 = zoo::z_mod(4);
        let theta = Partition::from_labels(&[0, 1, 0, 1]);
        let q = quotient(&z4, &theta).unwrap();
        assert_eq!(q.algebra.size(), 2);
        assert_eq!(q.algebra, zoo::z_mod(2));
        assert!(is_homomorphism(&z4, &q.algebra, &q.surjection).unwrap());
    }

    #[test]
    fn quotient_by_zero_is_a_copy() {
        let s3 = zoo::symmetric_group_3();
        let q = quotient(&s3, &Partition::discrete(6)).unwrap();
        assert_eq!(q.algebra, s3);
    }

    #[test]
    fn incompatible_partition_reports_symbol() {
        let z4 = zoo::z_mod(4);
        let theta = Partition::from_blocks(4, &[vec![0, 1]]).unwrap();
        match quotient(&z4, &theta) {
            Err(Error::NotCompatible { symbol, .. }) => assert_eq!(symbol, "+"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn homomorphism_checks() {
        let z4 = zoo::z_mod(4);
        let z2 = zoo::z_mod(2);
        assert!(is_homomorphism(&z4, &z2, &[0, 1, 0, 1]).unwrap());
        let v = homomorphism_violation(&z4, &z4, &[1, 2, 3, 0]).unwrap().unwrap();
        assert_eq!(v.symbol, "0");
        assert_eq!((v.image_of_value, v.value_of_images), (1, 0));
    }
}
