//! Congruences: generation, lattice operations, permutability and the
//! congruence lattice with its modularity test.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::algebra::FiniteAlgebra;
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::partition::{Partition, UnionFind};

/// A partition verified compatible with the operations of a specific algebra.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Congruence {
    partition: Partition,
    algebra: u64,
}

impl Congruence {
    /// Checks compatibility; fails with the violating operation and tuple.
    pub fn new(a: &FiniteAlgebra, partition: Partition) -> Result<Self> {
        if let Some(err) = a.compatibility_violation(&partition) {
            return Err(err);
        }
        Ok(Congruence { partition, algebra: a.fingerprint() })
    }

    pub(crate) fn trusted(a: &FiniteAlgebra, partition: Partition) -> Self {
        debug_assert!(a.is_compatible(&partition));
        Congruence { partition, algebra: a.fingerprint() }
    }

    pub fn zero(a: &FiniteAlgebra) -> Self {
        Congruence::trusted(a, Partition::discrete(a.size()))
    }

    pub fn one(a: &FiniteAlgebra) -> Self {
        Congruence::trusted(a, Partition::total(a.size()))
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn into_partition(self) -> Partition {
        self.partition
    }

    pub fn belongs_to(&self, a: &FiniteAlgebra) -> bool {
        self.algebra == a.fingerprint()
    }

    fn same_algebra(&self, other: &Congruence) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch(
                "congruences belong to different algebras".into(),
            ));
        }
        Ok(())
    }

    pub fn meet(&self, other: &Congruence) -> Result<Congruence> {
        self.same_algebra(other)?;
        Ok(Congruence { partition: self.partition.meet(&other.partition)?, algebra: self.algebra })
    }

    /// The transitive closure of the union, which is again a congruence.
    pub fn join(&self, other: &Congruence) -> Result<Congruence> {
        self.same_algebra(other)?;
        Ok(Congruence { partition: self.partition.join(&other.partition)?, algebra: self.algebra })
    }

    pub fn leq(&self, other: &Congruence) -> bool {
        self.partition.leq(&other.partition)
    }

    pub fn permutes_with(&self, other: &Congruence) -> Result<bool> {
        self.same_algebra(other)?;
        self.partition.permutes_with(&other.partition)
    }

    pub fn is_zero(&self) -> bool {
        self.partition.is_discrete()
    }

    pub fn is_one(&self) -> bool {
        self.partition.is_total()
    }
}

impl fmt::Debug for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.partition)
    }
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.partition)
    }
}

impl Serialize for Congruence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.partition.serialize(s)
    }
}

/// `Cg(pairs)`: the smallest congruence containing `pairs`.
pub fn cg(a: &FiniteAlgebra, pairs: &[(usize, usize)], caps: &Caps) -> Result<Congruence> {
    cg_over(a, &Partition::discrete(a.size()), pairs, caps)
}

/// `Cg(base ∪ pairs)` where `base` is already a congruence of `a`.
///
/// Only the unions caused by `pairs` are propagated: translates of pairs of
/// `base` stay inside `base`. Each propagated pair `(u,v)` is pushed through
/// every operation, position and choice of remaining arguments, which is
/// `O(n^{r−1})` per pair and position for arity `r`.
pub fn cg_over(
    a: &FiniteAlgebra,
    base: &Partition,
    pairs: &[(usize, usize)],
    caps: &Caps,
) -> Result<Congruence> {
    let n = a.size();
    if base.len() != n {
        return Err(Error::AlgebraMismatch(format!(
            "partition of {} elements on algebra of size {n}",
            base.len()
        )));
    }
    let mut ordered: Vec<(usize, usize)> = Vec::with_capacity(pairs.len());
    for &(x, y) in pairs {
        for z in [x, y] {
            if z >= n {
                return Err(Error::ElementOutOfRange { element: z, size: n });
            }
        }
        ordered.push((x.min(y), x.max(y)));
    }
    ordered.sort_unstable();
    ordered.dedup();

    let mut uf = UnionFind::from_partition(base);
    let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
    for (x, y) in ordered {
        if uf.union(x, y) {
            queue.push_back((x, y));
        }
    }
    let sig = a.signature();
    let mut steps: u64 = 0;
    let mut args = Vec::new();
    while let Some((u, v)) = queue.pop_front() {
        for s in 0..sig.len() {
            let arity = sig.arity(s);
            for p in 0..arity {
                let others = n.pow(arity as u32 - 1);
                steps += others as u64;
                if steps > caps.cg_step_budget {
                    return Err(Error::BudgetExhausted {
                        budget: caps.cg_step_budget,
                        during: "congruence generation",
                    });
                }
                args.clear();
                args.resize(arity, 0usize);
                for _ in 0..others {
                    args[p] = u;
                    let x = a.apply(s, &args);
                    args[p] = v;
                    let y = a.apply(s, &args);
                    if uf.union(x, y) {
                        queue.push_back((x, y));
                    }
                    for (q, slot) in args.iter_mut().enumerate().rev() {
                        if q == p {
                            continue;
                        }
                        *slot += 1;
                        if *slot < n {
                            break;
                        }
                        *slot = 0;
                    }
                }
            }
        }
    }
    Ok(Congruence::trusted(a, uf.to_partition()))
}

/// A finite lattice given by its order, with meet and join tables.
#[derive(Debug, Clone)]
pub struct FiniteLattice {
    leq: Vec<Vec<bool>>,
    meet: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
}

/// Five elements forming a pentagon sublattice: `bottom < a < c < top`,
/// `bottom < b < top`, with `b` incomparable to `a` and `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Pentagon {
    pub bottom: usize,
    pub a: usize,
    pub c: usize,
    pub b: usize,
    pub top: usize,
}

impl FiniteLattice {
    /// Validates that `leq` is a partial order in which all meets and joins exist.
    pub fn from_order(leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = leq.len();
        let bad = |m: String| Error::precondition(format!("not a lattice order: {m}"));
        if leq.iter().any(|r| r.len() != n) {
            return Err(bad("matrix is not square".into()));
        }
        for x in 0..n {
            if !leq[x][x] {
                return Err(bad(format!("{x} ≰ {x}")));
            }
            for y in 0..n {
                if x != y && leq[x][y] && leq[y][x] {
                    return Err(bad(format!("{x} and {y} are mutually below each other")));
                }
                for z in 0..n {
                    if leq[x][y] && leq[y][z] && !leq[x][z] {
                        return Err(bad(format!("{x} ≤ {y} ≤ {z} but {x} ≰ {z}")));
                    }
                }
            }
        }
        let bound = |x: usize, y: usize, upper: bool| -> Option<usize> {
            let below = |p: usize, q: usize| if upper { leq[p][q] } else { leq[q][p] };
            let cands: Vec<usize> = (0..n).filter(|&c| below(x, c) && below(y, c)).collect();
            cands.iter().copied().find(|&c| cands.iter().all(|&d| below(c, d)))
        };
        let mut meet = vec![vec![0; n]; n];
        let mut join = vec![vec![0; n]; n];
        for x in 0..n {
            for y in 0..n {
                meet[x][y] = bound(x, y, false).ok_or_else(|| bad(format!("{x} ∧ {y} missing")))?;
                join[x][y] = bound(x, y, true).ok_or_else(|| bad(format!("{x} ∨ {y} missing")))?;
            }
        }
        Ok(FiniteLattice { leq, meet, join })
    }

    pub fn len(&self) -> usize {
        self.leq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leq.is_empty()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x][y]
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x][y]
    }

    /// A pentagon sublattice, if the lattice is not modular.
    ///
    /// A lattice fails modularity exactly when some `a < c` and `b` have
    /// `a ∨ b = c ∨ b` and `a ∧ b = c ∧ b`.
    pub fn find_pentagon(&self) -> Option<Pentagon> {
        let n = self.len();
        for a in 0..n {
            for c in 0..n {
                if a == c || !self.leq[a][c] {
                    continue;
                }
                for b in 0..n {
                    if self.join[a][b] == self.join[c][b] && self.meet[a][b] == self.meet[c][b] {
                        return Some(Pentagon {
                            bottom: self.meet[a][b],
                            a,
                            c,
                            b,
                            top: self.join[a][b],
                        });
                    }
                }
            }
        }
        None
    }

    pub fn is_modular(&self) -> bool {
        self.find_pentagon().is_none()
    }

    pub fn is_distributive(&self) -> bool {
        let n = self.len();
        (0..n).all(|x| {
            (0..n).all(|y| {
                (0..n).all(|z| self.meet[x][self.join[y][z]] == self.join[self.meet[x][y]][self.meet[x][z]])
            })
        })
    }
}

/// All congruences of an algebra, ordered by number of related pairs, with
/// the covering relation.
#[derive(Debug, Clone)]
pub struct CongruenceLattice {
    congruences: Vec<Congruence>,
    index: HashMap<Partition, usize>,
    lattice: FiniteLattice,
    covers: Vec<(usize, usize)>,
}

/// `Con(A)` as the join-closure of the principal congruences and `0`.
pub fn con_lattice(a: &FiniteAlgebra, caps: &Caps) -> Result<CongruenceLattice> {
    let n = a.size();
    let mut principals: Vec<Partition> = Vec::new();
    let mut seen_principal = std::collections::HashSet::new();
    for x in 0..n {
        for y in x + 1..n {
            let p = cg(a, &[(x, y)], caps)?.into_partition();
            if seen_principal.insert(p.clone()) {
                principals.push(p);
            }
        }
    }
    let mut all = vec![Partition::discrete(n)];
    let mut seen: std::collections::HashSet<Partition> = all.iter().cloned().collect();
    for p in &principals {
        let snapshot = all.len();
        for i in 0..snapshot {
            let j = all[i].join(p)?;
            if seen.insert(j.clone()) {
                all.push(j);
                if all.len() > caps.max_congruences {
                    return Err(Error::CapExceeded {
                        what: "congruence lattice",
                        requested: all.len() as u128,
                        cap: caps.max_congruences as u128,
                    });
                }
            }
        }
    }
    all.sort_by(|x, y| x.pair_count().cmp(&y.pair_count()).then_with(|| x.cmp(y)));
    let m = all.len();
    let leq: Vec<Vec<bool>> = (0..m).map(|i| (0..m).map(|j| all[i].leq(&all[j])).collect()).collect();
    let mut covers = Vec::new();
    for i in 0..m {
        for j in 0..m {
            if i != j && leq[i][j] && !(0..m).any(|k| k != i && k != j && leq[i][k] && leq[k][j]) {
                covers.push((i, j));
            }
        }
    }
    let lattice = FiniteLattice::from_order(leq)?;
    let index = all.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let congruences = all.into_iter().map(|p| Congruence::trusted(a, p)).collect();
    Ok(CongruenceLattice { congruences, index, lattice, covers })
}

impl CongruenceLattice {
    pub fn len(&self) -> usize {
        self.congruences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.congruences.is_empty()
    }

    pub fn congruences(&self) -> &[Congruence] {
        &self.congruences
    }

    pub fn get(&self, i: usize) -> &Congruence {
        &self.congruences[i]
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Hasse diagram edges `(lower, upper)`.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.len() - 1
    }

    pub fn is_modular(&self) -> bool {
        self.lattice.is_modular()
    }

    /// First pair of congruences that do not permute.
    pub fn non_permuting_pair(&self) -> Option<(usize, usize)> {
        let m = self.len();
        for i in 0..m {
            for j in i + 1..m {
                if !self.congruences[i]
                    .partition()
                    .permutes_with(self.congruences[j].partition())
                    .unwrap_or(false)
                {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn cg_in_z4() {
        let z4 = zoo::z_mod(4);
        let c = cg(&z4, &[(0, 2)], &Caps::default()).unwrap();
        assert_eq!(c.to_string(), "[[0,2],[1,3]]");
        assert!(cg(&z4, &[], &Caps::default()).unwrap().is_zero());
    }

    #[test]
    fn cg_in_s3_gives_a3() {
        let s3 = zoo::symmetric_group_3();
        let c = cg(&s3, &[(0, 3)], &Caps::default()).unwrap();
        assert_eq!(c.to_string(), "[[0,3,4],[1,2,5]]");
    }

    #[test]
    fn cg_budget() {
        let s3 = zoo::symmetric_group_3();
        let caps = Caps { cg_step_budget: 5, ..Caps::default() };
        assert!(matches!(cg(&s3, &[(0, 3)], &caps), Err(Error::BudgetExhausted { .. })));
    }

    #[test]
    fn lattice_identities() {
        let z6 = zoo::z_mod(6);
        let caps = Caps::default();
        let m2 = cg(&z6, &[(0, 2)], &caps).unwrap();
        let m3 = cg(&z6, &[(0, 3)], &caps).unwrap();
        assert_eq!(m2.join(&Congruence::zero(&z6)).unwrap(), m2);
        assert_eq!(m2.meet(&Congruence::one(&z6)).unwrap(), m2);
        assert!(m2.join(&m3).unwrap().is_one());
        assert!(m2.meet(&m3).unwrap().is_zero());
    }

    #[test]
    fn mismatched_algebras() {
        let a = Congruence::zero(&zoo::z_mod(4));
        let b = Congruence::zero(&zoo::cyclic_group(4));
        assert!(matches!(a.join(&b), Err(Error::AlgebraMismatch(_))));
        assert!(a.permutes_with(&b).is_err());
    }

    #[test]
    fn small_congruence_lattices() {
        let caps = Caps::default();
        let z4 = con_lattice(&zoo::z_mod(4), &caps).unwrap();
        assert_eq!(z4.len(), 3);
        assert_eq!(z4.covers(), &[(0, 1), (1, 2)]);
        let s3 = con_lattice(&zoo::symmetric_group_3(), &caps).unwrap();
        assert_eq!(s3.len(), 3);
        assert_eq!(s3.get(1).to_string(), "[[0,3,4],[1,2,5]]");
        let l2 = con_lattice(&zoo::lattice_2(), &caps).unwrap();
        assert_eq!(l2.len(), 2);
        assert!(l2.is_modular());
    }

    #[test]
    fn group_lattices_are_modular_and_permuting() {
        let caps = Caps::default();
        for g in zoo::small_groups() {
            let con = con_lattice(&g, &caps).unwrap();
            assert!(con.is_modular(), "{}", g.name());
            assert_eq!(con.non_permuting_pair(), None, "{}", g.name());
        }
    }

    #[test]
    fn raw_pentagon_is_not_modular() {
        // 0 < 1 < 2 < 4, 0 < 3 < 4
        let mut leq = vec![vec![false; 5]; 5];
        for (x, row) in leq.iter_mut().enumerate() {
            row[x] = true;
            row[4] = true;
        }
        leq[0] = vec![true; 5];
        leq[1][2] = true;
        let lat = FiniteLattice::from_order(leq).unwrap();
        let p = lat.find_pentagon().unwrap();
        assert_eq!(p, Pentagon { bottom: 0, a: 1, c: 2, b: 3, top: 4 });
        assert!(!lat.is_distributive());
    }

    #[test]
    fn m3_is_modular_not_distributive() {
        let mut leq = vec![vec![false; 5]; 5];
        for (x, row) in leq.iter_mut().enumerate() {
            row[x] = true;
            row[4] = true;
        }
        leq[0] = vec![true; 5];
        let lat = FiniteLattice::from_order(leq).unwrap();
        assert!(lat.is_modular());
        assert!(!lat.is_distributive());
    }

    #[test]
    fn non_lattice_order_rejected() {
        // two incomparable maximal elements
        let leq = vec![vec![true, true, true], vec![false, true, false], vec![false, false, true]];
        assert!(FiniteLattice::from_order(leq).is_err());
    }
}
