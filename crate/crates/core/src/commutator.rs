//! The k-ary term-condition commutator, its properties, and classical oracles
//! for groups and rings.

use std::collections::HashMap;

use serde::Serialize;

use crate::algebra::FiniteAlgebra;
use crate::config::Caps;
use crate::congruence::{cg_over, con_lattice, Congruence};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::reduct::{GroupReduct, RingReduct};
use crate::subdirect::SubproductAlgebra;
use crate::subpower::{subpower, Subpower};
use crate::synthesis;

/// Stamp put on results for algebras without a verified Mal'cev term.
pub const NON_MODULAR_CAVEAT: &str = "term-condition closure (non-modular caveat)";

/// A map `{0,1}^k → A`; index bit `k−1−i` holds `x_{i+1}`, so `x₁` is most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CubeFunction {
    pub k: usize,
    pub values: Vec<u32>,
}

impl CubeFunction {
    /// `cube^k_i(a,b)` with 0-based direction `i`.
    pub fn cube(k: usize, i: usize, a: usize, b: usize) -> Self {
        let values = (0..1usize << k)
            .map(|x| if x >> (k - 1 - i) & 1 == 0 { a as u32 } else { b as u32 })
            .collect();
        CubeFunction { k, values }
    }
}

fn check_inputs(a: &FiniteAlgebra, alphas: &[Partition], caps: &Caps) -> Result<()> {
    let k = alphas.len();
    if k == 0 {
        return Err(Error::precondition("a commutator needs at least one congruence"));
    }
    if k > caps.max_commutator_arity {
        return Err(Error::CapExceeded {
            what: "commutator arity",
            requested: k as u128,
            cap: caps.max_commutator_arity as u128,
        });
    }
    for alpha in alphas {
        if alpha.len() != a.size() {
            return Err(Error::AlgebraMismatch(format!(
                "partition of {} elements on algebra of size {}",
                alpha.len(),
                a.size()
            )));
        }
        if let Some(e) = a.compatibility_violation(alpha) {
            return Err(e);
        }
    }
    Ok(())
}

/// One generator per direction `i` and related ordered pair `(a,b) ∈ α_i`, including `a = b`.
pub fn cube_generators(a: &FiniteAlgebra, alphas: &[Partition], caps: &Caps) -> Result<Vec<CubeFunction>> {
    check_inputs(a, alphas, caps)?;
    let k = alphas.len();
    let mut out = Vec::new();
    for (i, alpha) in alphas.iter().enumerate() {
        for (x, y) in alpha.pairs() {
            out.push(CubeFunction::cube(k, i, x, y));
        }
    }
    Ok(out)
}

/// `M_A(α₁,…,α_k) ≤ A^{{0,1}^k}`.
pub fn generate_m(a: &FiniteAlgebra, alphas: &[Partition], caps: &Caps) -> Result<Subpower> {
    let gens = cube_generators(a, alphas, caps)?;
    let mut tuples: Vec<Vec<u32>> = gens.into_iter().map(|c| c.values).collect();
    tuples.sort_unstable();
    tuples.dedup();
    subpower(a, 1 << alphas.len(), &tuples, caps.max_cube_functions)
}

#[derive(Debug, Clone, Serialize)]
pub struct CommutatorResult {
    pub inputs: Vec<Partition>,
    pub gamma: Partition,
    /// Rounds of the fixpoint that enlarged `γ`.
    pub iterations: usize,
    pub m_size: usize,
    pub caveat: Option<&'static str>,
}

/// Least fixpoint of the term condition over `M`.
fn term_condition_fixpoint(a: &FiniteAlgebra, m: &Subpower, caps: &Caps) -> Result<(Partition, usize)> {
    let width = m.width();
    let half = width / 2;
    let p = m.packing();
    let mut gamma = Partition::discrete(a.size());
    let mut active: Vec<u64> = m.keys().to_vec();
    let mut iterations = 0;
    loop {
        let mut pairs = Vec::new();
        let mut still = Vec::with_capacity(active.len());
        for &f in &active {
            let faces = (0..half - 1).all(|x| gamma.related(p.get(f, 2 * x) as usize, p.get(f, 2 * x + 1) as usize));
            if faces {
                let (u, v) = (p.get(f, width - 2) as usize, p.get(f, width - 1) as usize);
                if !gamma.related(u, v) {
                    pairs.push((u.min(v), u.max(v)));
                }
            } else {
                still.push(f);
            }
        }
        let settled = still.len() == active.len();
        active = still;
        if pairs.is_empty() {
            if settled {
                return Ok((gamma, iterations));
            }
            continue;
        }
        pairs.sort_unstable();
        pairs.dedup();
        gamma = cg_over(a, &gamma, &pairs, caps)?.into_partition();
        iterations += 1;
    }
}

/// `[α₁,…,α_k]` without the Mal'cev caveat check.
pub fn commutator(a: &FiniteAlgebra, alphas: &[Partition], caps: &Caps) -> Result<CommutatorResult> {
    let m = generate_m(a, alphas, caps)?;
    let (gamma, iterations) = term_condition_fixpoint(a, &m, caps)?;
    Ok(CommutatorResult { inputs: alphas.to_vec(), gamma, iterations, m_size: m.len(), caveat: None })
}

/// Commutators of one algebra with memoization and a lazily decided Mal'cev caveat.
pub struct Commutators<'a> {
    a: &'a FiniteAlgebra,
    caps: Caps,
    malcev_budget: u64,
    malcev: Option<bool>,
    memo: HashMap<Vec<Partition>, CommutatorResult>,
}

impl<'a> Commutators<'a> {
    pub fn new(a: &'a FiniteAlgebra, caps: &Caps) -> Self {
        Commutators { a, caps: caps.clone(), malcev_budget: synthesis::DEFAULT_MALCEV_BUDGET, malcev: None, memo: HashMap::new() }
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        self.a
    }

    /// Whether a Mal'cev term was found (searched on first use).
    pub fn has_malcev_term(&mut self) -> bool {
        if self.malcev.is_none() {
            let found = matches!(
                synthesis::find_malcev_term(self.a, self.malcev_budget),
                Ok(synthesis::MalcevOutcome::Found(_))
            );
            self.malcev = Some(found);
        }
        self.malcev == Some(true)
    }

    pub fn compute(&mut self, alphas: &[Partition]) -> Result<CommutatorResult> {
        if let Some(r) = self.memo.get(alphas) {
            return Ok(r.clone());
        }
        let mut r = commutator(self.a, alphas, &self.caps)?;
        if !self.has_malcev_term() {
            r.caveat = Some(NON_MODULAR_CAVEAT);
        }
        self.memo.insert(alphas.to_vec(), r.clone());
        Ok(r)
    }

    pub fn gamma(&mut self, alphas: &[Partition]) -> Result<Partition> {
        Ok(self.compute(alphas)?.gamma)
    }
}

fn normal_subgroup(a: &FiniteAlgebra, g: &GroupReduct, n: &Partition) -> Vec<bool> {
    (0..a.size()).map(|x| n.related(x, g.identity)).collect()
}

fn commutator_subgroup(a: &FiniteAlgebra, g: &GroupReduct, h: &[bool], k: &[bool]) -> Vec<bool> {
    let n = a.size();
    let gens: Vec<usize> = (0..n)
        .filter(|&x| h[x])
        .flat_map(|x| (0..n).filter(|&y| k[y]).map(move |y| (x, y)))
        .map(|(x, y)| g.commutator(a, x, y))
        .collect();
    g.subgroup(a, &gens)
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// `∏_σ [[…[N_σ1, N_σ2], …], N_σk]` with classical element commutators.
pub fn group_oracle(a: &FiniteAlgebra, ns: &[Partition]) -> Result<Partition> {
    let g = GroupReduct::require(a)?;
    check_inputs(a, ns, &Caps { max_commutator_arity: usize::MAX, ..Caps::default() })?;
    let subs: Vec<Vec<bool>> = ns.iter().map(|n| normal_subgroup(a, &g, n)).collect();
    let mut product = vec![false; a.size()];
    for sigma in permutations(ns.len()) {
        let mut h = subs[sigma[0]].clone();
        for &j in &sigma[1..] {
            h = commutator_subgroup(a, &g, &h, &subs[j]);
        }
        for (p, x) in product.iter_mut().zip(h) {
            *p |= x;
        }
    }
    let gens: Vec<usize> = (0..a.size()).filter(|&x| product[x]).collect();
    let n = g.subgroup(a, &gens);
    Ok(Partition::from_labels(&g.coset_labels(a, &n)))
}

/// `Σ_σ I_σ1 ⋯ I_σk` with ideals as classes of zero.
pub fn ring_oracle(a: &FiniteAlgebra, is: &[Partition]) -> Result<Partition> {
    let r = RingReduct::require(a)?;
    check_inputs(a, is, &Caps { max_commutator_arity: usize::MAX, ..Caps::default() })?;
    let zero = r.add.identity;
    let n = a.size();
    let ideals: Vec<Vec<bool>> = is.iter().map(|i| (0..n).map(|x| i.related(x, zero)).collect()).collect();
    let mut sum = vec![false; n];
    for sigma in permutations(is.len()) {
        let mut prod = ideals[sigma[0]].clone();
        for &j in &sigma[1..] {
            let gens: Vec<usize> = (0..n)
                .filter(|&x| prod[x])
                .flat_map(|x| (0..n).filter(|&y| ideals[j][y]).map(move |y| (x, y)))
                .map(|(x, y)| r.times(a, x, y))
                .collect();
            prod = r.span(a, &gens);
        }
        for (s, x) in sum.iter_mut().zip(prod) {
            *s |= x;
        }
    }
    let gens: Vec<usize> = (0..n).filter(|&x| sum[x]).collect();
    let ideal = r.span(a, &gens);
    Ok(Partition::from_labels(&r.add.coset_labels(a, &ideal)))
}

/// Least `k ≤ max_k` with `[ρ,…,ρ]` (`k+1` entries) equal to 0, or `None`.
pub fn supernilpotence_class(a: &FiniteAlgebra, relative_to: &Partition, max_k: usize, caps: &Caps) -> Result<Option<usize>> {
    if max_k + 1 > caps.max_commutator_arity {
        return Err(Error::CapExceeded {
            what: "commutator arity for the class bound",
            requested: max_k as u128 + 1,
            cap: caps.max_commutator_arity as u128,
        });
    }
    for k in 0..=max_k {
        let r = commutator(a, &vec![relative_to.clone(); k + 1], caps)?;
        if r.gamma.is_discrete() {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub instances: usize,
    pub violations: usize,
    pub first_violation: Option<String>,
}

impl PropertyOutcome {
    fn new(name: &'static str) -> Self {
        PropertyOutcome { name, instances: 0, violations: 0, first_violation: None }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.violations += 1;
            if self.first_violation.is_none() {
                self.first_violation = Some(describe());
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyReport {
    pub algebra: String,
    pub congruences: Vec<Partition>,
    pub max_k: usize,
    pub malcev_verified: bool,
    pub outcomes: Vec<PropertyOutcome>,
    /// Commutator of every tuple of congruence indices, as an index.
    #[serde(skip)]
    pub table: HashMap<Vec<usize>, usize>,
}

impl PropertyReport {
    pub fn violations(&self) -> usize {
        self.outcomes.iter().map(|o| o.violations).sum()
    }
}

fn tuples(len: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out.into_iter().flat_map(|t| (0..len).map(move |x| [t.clone(), vec![x]].concat())).collect();
    }
    out
}

/// Commutators of all ordered tuples of congruences with `k ≤ max_k`, checked against C1–C6.
///
/// Monotonicity (C2) is checked along covers in one coordinate at a time,
/// which implies it for all comparable tuples. Join distributivity (C5) is
/// checked for two joinands, which implies it for any finite number.
pub fn property_suite(a: &FiniteAlgebra, max_k: usize, caps: &Caps) -> Result<PropertyReport> {
    if max_k > caps.max_commutator_arity {
        return Err(Error::CapExceeded {
            what: "commutator arity",
            requested: max_k as u128,
            cap: caps.max_commutator_arity as u128,
        });
    }
    let con = con_lattice(a, caps)?;
    let lat = con.lattice().clone();
    let parts: Vec<Partition> = con.congruences().iter().map(|c| c.partition().clone()).collect();
    let mut comm = Commutators::new(a, caps);
    let mut table: HashMap<Vec<usize>, usize> = HashMap::new();
    for k in 1..=max_k {
        for t in tuples(parts.len(), k) {
            let alphas: Vec<Partition> = t.iter().map(|&i| parts[i].clone()).collect();
            let gamma = comm.gamma(&alphas)?;
            let idx = con
                .index_of(&gamma)
                .ok_or_else(|| Error::precondition(format!("commutator {gamma} is not in the congruence lattice")))?;
            table.insert(t, idx);
        }
    }
    let val = |t: &[usize]| table[t];
    let show = |t: &[usize]| format!("{:?}", t.iter().map(|&i| parts[i].to_string()).collect::<Vec<_>>());
    let mut c1 = PropertyOutcome::new("C1");
    let mut c2 = PropertyOutcome::new("C2");
    let mut c3 = PropertyOutcome::new("C3");
    let mut c4 = PropertyOutcome::new("C4");
    let mut c5 = PropertyOutcome::new("C5");
    let mut c6 = PropertyOutcome::new("C6");
    for k in 1..=max_k {
        for t in tuples(parts.len(), k) {
            let v = val(&t);
            let meet = t[1..].iter().fold(t[0], |m, &x| lat.meet(m, x));
            c1.record(lat.leq(v, meet), || format!("{} = {} ≰ meet", show(&t), parts[v]));
            for p in 0..k {
                for &(lo, hi) in con.covers() {
                    if lo == t[p] {
                        let mut u = t.clone();
                        u[p] = hi;
                        c2.record(lat.leq(v, val(&u)), || format!("{} ≰ {}", show(&t), show(&u)));
                    }
                }
            }
            if k >= 2 {
                c3.record(lat.leq(v, val(&t[1..])), || format!("{} ≰ {}", show(&t), show(&t[1..])));
                for sigma in permutations(k) {
                    let u: Vec<usize> = sigma.iter().map(|&i| t[i]).collect();
                    c4.record(val(&u) == v, || format!("{} ≠ {}", show(&t), show(&u)));
                }
            }
            for b in 0..parts.len() {
                let mut joined = t.clone();
                joined[0] = lat.join(t[0], b);
                let mut other = t.clone();
                other[0] = b;
                let rhs = lat.join(v, val(&other));
                c5.record(val(&joined) == rhs, || format!("[{} ∨ {}, …] with tail {}", parts[t[0]], parts[b], show(&t[1..])));
            }
            for split in 1..k {
                let inner = val(&t[..split]);
                let mut outer = vec![inner];
                outer.extend_from_slice(&t[split..]);
                c6.record(lat.leq(val(&outer), v), || format!("[[{}], {}] ≰ {}", show(&t[..split]), show(&t[split..]), show(&t)));
            }
        }
    }
    let malcev_verified = comm.has_malcev_term();
    Ok(PropertyReport {
        algebra: a.name().to_string(),
        congruences: parts,
        max_k,
        malcev_verified,
        outcomes: vec![c1, c2, c3, c4, c5, c6],
        table,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SdcomReport {
    pub left: Partition,
    pub right_a: Partition,
    pub right_b: Partition,
    /// `[γ₁,…,γ_k] ⊆ [π_A γ…] × [π_B γ…]`
    pub contained: bool,
    /// The projections of the left side equal the right-hand commutators.
    pub onto_a: bool,
    pub onto_b: bool,
}

impl SdcomReport {
    pub fn holds(&self) -> bool {
        self.contained && self.onto_a && self.onto_b
    }
}

fn projected_pairs(left: &Partition, map: &[usize], m: usize) -> Vec<bool> {
    let mut seen = vec![false; m * m];
    for (x, y) in left.pairs() {
        seen[map[x] * m + map[y]] = true;
    }
    seen
}

/// Checks `[γ₁,…,γ_k] ≤sd [π_A(γ₁),…] × [π_B(γ₁),…]` for a two-factor `C`.
///
/// `π_A(γ)` is the transitive closure of the image relation, which is the
/// congruence generated by it because the projection is onto.
pub fn sdcom_check(c: &SubproductAlgebra, gammas: &[Partition], caps: &Caps) -> Result<SdcomReport> {
    if c.factor_count() != 2 {
        return Err(Error::precondition("sdcom check needs a two-factor subproduct"));
    }
    c.require_subdirect()?;
    let ca = c.to_algebra(caps)?;
    let left = commutator(&ca, gammas, caps)?.gamma;
    let mut rights = Vec::new();
    for side in 0..2 {
        let f = &c.factors()[side];
        let map = c.projection_map(side);
        let images = gammas.iter().map(|g| g.image(&map, f.size())).collect::<Result<Vec<_>>>()?;
        let right = commutator(f, &images, caps)?.gamma;
        let seen = projected_pairs(&left, &map, f.size());
        let m = f.size();
        let contained = (0..m * m).all(|i| !seen[i] || right.related(i / m, i % m));
        let onto = right.pairs().iter().all(|&(x, y)| seen[x * m + y]);
        rights.push((right, contained, onto));
    }
    let (rb, cb, ob) = rights.pop().expect("two sides");
    let (ra, ca_ok, oa) = rights.pop().expect("two sides");
    Ok(SdcomReport { left, right_a: ra, right_b: rb, contained: ca_ok && cb, onto_a: oa, onto_b: ob })
}

/// Convenience: the congruence `[α₁,…,α_k]` wrapped for `a`.
pub fn commutator_congruence(a: &FiniteAlgebra, alphas: &[Partition], caps: &Caps) -> Result<Congruence> {
    Congruence::new(a, commutator(a, alphas, caps)?.gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    fn one(a: &FiniteAlgebra) -> Partition {
        Partition::total(a.size())
    }

    #[test]
    fn cube_generator_layout() {
        assert_eq!(CubeFunction::cube(1, 0, 3, 5).values, vec![3, 5]);
        assert_eq!(CubeFunction::cube(2, 0, 3, 5).values, vec![3, 3, 5, 5]);
        assert_eq!(CubeFunction::cube(2, 1, 3, 5).values, vec![3, 5, 3, 5]);
        let z2 = zoo::z2_plus_zero();
        let gens = cube_generators(&z2, &[one(&z2), one(&z2)], &Caps::default()).unwrap();
        assert_eq!(gens.len(), 8);
    }

    #[test]
    fn m_for_z2_is_the_even_parity_space() {
        let z2 = zoo::z2_plus_zero();
        let m = generate_m(&z2, &[one(&z2), one(&z2)], &Caps::default()).unwrap();
        assert_eq!(m.len(), 8);
        assert!(m.tuples().all(|f| f.iter().sum::<u32>() % 2 == 0));
        let k1 = generate_m(&z2, &[one(&z2)], &Caps::default()).unwrap();
        assert_eq!(k1.len(), 4);
    }

    #[test]
    fn arity_cap() {
        let z2 = zoo::z_mod(2);
        let err = generate_m(&z2, &vec![one(&z2); 4], &Caps::default()).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
    }

    #[test]
    fn known_commutators() {
        let caps = Caps::default();
        let z4 = zoo::z_mod(4);
        assert!(commutator(&z4, &[one(&z4), one(&z4)], &caps).unwrap().gamma.is_discrete());
        let s3 = zoo::symmetric_group_3();
        let r = commutator(&s3, &[one(&s3), one(&s3)], &caps).unwrap();
        assert_eq!(r.gamma.to_string(), "[[0,3,4],[1,2,5]]");
        let d4 = zoo::dihedral_group(4);
        assert!(!commutator(&d4, &[one(&d4), one(&d4)], &caps).unwrap().gamma.is_discrete());
        assert!(commutator(&d4, &vec![one(&d4); 3], &caps).unwrap().gamma.is_discrete());
    }

    #[test]
    fn unary_commutator_is_identity() {
        let caps = Caps::default();
        let z6 = zoo::z_mod(6);
        let m3 = Partition::from_labels(&(0..6).map(|x| x % 3).collect::<Vec<_>>());
        assert_eq!(commutator(&z6, &[m3.clone()], &caps).unwrap().gamma, m3);
    }

    #[test]
    fn oracles() {
        let s3 = zoo::symmetric_group_3();
        assert_eq!(group_oracle(&s3, &[one(&s3), one(&s3)]).unwrap().to_string(), "[[0,3,4],[1,2,5]]");
        assert!(group_oracle(&s3, &[one(&s3), Partition::discrete(6)]).unwrap().is_discrete());
        let d4 = zoo::dihedral_group(4);
        assert!(group_oracle(&d4, &vec![one(&d4); 3]).unwrap().is_discrete());
        let ideal2 = |n: usize| Partition::from_labels(&(0..n).map(|x| x % 2).collect::<Vec<_>>());
        let z4 = zoo::ring_z(4);
        assert!(ring_oracle(&z4, &[ideal2(4), ideal2(4)]).unwrap().is_discrete());
        let z8 = zoo::ring_z(8);
        let four = Partition::from_labels(&(0..8).map(|x| x % 4).collect::<Vec<_>>());
        assert_eq!(ring_oracle(&z8, &[ideal2(8), ideal2(8)]).unwrap(), four);
        assert!(ring_oracle(&z8, &vec![ideal2(8); 3]).unwrap().is_discrete());
        assert!(group_oracle(&zoo::lattice_2(), &[one(&zoo::lattice_2())]).is_err());
    }

    #[test]
    fn classes() {
        let caps = Caps::default();
        let z4 = zoo::z_mod(4);
        assert_eq!(supernilpotence_class(&z4, &one(&z4), 2, &caps).unwrap(), Some(1));
        let d4 = zoo::dihedral_group(4);
        assert_eq!(supernilpotence_class(&d4, &one(&d4), 2, &caps).unwrap(), Some(2));
        let s3 = zoo::symmetric_group_3();
        assert_eq!(supernilpotence_class(&s3, &one(&s3), 2, &caps).unwrap(), None);
        assert!(supernilpotence_class(&s3, &one(&s3), 3, &caps).is_err());
    }

    #[test]
    fn properties_on_s3() {
        let r = property_suite(&zoo::symmetric_group_3(), 3, &Caps::default()).unwrap();
        assert!(r.malcev_verified);
        assert_eq!(r.violations(), 0, "{:?}", r.outcomes);
        assert!(r.outcomes.iter().all(|o| o.instances > 0));
    }

    #[test]
    fn sdcom_on_sign_fiber() {
        let caps = Caps::default();
        let s3 = zoo::symmetric_group_3();
        let sign: Vec<usize> = (0..6).map(zoo::s3_sign).collect();
        let c = crate::subdirect::fiber_product(&s3, &s3, &zoo::cyclic_group(2), &sign, &sign, &caps).unwrap();
        let all = Partition::total(c.len());
        let r = sdcom_check(&c, &[all.clone(), all], &caps).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.left.block_count(), 2);
        let zero = Partition::discrete(c.len());
        assert!(sdcom_check(&c, &[zero.clone(), zero], &caps).unwrap().holds());
    }
}
