//! Subdirect and fiber products, factor kernels and pairwise projections.
//!
//! Coordinates are 0-based throughout.

use serde::Serialize;

use crate::algebra::{homomorphism_violation, kernel, missed_by, quotient, FiniteAlgebra, MixedRadix};
use crate::closure::{close_tuples, ClosureOptions, ClosureStatus};
use crate::config::Caps;
use crate::congruence::Congruence;
use crate::error::{Error, Result};
use crate::partition::{Partition, UnionFind};
use crate::reduct::GroupReduct;

/// A subuniverse of `A_0 × ⋯ × A_{n−1}` stored as sorted flat product indices
/// plus a membership bitset over the whole product.
#[derive(Debug, Clone)]
pub struct SubproductAlgebra {
    factors: Vec<FiniteAlgebra>,
    codec: MixedRadix,
    elements: Vec<u64>,
    members: Vec<u64>,
}

fn check_factors(factors: &[FiniteAlgebra], caps: &Caps) -> Result<MixedRadix> {
    let first = factors.first().ok_or_else(|| Error::precondition("a subproduct needs at least one factor"))?;
    for f in &factors[1..] {
        first.same_signature(f)?;
    }
    let codec = MixedRadix::new(factors.iter().map(FiniteAlgebra::size).collect())?;
    if codec.total() > caps.max_carrier {
        return Err(Error::CapExceeded {
            what: "product carrier",
            requested: codec.total() as u128,
            cap: caps.max_carrier as u128,
        });
    }
    Ok(codec)
}

impl SubproductAlgebra {
    fn from_sorted(factors: Vec<FiniteAlgebra>, codec: MixedRadix, mut elements: Vec<u64>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        let mut members = vec![0u64; (codec.total() as usize).div_ceil(64)];
        for &e in &elements {
            members[(e / 64) as usize] |= 1 << (e % 64);
        }
        SubproductAlgebra { factors, codec, elements, members }
    }

    /// The subuniverse generated by `generators` (coordinate tuples).
    pub fn generated(factors: Vec<FiniteAlgebra>, generators: &[Vec<usize>], caps: &Caps) -> Result<Self> {
        let codec = check_factors(&factors, caps)?;
        let gens: Vec<Vec<u32>> = generators.iter().map(|g| g.iter().map(|&x| x as u32).collect()).collect();
        let refs: Vec<&FiniteAlgebra> = factors.iter().collect();
        let cl = close_tuples(&refs, &gens, &ClosureOptions { max_elements: caps.max_carrier as usize, stop: None })?;
        if cl.status() == ClosureStatus::CapReached {
            return Err(Error::CapExceeded {
                what: "generated subproduct",
                requested: cl.len() as u128 + 1,
                cap: caps.max_carrier as u128,
            });
        }
        let elements = cl.iter().map(|t| codec.encode_u32(t)).collect();
        Ok(SubproductAlgebra::from_sorted(factors, codec, elements))
    }

    /// A subproduct given by its element list; fails if the list is not closed.
    pub fn from_elements(factors: Vec<FiniteAlgebra>, elements: &[Vec<usize>], caps: &Caps) -> Result<Self> {
        let given = SubproductAlgebra::generated(factors, elements, caps)?;
        let mut listed: Vec<u64> = elements.iter().map(|t| given.codec.encode(t)).collect();
        listed.sort_unstable();
        listed.dedup();
        if listed.len() != given.len() {
            let extra = given.elements.iter().find(|e| listed.binary_search(e).is_err()).copied().unwrap_or(0);
            return Err(Error::precondition(format!(
                "element list is not closed under the operations: it generates {:?}",
                given.codec.decode(extra)
            )));
        }
        Ok(given)
    }

    /// The full product `A_0 × ⋯ × A_{n−1}`.
    pub fn full(factors: Vec<FiniteAlgebra>, caps: &Caps) -> Result<Self> {
        let codec = check_factors(&factors, caps)?;
        let elements = (0..codec.total()).collect();
        Ok(SubproductAlgebra::from_sorted(factors, codec, elements))
    }

    /// `{(a,…,a)}` in `A^n`.
    pub fn diagonal(a: &FiniteAlgebra, n: usize, caps: &Caps) -> Result<Self> {
        let factors = vec![a.clone(); n];
        let codec = check_factors(&factors, caps)?;
        let elements = (0..a.size()).map(|x| codec.encode(&vec![x; n])).collect();
        Ok(SubproductAlgebra::from_sorted(factors, codec, elements))
    }

    pub fn factors(&self) -> &[FiniteAlgebra] {
        &self.factors
    }

    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    pub fn codec(&self) -> &MixedRadix {
        &self.codec
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Sorted flat product indices.
    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn tuple(&self, i: usize) -> Vec<usize> {
        self.codec.decode(self.elements[i])
    }

    pub fn tuples(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.elements.iter().map(|&e| self.codec.decode(e))
    }

    pub fn coordinate(&self, i: usize, c: usize) -> usize {
        self.codec.coordinate(self.elements[i], c)
    }

    pub fn contains_flat(&self, e: u64) -> bool {
        e < self.codec.total() && self.members[(e / 64) as usize] >> (e % 64) & 1 == 1
    }

    pub fn contains(&self, tuple: &[usize]) -> bool {
        tuple.len() == self.factor_count()
            && tuple.iter().zip(&self.factors).all(|(&x, f)| x < f.size())
            && self.contains_flat(self.codec.encode(tuple))
    }

    /// Position of a tuple in the sorted element list.
    pub fn index_of(&self, tuple: &[usize]) -> Option<usize> {
        if !self.contains(tuple) {
            return None;
        }
        self.elements.binary_search(&self.codec.encode(tuple)).ok()
    }

    /// `(coordinate, missed element)` for the first projection that is not onto.
    pub fn subdirect_violation(&self) -> Option<(usize, usize)> {
        for (c, f) in self.factors.iter().enumerate() {
            let mut hit = vec![false; f.size()];
            for i in 0..self.len() {
                hit[self.coordinate(i, c)] = true;
            }
            if let Some(x) = hit.iter().position(|h| !h) {
                return Some((c, x));
            }
        }
        None
    }

    pub fn is_subdirect(&self) -> bool {
        self.subdirect_violation().is_none()
    }

    pub fn require_subdirect(&self) -> Result<()> {
        match self.subdirect_violation() {
            Some((coordinate, missing)) => Err(Error::NotSubdirect { coordinate, missing }),
            None => Ok(()),
        }
    }

    /// `ker π_I` on the element indices: equality on the coordinates in `coords`.
    pub fn projection_kernel(&self, coords: &[usize]) -> Partition {
        let labels: Vec<Vec<usize>> =
            (0..self.len()).map(|i| coords.iter().map(|&c| self.coordinate(i, c)).collect()).collect();
        Partition::from_labels(&labels)
    }

    /// The projection `C → A_c` as a map on element indices.
    pub fn projection_map(&self, c: usize) -> Vec<usize> {
        (0..self.len()).map(|i| self.coordinate(i, c)).collect()
    }

    /// `C` as an algebra on its element indices (sorted order).
    pub fn to_algebra(&self, caps: &Caps) -> Result<FiniteAlgebra> {
        let sig = self.factors[0].signature().clone();
        let m = self.len();
        let max_arity = sig.symbols().iter().map(|s| s.arity).max().unwrap_or(0);
        let entries = (m as u128).pow(max_arity as u32);
        if entries > caps.max_carrier as u128 * 16 {
            return Err(Error::CapExceeded {
                what: "subproduct operation table",
                requested: entries,
                cap: caps.max_carrier as u128 * 16,
            });
        }
        let tuples: Vec<Vec<usize>> = self.tuples().collect();
        let names: Vec<&str> = self.factors.iter().map(FiniteAlgebra::name).collect();
        let mut out = vec![0usize; self.factor_count()];
        let mut args = Vec::new();
        FiniteAlgebra::from_fn(format!("C≤{}", names.join("×")), m, sig, |s, xs| {
            for (c, f) in self.factors.iter().enumerate() {
                args.clear();
                args.extend(xs.iter().map(|&x| tuples[x][c]));
                out[c] = f.apply(s, &args);
            }
            self.index_of(&out).expect("subproduct is closed")
        })
    }
}

/// `{(a,b) : g(a) = h(b)}` for surjective homomorphisms `g: A → D`, `h: B → D`.
pub fn fiber_product(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    d: &FiniteAlgebra,
    g: &[usize],
    h: &[usize],
    caps: &Caps,
) -> Result<SubproductAlgebra> {
    for (dom, map, label) in [(a, g, "g"), (b, h, "h")] {
        if let Some(v) = homomorphism_violation(dom, d, map)? {
            return Err(Error::NotHomomorphism(format!("{label}: {v}")));
        }
        if let Some(x) = missed_by(map, d.size()) {
            return Err(Error::NotSurjective(x));
        }
    }
    let factors = vec![a.clone(), b.clone()];
    let codec = check_factors(&factors, caps)?;
    let mut elements = Vec::new();
    for x in 0..a.size() {
        for y in 0..b.size() {
            if g[x] == h[y] {
                elements.push(codec.encode(&[x, y]));
            }
        }
    }
    Ok(SubproductAlgebra::from_sorted(factors, codec, elements))
}

/// Factor kernels of a two-factor subdirect product and its quotient.
#[derive(Debug, Clone)]
pub struct FactorKernels {
    pub lambda_a: Congruence,
    pub lambda_b: Congruence,
    /// `C/(ker π_A ∨ ker π_B)`, blocks indexed as the blocks of `λ_A`.
    pub quotient: FiniteAlgebra,
    /// Block of `A/λ_A` ↦ block of `B/λ_B` through `C`; verified to be an isomorphism.
    pub bijection: Vec<usize>,
}

/// `(π_i(ker π_i ∨ ker π_j), π_j(ker π_i ∨ ker π_j), number of classes)`.
///
/// Blocks of the join are the connected components of the bipartite graph
/// with an edge `a_i — a_j` for every element of `C`.
fn pair_lambdas(c: &SubproductAlgebra, i: usize, j: usize) -> (Partition, Partition, usize) {
    let ni = c.factors[i].size();
    let nj = c.factors[j].size();
    let mut uf = UnionFind::new(ni + nj);
    for e in 0..c.len() {
        uf.union(c.coordinate(e, i), ni + c.coordinate(e, j));
    }
    let li: Vec<usize> = (0..ni).map(|x| uf.find(x)).collect();
    let lj: Vec<usize> = (0..nj).map(|y| uf.find(ni + y)).collect();
    let pi = Partition::from_labels(&li);
    let count = pi.block_count();
    (pi, Partition::from_labels(&lj), count)
}

pub fn factor_kernels(c: &SubproductAlgebra) -> Result<FactorKernels> {
    if c.factor_count() != 2 {
        return Err(Error::precondition(format!("factor kernels need 2 factors, got {}", c.factor_count())));
    }
    c.require_subdirect()?;
    let (a, b) = (&c.factors[0], &c.factors[1]);
    let (la, lb, _) = pair_lambdas(c, 0, 1);
    let lambda_a = Congruence::new(a, la)?;
    let lambda_b = Congruence::new(b, lb)?;
    let qa = quotient(a, lambda_a.partition())?;
    let qb = quotient(b, lambda_b.partition())?;
    let mut bijection = vec![usize::MAX; qa.algebra.size()];
    for e in 0..c.len() {
        let (x, y) = (c.coordinate(e, 0), c.coordinate(e, 1));
        let (bx, by) = (qa.surjection[x], qb.surjection[y]);
        if bijection[bx] != usize::MAX && bijection[bx] != by {
            return Err(Error::precondition("factor kernel blocks do not match through C"));
        }
        bijection[bx] = by;
    }
    if qa.algebra.size() != qb.algebra.size() || missed_by(&bijection, qb.algebra.size()).is_some() {
        return Err(Error::precondition("A/λ_A and B/λ_B differ in size"));
    }
    if let Some(v) = homomorphism_violation(&qa.algebra, &qb.algebra, &bijection)? {
        return Err(Error::NotHomomorphism(format!("induced bijection A/λ_A → B/λ_B: {v}")));
    }
    let quotient = qa.algebra.with_name(format!("{}/λ", c.factors.iter().map(FiniteAlgebra::name).collect::<Vec<_>>().join("×")));
    Ok(FactorKernels { lambda_a, lambda_b, quotient, bijection })
}

/// Fiber-product representation `(D, g, h)` of a two-factor subproduct.
#[derive(Debug, Clone)]
pub struct FiberWitness {
    pub d: FiniteAlgebra,
    pub g: Vec<usize>,
    pub h: Vec<usize>,
}

/// Result of the fiber-product test.
#[derive(Debug, Clone)]
pub struct FleischerReport {
    /// `ker π_A ∘ ker π_B = ker π_B ∘ ker π_A`
    pub kernels_permute: bool,
    /// Elements `(a,b), (c,d)` of `C` with `(a,d) ∈ C` but `(c,b) ∉ C`.
    pub rectangle_witness: Option<([usize; 2], [usize; 2])>,
    pub fiber: Option<FiberWitness>,
}

impl FleischerReport {
    pub fn is_fiber_product(&self) -> bool {
        self.fiber.is_some()
    }
}

/// Whether `C ≤sd A×B` is a fiber product.
///
/// `((a,b),(c,d))` lies in `ker π_A ∘ ker π_B` exactly when `(a,d) ∈ C`, and in
/// `ker π_B ∘ ker π_A` exactly when `(c,b) ∈ C`, so the kernels permute iff
/// `C` is closed under exchanging second coordinates in this sense. When they
/// do, `D = A/λ_A` with the canonical maps is returned and re-checked.
pub fn is_fiber_product(c: &SubproductAlgebra, caps: &Caps) -> Result<FleischerReport> {
    let fk = factor_kernels(c)?;
    let tuples: Vec<[usize; 2]> = c.tuples().map(|t| [t[0], t[1]]).collect();
    let mut witness = None;
    'outer: for p in &tuples {
        for q in &tuples {
            if c.contains(&[p[0], q[1]]) != c.contains(&[q[0], p[1]]) {
                witness = Some(if c.contains(&[p[0], q[1]]) { (*p, *q) } else { (*q, *p) });
                break 'outer;
            }
        }
    }
    if witness.is_some() {
        return Ok(FleischerReport { kernels_permute: false, rectangle_witness: witness, fiber: None });
    }
    let (a, b) = (&c.factors[0], &c.factors[1]);
    let g = quotient(a, fk.lambda_a.partition())?.surjection;
    let mut inverse = vec![0usize; fk.bijection.len()];
    for (x, &y) in fk.bijection.iter().enumerate() {
        inverse[y] = x;
    }
    let h: Vec<usize> = quotient(b, fk.lambda_b.partition())?.surjection.iter().map(|&y| inverse[y]).collect();
    let rebuilt = fiber_product(a, b, &fk.quotient, &g, &h, caps)?;
    if rebuilt.elements != c.elements {
        return Err(Error::precondition("permuting kernels but the fiber product differs from C"));
    }
    Ok(FleischerReport { kernels_permute: true, rectangle_witness: None, fiber: Some(FiberWitness { d: fk.quotient, g, h }) })
}

/// `π_I(C)` with the factor list restricted (and reordered) to `coords`.
pub fn project(c: &SubproductAlgebra, coords: &[usize], caps: &Caps) -> Result<SubproductAlgebra> {
    if coords.is_empty() {
        return Err(Error::precondition("projection onto an empty coordinate set"));
    }
    let mut seen = vec![false; c.factor_count()];
    for &i in coords {
        if i >= c.factor_count() {
            return Err(Error::precondition(format!("coordinate {i} out of range for {} factors", c.factor_count())));
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::precondition(format!("coordinate {i} repeated")));
        }
    }
    let factors: Vec<FiniteAlgebra> = coords.iter().map(|&i| c.factors[i].clone()).collect();
    let codec = check_factors(&factors, caps)?;
    let mut proj = vec![0usize; coords.len()];
    let elements = (0..c.len())
        .map(|e| {
            for (slot, &i) in proj.iter_mut().zip(coords) {
                *slot = c.coordinate(e, i);
            }
            codec.encode(&proj)
        })
        .collect();
    Ok(SubproductAlgebra::from_sorted(factors, codec, elements))
}

#[derive(Debug, Clone, Serialize)]
pub struct PairEntry {
    pub i: usize,
    pub j: usize,
    /// `π_{ij}(C) = A_i × A_j`
    pub surjective: bool,
    /// `|A_j/λ_{ij}| = |A_i/λ_{ji}|`
    pub quotient_size: usize,
    /// `λ_{ij}` on `A_j`
    pub lambda_ij: Partition,
    /// `λ_{ji}` on `A_i`
    pub lambda_ji: Partition,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairReport {
    pub pairs: Vec<PairEntry>,
}

impl PairReport {
    pub fn surjective_on_pairs(&self) -> bool {
        self.pairs.iter().all(|p| p.surjective)
    }

    pub fn entry(&self, i: usize, j: usize) -> Option<&PairEntry> {
        self.pairs.iter().find(|p| (p.i, p.j) == (i.min(j), i.max(j)))
    }

    /// `λ_{ij} = π_j(ker π_i ∨ ker π_j)` as a congruence-partition of `A_j`, for `i ≠ j`.
    pub fn lambda(&self, i: usize, j: usize) -> Option<&Partition> {
        let e = self.entry(i, j)?;
        Some(if i < j { &e.lambda_ij } else { &e.lambda_ji })
    }
}

pub fn pair_report(c: &SubproductAlgebra) -> Result<PairReport> {
    c.require_subdirect()?;
    let n = c.factor_count();
    if n < 2 {
        return Err(Error::precondition("pair report needs at least 2 factors"));
    }
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (lji, lij, quotient_size) = pair_lambdas(c, i, j);
            let (ni, nj) = (c.factors[i].size(), c.factors[j].size());
            let mut seen = vec![false; ni * nj];
            for e in 0..c.len() {
                seen[c.coordinate(e, i) * nj + c.coordinate(e, j)] = true;
            }
            let q_other = lij.block_count();
            debug_assert_eq!(q_other, quotient_size);
            pairs.push(PairEntry {
                i,
                j,
                surjective: seen.iter().all(|&s| s),
                quotient_size,
                lambda_ij: lij,
                lambda_ji: lji,
            });
        }
    }
    Ok(PairReport { pairs })
}

/// Whether `C` is a union of `θ_0 × ⋯ × θ_{n−1}`-classes; on failure, the
/// least (flat index) tuple of the first failing class that lies outside `C`.
///
/// Classes are boxes, so it suffices that every single-coordinate move inside
/// a block stays in `C`.
pub fn union_of_classes(c: &SubproductAlgebra, thetas: &[Partition]) -> Result<Option<Vec<usize>>> {
    if thetas.len() != c.factor_count() {
        return Err(Error::precondition(format!("{} congruences for {} factors", thetas.len(), c.factor_count())));
    }
    for (k, (t, f)) in thetas.iter().zip(&c.factors).enumerate() {
        if t.len() != f.size() {
            return Err(Error::AlgebraMismatch(format!("congruence {k} has {} elements, factor has {}", t.len(), f.size())));
        }
    }
    let blocks: Vec<Vec<Vec<usize>>> = thetas.iter().map(Partition::blocks).collect();
    let block_of: Vec<Vec<usize>> = thetas.iter().map(Partition::block_indices).collect();
    for e in 0..c.len() {
        let t = c.tuple(e);
        let mut moved = t.clone();
        let escapes = (0..t.len()).any(|k| {
            let ok = blocks[k][block_of[k][t[k]]].iter().all(|&x| {
                moved[k] = x;
                c.contains(&moved)
            });
            moved[k] = t[k];
            !ok
        });
        if escapes {
            // enumerate the class in flat order for the least escaping tuple
            let class: Vec<&Vec<usize>> = (0..t.len()).map(|k| &blocks[k][block_of[k][t[k]]]).collect();
            let mut idx = vec![0usize; t.len()];
            loop {
                let cand: Vec<usize> = idx.iter().enumerate().map(|(k, &i)| class[k][i]).collect();
                if !c.contains(&cand) {
                    return Ok(Some(cand));
                }
                let mut k = t.len();
                loop {
                    if k == 0 {
                        unreachable!("escaping class has an outside tuple");
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < class[k].len() {
                        break;
                    }
                    idx[k] = 0;
                }
            }
        }
    }
    Ok(None)
}

/// Outcome of the index/kernel check for a fiber product of abelian-group expansions.
#[derive(Debug, Clone, Serialize)]
pub struct ModuleQuotientCheck {
    pub product_size: usize,
    pub fiber_size: usize,
    pub d_size: usize,
    /// `|A×B| / |C| = |D|`
    pub index_matches: bool,
    /// `(a,b) ↦ g(a) − h(b)` is a surjective homomorphism of the group reducts with kernel exactly `C`.
    pub kernel_is_c: bool,
}

impl ModuleQuotientCheck {
    pub fn holds(&self) -> bool {
        self.index_matches && self.kernel_is_c
    }
}

fn abelian_reduct(a: &FiniteAlgebra) -> Result<GroupReduct> {
    GroupReduct::detect(a)
        .filter(|g| g.abelian)
        .ok_or_else(|| Error::precondition(format!("`{}` has no abelian group operation", a.name())))
}

/// For the fiber product `C` of `g: A → D`, `h: B → D`, checks `A×B/C ≅ D`.
pub fn module_fiber_quotient_check(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    d: &FiniteAlgebra,
    g: &[usize],
    h: &[usize],
    caps: &Caps,
) -> Result<ModuleQuotientCheck> {
    let c = fiber_product(a, b, d, g, h, caps)?;
    let (ga, gb, gd) = (abelian_reduct(a)?, abelian_reduct(b)?, abelian_reduct(d)?);
    if ga.op != gd.op || gb.op != gd.op {
        return Err(Error::precondition("group operations of the factors and D use different symbols"));
    }
    let phi = |x: usize, y: usize| gd.mul(d, g[x], gd.inverse[h[y]]);
    let (na, nb) = (a.size(), b.size());
    let mut hom = true;
    'hom: for x in 0..na {
        for y in 0..nb {
            for x2 in 0..na {
                for y2 in 0..nb {
                    let lhs = phi(ga.mul(a, x, x2), gb.mul(b, y, y2));
                    if lhs != gd.mul(d, phi(x, y), phi(x2, y2)) {
                        hom = false;
                        break 'hom;
                    }
                }
            }
        }
    }
    let mut hit = vec![false; d.size()];
    let mut kernel_matches = true;
    for x in 0..na {
        for y in 0..nb {
            let v = phi(x, y);
            hit[v] = true;
            if (v == gd.identity) != c.contains(&[x, y]) {
                kernel_matches = false;
            }
        }
    }
    let product_size = na * nb;
    Ok(ModuleQuotientCheck {
        product_size,
        fiber_size: c.len(),
        d_size: d.size(),
        index_matches: product_size % c.len() == 0 && product_size / c.len() == d.size(),
        kernel_is_c: hom && kernel_matches && hit.iter().all(|&v| v),
    })
}

/// `ker π_c` on the element indices of `C`.
pub fn kernel_on(c: &SubproductAlgebra, coord: usize) -> Partition {
    kernel(&c.projection_map(coord))
}
