//! Mal'cev term search, generator lifting for two-factor subproducts and
//! finite-generation certificates for several factors.

use serde::Serialize;

use crate::algebra::{quotient, FiniteAlgebra};
use crate::closure::{close_tuples, greedy_generators, subuniverse_closure, ClosureOptions, ClosureStatus};
use crate::commutator::commutator;
use crate::config::Caps;
use crate::congruence::cg;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::reduct::GroupReduct;
use crate::subdirect::{factor_kernels, pair_report, project, union_of_classes, SubproductAlgebra};
use crate::term::{eval_term, Term};

/// Default element budget for [`find_malcev_term`].
pub const DEFAULT_MALCEV_BUDGET: u64 = 200_000;

/// A ternary term with `m(a,a,b) = b = m(b,a,a)` checked on every pair.
#[derive(Debug, Clone, Serialize)]
pub struct MalcevWitness {
    #[serde(skip)]
    pub term: Term,
    pub rendered: String,
    /// `m(a,a,b)` at row `a`, column `b`.
    pub left_table: Vec<Vec<usize>>,
    /// `m(b,a,a)` at row `a`, column `b`.
    pub right_table: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize)]
pub enum MalcevOutcome {
    Found(MalcevWitness),
    /// The closure completed without a Mal'cev element.
    NoneInVariety { closure_size: usize },
    BudgetExhausted { explored: usize },
}

/// Checks the Mal'cev identities for `term` on every pair; `None` if one fails.
pub fn verify_malcev(a: &FiniteAlgebra, term: &Term) -> Result<Option<MalcevWitness>> {
    term.check(a.signature(), 3)?;
    let n = a.size();
    let mut left_table = vec![vec![0; n]; n];
    let mut right_table = vec![vec![0; n]; n];
    for x in 0..n {
        for y in 0..n {
            let l = eval_term(a, term, &[x, x, y])?;
            let r = eval_term(a, term, &[y, x, x])?;
            if l != y || r != y {
                return Ok(None);
            }
            left_table[x][y] = l;
            right_table[x][y] = r;
        }
    }
    Ok(Some(MalcevWitness { term: term.clone(), rendered: term.display(a.signature()).to_string(), left_table, right_table }))
}

/// `x0 · x1^(e−1) · x2` for a group reduct of exponent `e`.
pub fn group_malcev_hint(a: &FiniteAlgebra) -> Option<Term> {
    let g = GroupReduct::detect(a)?;
    let exponent = (1..=a.size())
        .find(|&e| {
            (0..a.size()).all(|x| {
                let mut p = g.identity;
                for _ in 0..e {
                    p = g.mul(a, p, x);
                }
                p == g.identity
            })
        })
        .unwrap_or(1);
    let mul = |l: Term, r: Term| Term::app(g.op, vec![l, r]);
    let mut inv = Term::var(1);
    for _ in 1..exponent.saturating_sub(1) {
        inv = mul(inv, Term::var(1));
    }
    let left = if exponent == 1 { Term::var(0) } else { mul(Term::var(0), inv) };
    Some(mul(left, Term::var(2)))
}

/// Searches the 3-generated free algebra of the variety of `a` for a Mal'cev term.
///
/// Only the coordinates `(a,a,b)` and `(b,a,a)` of `A^{A³}` are kept. The
/// identities mention no other coordinate and the projection from the full
/// power is onto, so the answer is the same as in the full power.
pub fn find_malcev_term(a: &FiniteAlgebra, budget: u64) -> Result<MalcevOutcome> {
    let n = a.size();
    let mut coords: Vec<(usize, usize, usize)> = Vec::new();
    for x in 0..n {
        for y in 0..n {
            coords.push((x, x, y));
            coords.push((y, x, x));
        }
    }
    coords.sort_unstable();
    coords.dedup();
    let gens: Vec<Vec<u32>> = (0..3)
        .map(|v| coords.iter().map(|&(p, q, r)| [p, q, r][v] as u32).collect())
        .collect();
    let target: Vec<u32> = coords.iter().map(|&(p, q, r)| if p == q { r } else { p } as u32).collect();
    let stop = |t: &[u32]| t == target.as_slice();
    let refs = vec![a; coords.len()];
    let max_elements = usize::try_from(budget).unwrap_or(usize::MAX);
    let cl = close_tuples(&refs, &gens, &ClosureOptions { max_elements, stop: Some(&stop) })?;
    let found = match cl.status() {
        ClosureStatus::Stopped(i) => Some(i),
        _ => cl.position(&target),
    };
    if let Some(i) = found {
        let term = cl.term(i);
        return match verify_malcev(a, &term)? {
            Some(w) => Ok(MalcevOutcome::Found(w)),
            None => Err(Error::precondition("extracted term fails the Mal'cev identities")),
        };
    }
    Ok(match cl.status() {
        ClosureStatus::CapReached => MalcevOutcome::BudgetExhausted { explored: cl.len() },
        _ => MalcevOutcome::NoneInVariety { closure_size: cl.len() },
    })
}

/// Tries each hint, then falls back to the search.
pub fn find_malcev_term_with_hints(a: &FiniteAlgebra, hints: &[Term], budget: u64) -> Result<MalcevOutcome> {
    for h in hints {
        if let Some(w) = verify_malcev(a, h)? {
            return Ok(MalcevOutcome::Found(w));
        }
    }
    find_malcev_term(a, budget)
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificatePart {
    pub role: String,
    pub elements: Vec<Vec<usize>>,
}

/// A generating set with the role of each subset and the closure size it reached.
#[derive(Debug, Clone, Serialize)]
pub struct GenerationCertificate {
    pub parts: Vec<CertificatePart>,
    pub closure_size: usize,
    pub target_size: usize,
}

impl GenerationCertificate {
    pub fn generators(&self) -> Vec<Vec<usize>> {
        let mut g: Vec<Vec<usize>> = self.parts.iter().flat_map(|p| p.elements.iter().cloned()).collect();
        g.sort();
        g.dedup();
        g
    }

    pub fn generates(&self) -> bool {
        self.closure_size == self.target_size
    }
}

fn require_generates(a: &FiniteAlgebra, gens: &[usize], label: &str) -> Result<()> {
    if let Some(&x) = gens.iter().find(|&&x| x >= a.size()) {
        return Err(Error::ElementOutOfRange { element: x, size: a.size() });
    }
    let sub = subuniverse_closure(a, gens)?;
    if sub.len() != a.size() {
        return Err(Error::precondition(format!("{label} generates {} of {} elements", sub.len(), a.size())));
    }
    Ok(())
}

/// Lifts generators of `A`, `B` and of `λ_B` to a generating set of `C ≤sd A×B`.
///
/// Each witness is the least element of `C` (by flat index) with the required coordinates.
pub fn lift_generators(
    c: &SubproductAlgebra,
    x: &[usize],
    y: &[usize],
    u: &[(usize, usize)],
    m: &Term,
    caps: &Caps,
) -> Result<GenerationCertificate> {
    let kernels = factor_kernels(c)?;
    let (a, b) = (&c.factors()[0], &c.factors()[1]);
    require_generates(a, x, "X")?;
    require_generates(b, y, "Y")?;
    if u.iter().any(|&(p, q)| p >= b.size() || q >= b.size()) {
        return Err(Error::precondition("a pair in U lies outside B"));
    }
    let generated = cg(b, u, caps)?;
    if generated.partition() != kernels.lambda_b.partition() {
        return Err(Error::precondition(format!(
            "U generates {} but λ_B is {}",
            generated.partition(),
            kernels.lambda_b.partition()
        )));
    }
    for f in [a, b] {
        if verify_malcev(f, m)?.is_none() {
            return Err(Error::precondition(format!("the term is not a Mal'cev term on `{}`", f.name())));
        }
    }
    let tuples: Vec<Vec<usize>> = c.tuples().collect();
    let first = |pred: &dyn Fn(&[usize]) -> bool| tuples.iter().find(|t| pred(t)).cloned();
    let mut xs = Vec::new();
    for &g in x {
        xs.push(first(&|t| t[0] == g).expect("C is subdirect"));
    }
    let mut ys = Vec::new();
    for &g in y {
        ys.push(first(&|t| t[1] == g).expect("C is subdirect"));
    }
    let mut us = Vec::new();
    for &(p, q) in u {
        let w = (0..a.size()).find(|&s| c.contains(&[s, p]) && c.contains(&[s, q])).ok_or_else(|| {
            Error::precondition(format!("no a with (a,{p}) and (a,{q}) in C; C is not a fiber product over λ_B"))
        })?;
        us.push(vec![w, p]);
        us.push(vec![w, q]);
    }
    let parts = vec![
        CertificatePart { role: "lifts of A generators".into(), elements: xs },
        CertificatePart { role: "lifts of B generators".into(), elements: ys },
        CertificatePart { role: "lifts of λ_B generators".into(), elements: us },
    ];
    let mut cert = GenerationCertificate { parts, closure_size: 0, target_size: c.len() };
    let closure = SubproductAlgebra::generated(c.factors().to_vec(), &cert.generators(), caps)?;
    cert.closure_size = closure.len();
    if closure.elements() != c.elements() {
        return Err(Error::precondition(format!(
            "lifted set generates {} elements, C has {}",
            closure.len(),
            c.len()
        )));
    }
    Ok(cert)
}

fn check_factor_bound(c: &SubproductAlgebra, caps: &Caps) -> Result<()> {
    let n = c.factor_count();
    if n < 2 || n - 1 > caps.max_commutator_arity {
        return Err(Error::precondition(format!(
            "{n} factors need commutators of arity {}; supported are 2 to {} factors (commutator arity cap {})",
            n.saturating_sub(1),
            caps.max_commutator_arity + 1,
            caps.max_commutator_arity
        )));
    }
    Ok(())
}

/// `γ_j = [λ_{ij} : i ≠ j]` on each factor `A_j`.
pub fn thm41_gammas(c: &SubproductAlgebra, caps: &Caps) -> Result<Vec<Partition>> {
    check_factor_bound(c, caps)?;
    let report = pair_report(c)?;
    let n = c.factor_count();
    (0..n)
        .map(|j| {
            let lambdas: Vec<Partition> =
                (0..n).filter(|&i| i != j).map(|i| report.lambda(i, j).expect("pair present").clone()).collect();
            Ok(commutator(&c.factors()[j], &lambdas, caps)?.gamma)
        })
        .collect()
}

/// Whether `C` is a union of `γ₁×⋯×γ_n`-classes.
pub fn verify_thm41a(c: &SubproductAlgebra, caps: &Caps) -> Result<bool> {
    let gammas = thm41_gammas(c, caps)?;
    Ok(union_of_classes(c, &gammas)?.is_none())
}

#[derive(Debug, Clone, Serialize)]
pub struct FgReport {
    /// Clause (i): `X` generates `C` modulo `γ₁×⋯×γ_n`.
    pub modulo_gammas: bool,
    /// Pairs `(i,j)` where `π_{ij}(X)` fails to generate `π_{ij}(C)`.
    pub failed_pairs: Vec<(usize, usize)>,
    pub closure_size: usize,
    pub target_size: usize,
    pub certificate: Option<GenerationCertificate>,
}

impl FgReport {
    pub fn clauses_hold(&self) -> bool {
        self.modulo_gammas && self.failed_pairs.is_empty()
    }
}

/// Checks the two finite-generation clauses for `X ⊆ C` and closes `X` directly.
pub fn fg_certificate(c: &SubproductAlgebra, x: &[Vec<usize>], caps: &Caps) -> Result<FgReport> {
    c.require_subdirect()?;
    if let Some(t) = x.iter().find(|t| !c.contains(t)) {
        return Err(Error::precondition(format!("{t:?} is not an element of C")));
    }
    let n = c.factor_count();
    let gammas = thm41_gammas(c, caps)?;
    let quotients = c.factors().iter().zip(&gammas).map(|(f, g)| quotient(f, g)).collect::<Result<Vec<_>>>()?;
    let reduce = |t: &[usize]| -> Vec<usize> { t.iter().zip(&quotients).map(|(&v, q)| q.surjection[v]).collect() };
    let q_algebras: Vec<FiniteAlgebra> = quotients.iter().map(|q| q.algebra.clone()).collect();
    let image = SubproductAlgebra::from_elements(q_algebras.clone(), &c.tuples().map(|t| reduce(&t)).collect::<Vec<_>>(), caps)?;
    let x_mod: Vec<Vec<usize>> = x.iter().map(|t| reduce(t)).collect();
    let modulo_gammas = SubproductAlgebra::generated(q_algebras, &x_mod, caps)?.elements() == image.elements();
    let mut failed_pairs = Vec::new();
    let mut parts = vec![CertificatePart { role: "generates C modulo γ₁×⋯×γ_n".into(), elements: x.to_vec() }];
    for i in 0..n {
        for j in i + 1..n {
            let target = project(c, &[i, j], caps)?;
            let xs: Vec<Vec<usize>> = x.iter().map(|t| vec![t[i], t[j]]).collect();
            let got = SubproductAlgebra::generated(target.factors().to_vec(), &xs, caps)?;
            if got.elements() == target.elements() {
                parts.push(CertificatePart { role: format!("generates π_{{{i}{j}}}(C)"), elements: xs });
            } else {
                failed_pairs.push((i, j));
            }
        }
    }
    let closure_size = SubproductAlgebra::generated(c.factors().to_vec(), x, caps)?.len();
    let holds = modulo_gammas && failed_pairs.is_empty();
    Ok(FgReport {
        modulo_gammas,
        failed_pairs,
        closure_size,
        target_size: c.len(),
        certificate: holds.then(|| GenerationCertificate { parts, closure_size, target_size: c.len() }),
    })
}

/// Greedy generating set of `C`: add the element maximizing the closure, ties to the least.
pub fn greedy_generating_set(c: &SubproductAlgebra) -> Result<Vec<Vec<usize>>> {
    let refs: Vec<&FiniteAlgebra> = c.factors().iter().collect();
    let candidates: Vec<Vec<u32>> = c.tuples().map(|t| t.iter().map(|&v| v as u32).collect()).collect();
    let chosen = greedy_generators(&refs, &candidates, c.len())?;
    Ok(chosen.into_iter().map(|t| t.into_iter().map(|v| v as usize).collect()).collect())
}

/// Checks `λ_B = Cg_B(π_B(P))` for a set `P` generating `ker π_A`.
///
/// `P` links each element of `C` to the least element of its `ker π_A` class.
pub fn lambda_projection_check(c: &SubproductAlgebra, caps: &Caps) -> Result<bool> {
    let kernels = factor_kernels(c)?;
    let ker_a = c.projection_kernel(&[0]);
    let b = &c.factors()[1];
    let pairs: Vec<(usize, usize)> = (0..c.len())
        .filter(|&e| ker_a.rep(e) != e)
        .map(|e| (c.coordinate(e, 1), c.coordinate(ker_a.rep(e), 1)))
        .collect();
    Ok(cg(b, &pairs, caps)?.partition() == kernels.lambda_b.partition())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subdirect::fiber_product;
    use crate::zoo;

    fn found(a: &FiniteAlgebra) -> MalcevWitness {
        match find_malcev_term(a, DEFAULT_MALCEV_BUDGET).unwrap() {
            MalcevOutcome::Found(w) => w,
            other => panic!("no Mal'cev term for {}: {other:?}", a.name()),
        }
    }

    #[test]
    fn malcev_positive() {
        for a in [zoo::z2_plus_zero(), zoo::z_mod(4), zoo::symmetric_group_3(), zoo::affine_z(3), zoo::ring_z(4)] {
            let w = found(&a);
            assert!(verify_malcev(&a, &w.term).unwrap().is_some());
        }
    }

    #[test]
    fn malcev_negative() {
        for a in [zoo::meet_semilattice_2(), zoo::lattice_2(), zoo::monoid_2()] {
            let out = find_malcev_term(&a, DEFAULT_MALCEV_BUDGET).unwrap();
            assert!(matches!(out, MalcevOutcome::NoneInVariety { .. }), "{}: {out:?}", a.name());
        }
    }

    #[test]
    fn malcev_budget() {
        let out = find_malcev_term(&zoo::lattice_2(), 2).unwrap();
        assert!(matches!(out, MalcevOutcome::BudgetExhausted { .. }));
    }

    #[test]
    fn group_hints_verify() {
        for g in zoo::small_groups() {
            let h = group_malcev_hint(&g).unwrap();
            assert!(verify_malcev(&g, &h).unwrap().is_some(), "{}", g.name());
        }
        assert!(group_malcev_hint(&zoo::lattice_2()).is_none());
    }

    #[test]
    fn lifting_z4_fiber() {
        let caps = Caps::default();
        let z4 = zoo::z_mod(4);
        let mod2: Vec<usize> = (0..4).map(|x| x % 2).collect();
        let c = fiber_product(&z4, &z4, &zoo::z_mod(2), &mod2, &mod2, &caps).unwrap();
        let m = group_malcev_hint(&z4).unwrap();
        let cert = lift_generators(&c, &[1], &[1], &[(0, 2)], &m, &caps).unwrap();
        assert_eq!(cert.parts.iter().map(|p| p.elements.len()).sum::<usize>(), 4);
        assert_eq!(cert.generators().len(), 3);
        assert_eq!(cert.closure_size, 8);
        assert!(lift_generators(&c, &[1], &[1], &[], &m, &caps).is_err());
        assert!(lift_generators(&c, &[2], &[1], &[(0, 2)], &m, &caps).is_err());
    }

    #[test]
    fn lifting_diagonal_and_full() {
        let caps = Caps::default();
        let s3 = zoo::symmetric_group_3();
        let m = group_malcev_hint(&s3).unwrap();
        let d = SubproductAlgebra::diagonal(&s3, 2, &caps).unwrap();
        let cert = lift_generators(&d, &[1, 3], &[1, 3], &[], &m, &caps).unwrap();
        assert_eq!(cert.closure_size, 6);
        let full = SubproductAlgebra::full(vec![s3.clone(), s3.clone()], &caps).unwrap();
        let cert = lift_generators(&full, &[1, 3], &[1, 3], &[(0, 1), (0, 3)], &m, &caps).unwrap();
        assert_eq!(cert.closure_size, 36);
    }

    fn sign_triple(caps: &Caps) -> SubproductAlgebra {
        let s3 = zoo::symmetric_group_3();
        let elems: Vec<Vec<usize>> = (0..216)
            .map(|i| vec![i / 36, i / 6 % 6, i % 6])
            .filter(|t| zoo::s3_sign(t[0]) ^ zoo::s3_sign(t[1]) ^ zoo::s3_sign(t[2]) == 0)
            .collect();
        SubproductAlgebra::from_elements(vec![s3.clone(), s3.clone(), s3], &elems, caps).unwrap()
    }

    #[test]
    fn gammas_and_class_union() {
        let caps = Caps::default();
        let c = sign_triple(&caps);
        let gammas = thm41_gammas(&c, &caps).unwrap();
        assert!(gammas.iter().all(|g| g.to_string() == "[[0,3,4],[1,2,5]]"));
        assert!(verify_thm41a(&c, &caps).unwrap());
        let z4 = zoo::z_mod(4);
        let elems: Vec<Vec<usize>> =
            (0..64).map(|i| vec![i / 16, i / 4 % 4, i % 4]).filter(|t| t[0] % 2 == t[1] % 2 && t[1] % 2 == t[2] % 2).collect();
        let c = SubproductAlgebra::from_elements(vec![z4.clone(), z4.clone(), z4], &elems, &caps).unwrap();
        assert!(verify_thm41a(&c, &caps).unwrap());
        let d4 = zoo::dihedral_group(4);
        let full = SubproductAlgebra::full(vec![d4.clone(), d4.clone(), d4.clone()], &caps).unwrap();
        let gammas = thm41_gammas(&full, &caps).unwrap();
        assert_eq!(gammas[0].block_count(), 4);
    }

    #[test]
    fn five_factors_rejected() {
        let caps = Caps::default();
        let z2 = zoo::z_mod(2);
        let d = SubproductAlgebra::diagonal(&z2, 5, &caps).unwrap();
        assert!(thm41_gammas(&d, &caps).is_err());
    }

    #[test]
    fn certificates() {
        let caps = Caps::default();
        let c = sign_triple(&caps);
        let all: Vec<Vec<usize>> = c.tuples().collect();
        let r = fg_certificate(&c, &all, &caps).unwrap();
        assert!(r.clauses_hold() && r.certificate.is_some());
        let greedy = greedy_generating_set(&c).unwrap();
        let r = fg_certificate(&c, &greedy, &caps).unwrap();
        assert!(r.clauses_hold());
        assert_eq!(r.closure_size, 108);
        // elements with equal first two coordinates cannot generate π_{01}(C)
        let thin: Vec<Vec<usize>> = c.tuples().filter(|t| t[0] == t[1]).collect();
        let r = fg_certificate(&c, &thin, &caps).unwrap();
        assert!(r.failed_pairs.contains(&(0, 1)));
        assert!(r.certificate.is_none());
        assert!(r.closure_size < r.target_size);
    }

    #[test]
    fn kernel_generation_identity() {
        let caps = Caps::default();
        let s3 = zoo::symmetric_group_3();
        let sign: Vec<usize> = (0..6).map(zoo::s3_sign).collect();
        let c = fiber_product(&s3, &s3, &zoo::cyclic_group(2), &sign, &sign, &caps).unwrap();
        assert!(lambda_projection_check(&c, &caps).unwrap());
    }
}
