//! Python bindings: algebras, subproducts and the free-structure checks.

use std::path::Path;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use sdw_core::commutator::{supernilpotence_class, Commutators};
use sdw_core::free::lattice::{whitman_leq, xyz_claims, LatticeTerm};
use sdw_core::free::monoid::{monoid_relate, Bounds, Relation, RewritePresentation};
use sdw_core::free::monomial::{monomial_ideal_member, verify_intersection_generation, Sided};
use sdw_core::free::{parse_families, Word};
use sdw_core::io::{algebra_to_json, load_algebra, load_subproduct, parse_algebra};
use sdw_core::subdirect::{is_fiber_product, SubproductAlgebra};
use sdw_core::synthesis::{find_malcev_term, greedy_generating_set, lift_generators, thm41_gammas, verify_thm41a, MalcevOutcome, DEFAULT_MALCEV_BUDGET};
use sdw_core::{cg, con_lattice, zoo, Caps, FiniteAlgebra, Partition};

type Blocks = Vec<Vec<usize>>;

fn err(e: sdw_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn partition(a: &FiniteAlgebra, blocks: &Blocks) -> PyResult<Partition> {
    let p = Partition::from_blocks(a.size(), blocks).map_err(err)?;
    match a.compatibility_violation(&p) {
        Some(e) => Err(err(e)),
        None => Ok(p),
    }
}

/// A finite algebra.
#[pyclass(name = "Algebra", frozen, from_py_object)]
#[derive(Clone)]
struct PyAlgebra {
    inner: FiniteAlgebra,
}

#[pymethods]
impl PyAlgebra {
    /// A built-in algebra such as `s3`, `d4`, `zring8`, `m3`.
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        zoo::builtin(name)
            .map(|inner| PyAlgebra { inner })
            .ok_or_else(|| PyValueError::new_err(format!("unknown built-in algebra `{name}`")))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        parse_algebra(text, "<string>").map(|inner| PyAlgebra { inner }).map_err(err)
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        load_algebra(Path::new(path)).map(|inner| PyAlgebra { inner }).map_err(err)
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    fn signature(&self) -> Vec<(String, usize)> {
        self.inner.signature().symbols().iter().map(|s| (s.name.clone(), s.arity)).collect()
    }

    fn apply(&self, symbol: &str, args: Vec<usize>) -> PyResult<usize> {
        let s = self.inner.symbol(symbol).ok_or_else(|| PyValueError::new_err(format!("no operation `{symbol}`")))?;
        self.inner.try_apply(s, &args).map_err(err)
    }

    fn to_json(&self) -> String {
        algebra_to_json(&self.inner)
    }

    /// All congruences as block lists, bottom first and top last.
    fn congruences(&self) -> PyResult<Vec<Blocks>> {
        let lat = con_lattice(&self.inner, &Caps::from_env()).map_err(err)?;
        Ok(lat.congruences().iter().map(|c| c.partition().blocks()).collect())
    }

    fn cg(&self, pairs: Vec<(usize, usize)>) -> PyResult<Blocks> {
        Ok(cg(&self.inner, &pairs, &Caps::from_env()).map_err(err)?.partition().blocks())
    }

    /// `[α₁,…,α_k]` for congruences given as block lists.
    fn commutator(&self, congruences: Vec<Blocks>) -> PyResult<Blocks> {
        let alphas = congruences.iter().map(|b| partition(&self.inner, b)).collect::<PyResult<Vec<_>>>()?;
        let res = Commutators::new(&self.inner, &Caps::from_env()).compute(&alphas).map_err(err)?;
        Ok(res.gamma.blocks())
    }

    /// Supernilpotence class of the total congruence, or `None` beyond `max_k`.
    #[pyo3(signature = (max_k = 2))]
    fn supernilpotence_class(&self, max_k: usize) -> PyResult<Option<usize>> {
        let total = Partition::total(self.inner.size());
        supernilpotence_class(&self.inner, &total, max_k, &Caps::from_env()).map_err(err)
    }

    /// A Mal'cev term in prefix syntax, `None` when none exists, raising when the budget runs out.
    #[pyo3(signature = (budget = DEFAULT_MALCEV_BUDGET))]
    fn malcev_term(&self, budget: u64) -> PyResult<Option<String>> {
        match find_malcev_term(&self.inner, budget).map_err(err)? {
            MalcevOutcome::Found(w) => Ok(Some(w.rendered)),
            MalcevOutcome::NoneInVariety { .. } => Ok(None),
            MalcevOutcome::BudgetExhausted { explored } => {
                Err(PyValueError::new_err(format!("budget exhausted after {explored} term operations")))
            }
        }
    }

    fn __repr__(&self) -> String {
        format!("Algebra({}, size={})", self.inner.name(), self.inner.size())
    }
}

/// A subalgebra of a finite direct product.
#[pyclass(name = "Subproduct", frozen)]
struct PySubproduct {
    inner: SubproductAlgebra,
}

#[pymethods]
impl PySubproduct {
    /// Generated by `generators`, or exactly the given `elements`.
    #[new]
    #[pyo3(signature = (factors, generators = None, elements = None))]
    fn new(factors: Vec<PyAlgebra>, generators: Option<Blocks>, elements: Option<Blocks>) -> PyResult<Self> {
        let fs: Vec<FiniteAlgebra> = factors.into_iter().map(|f| f.inner).collect();
        let caps = Caps::from_env();
        let inner = match (generators, elements) {
            (Some(g), None) => SubproductAlgebra::generated(fs, &g, &caps),
            (None, Some(e)) => SubproductAlgebra::from_elements(fs, &e, &caps),
            _ => return Err(PyValueError::new_err("give exactly one of generators and elements")),
        }
        .map_err(err)?;
        Ok(PySubproduct { inner })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        load_subproduct(Path::new(path), &Caps::from_env()).map(|inner| PySubproduct { inner }).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn tuples(&self) -> Blocks {
        self.inner.tuples().collect()
    }

    fn is_subdirect(&self) -> bool {
        self.inner.is_subdirect()
    }

    fn is_fiber_product(&self) -> PyResult<bool> {
        Ok(is_fiber_product(&self.inner, &Caps::from_env()).map_err(err)?.is_fiber_product())
    }

    /// `γ_j` on each factor.
    fn gammas(&self) -> PyResult<Vec<Blocks>> {
        Ok(thm41_gammas(&self.inner, &Caps::from_env()).map_err(err)?.iter().map(Partition::blocks).collect())
    }

    /// Whether the subproduct is a union of `γ_1 × ⋯ × γ_n` classes.
    fn union_of_gamma_classes(&self) -> PyResult<bool> {
        verify_thm41a(&self.inner, &Caps::from_env()).map_err(err)
    }

    fn greedy_generators(&self) -> PyResult<Blocks> {
        greedy_generating_set(&self.inner).map_err(err)
    }

    /// Lifted generators of a two-factor fiber product, using the term `term` (prefix syntax).
    fn lift(&self, gens_a: Vec<usize>, gens_b: Vec<usize>, lambda_pairs: Vec<(usize, usize)>, term: &str) -> PyResult<Blocks> {
        let sig = self.inner.factors()[0].signature();
        let m = sdw_core::Term::parse(term, sig).map_err(err)?;
        let cert = lift_generators(&self.inner, &gens_a, &gens_b, &lambda_pairs, &m, &Caps::from_env()).map_err(err)?;
        Ok(cert.generators())
    }
}

/// `p ≤ q` in the free lattice, for terms such as `x /\ (y \/ z)`.
#[pyfunction]
fn lattice_leq(p: &str, q: &str) -> PyResult<bool> {
    let (p, q) = (LatticeTerm::parse(p).map_err(err)?, LatticeTerm::parse(q).map_err(err)?);
    Ok(whitman_leq(&p, &q))
}

/// Whether the claims about the sequence `x_n, y_n, z_n` hold up to `max_n`.
#[pyfunction]
#[pyo3(signature = (max_n = 6))]
fn xyz_claims_hold(max_n: usize) -> PyResult<bool> {
    Ok(xyz_claims(max_n, &zoo::m3(), [1, 2, 3]).map_err(err)?.all_hold())
}

/// The words along a derivation of `u ~ v`, or `None` when none is found within the bounds.
#[pyfunction]
#[pyo3(signature = (presentation, u, v, max_len = 12, max_states = 1_000_000))]
fn monoid_relate_path(presentation: &str, u: &str, v: &str, max_len: usize, max_states: usize) -> PyResult<Option<Vec<String>>> {
    let pres = RewritePresentation::parse(presentation).map_err(err)?;
    let (u, v) = (Word::parse(u).map_err(err)?, Word::parse(v).map_err(err)?);
    Ok(match monoid_relate(&pres, &u, &v, Bounds { max_len, max_states }) {
        Relation::Related { path } => {
            let mut words = vec![u.to_string()];
            words.extend(path.iter().map(|s| s.to.to_string()));
            Some(words)
        }
        Relation::NotWithinBounds { .. } => None,
    })
}

#[pyfunction]
#[pyo3(signature = (generators, monomial, sided = "two"))]
fn ideal_member(generators: &str, monomial: &str, sided: &str) -> PyResult<bool> {
    let gens = parse_families(generators).map_err(err)?;
    let side: Sided = sided.parse().map_err(err)?;
    Ok(monomial_ideal_member(&gens, &Word::parse(monomial).map_err(err)?, side).is_some())
}

/// Whether `I ∩ J` and the ideal generated by `candidates` agree up to `max_degree`.
#[pyfunction]
#[pyo3(signature = (i_gens, j_gens, candidates, max_degree = 8))]
fn intersection_agrees(i_gens: &str, j_gens: &str, candidates: &str, max_degree: usize) -> PyResult<bool> {
    let f = |s: &str| parse_families(s).map_err(err);
    Ok(verify_intersection_generation(&f(i_gens)?, &f(j_gens)?, &f(candidates)?, b"xy", max_degree).agrees())
}

#[pymodule]
fn sdw(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyAlgebra>()?;
    m.add_class::<PySubproduct>()?;
    m.add_function(wrap_pyfunction!(lattice_leq, m)?)?;
    m.add_function(wrap_pyfunction!(xyz_claims_hold, m)?)?;
    m.add_function(wrap_pyfunction!(monoid_relate_path, m)?)?;
    m.add_function(wrap_pyfunction!(ideal_member, m)?)?;
    m.add_function(wrap_pyfunction!(intersection_agrees, m)?)?;
    Ok(())
}
