//! Finitely described submonoids of `N₀^k`, enumerated inside a box.

use serde::Serialize;

use crate::error::{Error, Result};

/// A generator or a one-parameter family `base + t·step` for `t` in `min..`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum VectorGenerator {
    Literal(Vec<usize>),
    Family { base: Vec<usize>, step: Vec<usize>, min: usize },
}

impl VectorGenerator {
    pub fn dim(&self) -> usize {
        match self {
            VectorGenerator::Literal(v) => v.len(),
            VectorGenerator::Family { base, .. } => base.len(),
        }
    }

    fn expand(&self, bound: usize) -> Vec<Vec<usize>> {
        match self {
            VectorGenerator::Literal(v) => {
                if v.iter().all(|&x| x <= bound) { vec![v.clone()] } else { vec![] }
            }
            VectorGenerator::Family { base, step, min } => {
                if step.iter().all(|&s| s == 0) {
                    return VectorGenerator::Literal(base.clone()).expand(bound);
                }
                let mut out = Vec::new();
                let mut t = *min;
                loop {
                    let v: Vec<usize> = base.iter().zip(step).map(|(b, s)| b + t * s).collect();
                    if v.iter().any(|&x| x > bound) {
                        break;
                    }
                    out.push(v);
                    t += 1;
                }
                out
            }
        }
    }

    /// Parses `1,0,3` or a family such as `0,2,n:n>=7` (`n` marks the varying coordinates).
    pub fn parse(text: &str) -> Result<Self> {
        let t: String = text.chars().filter(|c| !c.is_whitespace() && *c != '(' && *c != ')').collect();
        let (coords, cond) = match t.split_once(':') {
            Some((c, r)) => (c.to_string(), Some(r.to_string())),
            None => (t.clone(), None),
        };
        let mut base = Vec::new();
        let mut step = Vec::new();
        for part in coords.split(',') {
            let (b, s) = match part.split_once('+') {
                Some((b, v)) if v == "n" => (b.parse().map_err(|_| bad(text))?, 1),
                Some(_) => return Err(bad(text)),
                None if part == "n" => (0, 1),
                None => (part.parse().map_err(|_| bad(text))?, 0),
            };
            base.push(b);
            step.push(s);
        }
        if step.iter().all(|&s| s == 0) {
            if cond.is_some() {
                return Err(bad(text));
            }
            return Ok(VectorGenerator::Literal(base));
        }
        let min = match cond.as_deref() {
            None => 0,
            Some(r) => r.strip_prefix("n>=").and_then(|m| m.parse().ok()).ok_or_else(|| bad(text))?,
        };
        Ok(VectorGenerator::Family { base, step, min })
    }
}

fn bad(text: &str) -> Error {
    Error::Parse(format!("bad vector generator `{text}` (use `1,0,3` or `0,2,n:n>=7`)"))
}

/// All coordinate permutations of `v` (deduplicated).
pub fn permutations_of(v: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..v.len() {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..v.len()).filter(|i| !p.contains(i)).map(|i| [p.clone(), vec![i]].concat()).collect::<Vec<_>>()
            })
            .collect();
    }
    let mut res: Vec<Vec<usize>> = out.into_iter().map(|p| p.iter().map(|&i| v[i]).collect()).collect();
    res.sort();
    res.dedup();
    res
}

/// The part of a submonoid of `N₀^k` inside `{0..=bound}^k`.
#[derive(Debug, Clone)]
pub struct BoxMonoid {
    pub dim: usize,
    pub bound: usize,
    member: Vec<bool>,
}

impl BoxMonoid {
    fn index(&self, v: &[usize]) -> Option<usize> {
        if v.len() != self.dim || v.iter().any(|&x| x > self.bound) {
            return None;
        }
        Some(v.iter().fold(0, |acc, &x| acc * (self.bound + 1) + x))
    }

    fn vector(&self, mut i: usize) -> Vec<usize> {
        let mut v = vec![0; self.dim];
        for c in (0..self.dim).rev() {
            v[c] = i % (self.bound + 1);
            i /= self.bound + 1;
        }
        v
    }

    fn empty(dim: usize, bound: usize) -> Result<Self> {
        let cells = (bound as u128 + 1).checked_pow(dim as u32).filter(|&c| c <= 50_000_000).ok_or_else(|| {
            Error::CapExceeded { what: "box cells", requested: (bound as u128 + 1).saturating_pow(dim as u32), cap: 50_000_000 }
        })?;
        Ok(BoxMonoid { dim, bound, member: vec![false; cells as usize] })
    }

    /// The submonoid generated by `gens` (families expanded inside the box).
    pub fn generated(gens: &[VectorGenerator], bound: usize) -> Result<Self> {
        let dim = gens.first().map(VectorGenerator::dim).ok_or_else(|| Error::precondition("no generators"))?;
        if gens.iter().any(|g| g.dim() != dim) {
            return Err(Error::precondition("generators of different dimensions"));
        }
        let mut m = BoxMonoid::empty(dim, bound)?;
        let expanded: Vec<Vec<usize>> = gens.iter().flat_map(|g| g.expand(bound)).collect();
        // cells in increasing index order: every predecessor `v − g` has a smaller index
        m.member[0] = true;
        for i in 1..m.member.len() {
            let v = m.vector(i);
            m.member[i] = expanded.iter().any(|g| {
                g.iter().any(|&x| x > 0)
                    && v.iter().zip(g).all(|(a, b)| a >= b)
                    && m.member[m.index(&v.iter().zip(g).map(|(a, b)| a - b).collect::<Vec<_>>()).expect("in box")]
            });
        }
        Ok(m)
    }

    /// The subset of the box satisfying `pred` (which must describe a submonoid).
    pub fn from_predicate(dim: usize, bound: usize, pred: impl Fn(&[usize]) -> bool) -> Result<Self> {
        let mut m = BoxMonoid::empty(dim, bound)?;
        for i in 0..m.member.len() {
            m.member[i] = pred(&m.vector(i));
        }
        Ok(m)
    }

    pub fn contains(&self, v: &[usize]) -> Option<bool> {
        self.index(v).map(|i| self.member[i])
    }

    /// A decomposition `e = s + t` with nonzero `s, t` in the monoid (least `s`), or `None`.
    pub fn decomposition(&self, e: &[usize]) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
        match self.contains(e) {
            None => Err(Error::precondition(format!("{e:?} lies outside the box of bound {}", self.bound))),
            Some(false) => Err(Error::precondition(format!("{e:?} is not in the monoid"))),
            Some(true) => {
                let cells = e.iter().map(|&x| x + 1).product::<usize>();
                for k in 1..cells {
                    let mut s = vec![0; self.dim];
                    let mut r = k;
                    for c in (0..self.dim).rev() {
                        s[c] = r % (e[c] + 1);
                        r /= e[c] + 1;
                    }
                    let t: Vec<usize> = e.iter().zip(&s).map(|(a, b)| a - b).collect();
                    if t.iter().all(|&x| x == 0) {
                        continue;
                    }
                    if self.contains(&s) == Some(true) && self.contains(&t) == Some(true) {
                        return Ok(Some((s, t)));
                    }
                }
                Ok(None)
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PairCertificate {
    pub pair: (usize, usize),
    /// Generators projecting to `(1,0)` and `(0,1)`.
    pub unit_witnesses: Option<(Vec<usize>, Vec<usize>)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Indecomposability {
    pub element: Vec<usize>,
    pub indecomposable: bool,
    pub decomposition: Option<(Vec<usize>, Vec<usize>)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VectorMonoidReport {
    pub bound: usize,
    pub pairs: Vec<PairCertificate>,
    pub surjective_on_pairs: bool,
    pub elements: Vec<Indecomposability>,
}

/// Pair surjectivity via unit witnesses, and indecomposability of `queries` inside the box.
pub fn vector_monoid_analysis(gens: &[VectorGenerator], queries: &[Vec<usize>], bound: usize) -> Result<VectorMonoidReport> {
    let m = BoxMonoid::generated(gens, bound)?;
    let literal: Vec<Vec<usize>> = gens.iter().flat_map(|g| g.expand(bound)).collect();
    let mut pairs = Vec::new();
    for i in 0..m.dim {
        for j in i + 1..m.dim {
            let unit = |a: usize, b: usize| literal.iter().find(|g| (g[i], g[j]) == (a, b)).cloned();
            pairs.push(PairCertificate { pair: (i, j), unit_witnesses: unit(1, 0).zip(unit(0, 1)) });
        }
    }
    let surjective_on_pairs = pairs.iter().all(|p| p.unit_witnesses.is_some());
    let elements = queries
        .iter()
        .map(|e| {
            let d = m.decomposition(e)?;
            Ok(Indecomposability { element: e.clone(), indecomposable: d.is_none(), decomposition: d })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VectorMonoidReport { bound, pairs, surjective_on_pairs, elements })
}
