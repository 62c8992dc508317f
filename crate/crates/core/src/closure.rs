//! Subuniverse generation with derivation tracking.
//!
//! The engine works on tuples: an element is a vector of coordinates, each
//! coordinate living in its own factor algebra, and operations act
//! coordinatewise. A single algebra is the width-one case. Elements are
//! discovered with a semi-naive worklist: when element `i` is processed every
//! operation is applied to the argument tuples over `{0,…,i}` that use `i`
//! at least once, so each tuple is evaluated exactly once.

use std::hash::{BuildHasher, Hasher};

use hashbrown::HashTable;
use rustc_hash::FxBuildHasher;

use crate::algebra::{FiniteAlgebra, Signature};
use crate::error::{Error, Result};
use crate::term::Term;

/// How an element was first obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Recipe {
    Generator(usize),
    /// `symbol` applied to earlier elements (by discovery index).
    Apply { symbol: usize, args: Vec<u32> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureStatus {
    Complete,
    /// The stop predicate fired on this element.
    Stopped(usize),
    /// The element cap was reached before the closure completed.
    CapReached,
}

/// Elements of a generated subuniverse in discovery order.
#[derive(Debug, Clone)]
pub struct TupleClosure {
    width: usize,
    data: Vec<u32>,
    hashes: Vec<u64>,
    recipes: Vec<Recipe>,
    index: HashTable<u32>,
    status: ClosureStatus,
}

impl TupleClosure {
    fn empty(width: usize) -> Self {
        TupleClosure {
            width,
            data: Vec::new(),
            hashes: Vec::new(),
            recipes: Vec::new(),
            index: HashTable::new(),
            status: ClosureStatus::Complete,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.recipes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.recipes.is_empty()
    }

    pub fn status(&self) -> ClosureStatus {
        self.status
    }

    pub fn is_complete(&self) -> bool {
        self.status == ClosureStatus::Complete
    }

    pub fn get(&self, i: usize) -> &[u32] {
        &self.data[i * self.width..(i + 1) * self.width]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.data.chunks_exact(self.width.max(1)).take(self.len())
    }

    pub fn recipe(&self, i: usize) -> &Recipe {
        &self.recipes[i]
    }

    fn hash_of(tuple: &[u32]) -> u64 {
        let mut h = FxBuildHasher.build_hasher();
        for &c in tuple {
            h.write_u32(c);
        }
        h.finish()
    }

    pub fn position(&self, tuple: &[u32]) -> Option<usize> {
        let hash = Self::hash_of(tuple);
        self.index
            .find(hash, |&i| self.get(i as usize) == tuple)
            .map(|&i| i as usize)
    }

    pub fn contains(&self, tuple: &[u32]) -> bool {
        self.position(tuple).is_some()
    }

    /// Inserts unless present; returns the index and whether it was new.
    fn insert(&mut self, tuple: &[u32], recipe: impl FnOnce() -> Recipe) -> (usize, bool) {
        let hash = Self::hash_of(tuple);
        let data = &self.data;
        let width = self.width;
        if let Some(&i) = self
            .index
            .find(hash, |&i| &data[i as usize * width..(i as usize + 1) * width] == tuple)
        {
            return (i as usize, false);
        }
        let i = self.recipes.len();
        self.data.extend_from_slice(tuple);
        self.hashes.push(hash);
        self.recipes.push(recipe());
        let hashes = &self.hashes;
        self.index.insert_unique(hash, i as u32, |&j| hashes[j as usize]);
        (i, true)
    }

    /// The term (over the generators as variables) recorded for element `i`.
    pub fn term(&self, i: usize) -> Term {
        match &self.recipes[i] {
            Recipe::Generator(g) => Term::Var(*g),
            Recipe::Apply { symbol, args } => {
                Term::App(*symbol, args.iter().map(|&a| self.term(a as usize)).collect())
            }
        }
    }
}

/// Options for [`close_tuples`].
pub struct ClosureOptions<'a> {
    pub max_elements: usize,
    pub stop: Option<&'a dyn Fn(&[u32]) -> bool>,
}

impl Default for ClosureOptions<'_> {
    fn default() -> Self {
        ClosureOptions { max_elements: usize::MAX, stop: None }
    }
}

/// Inserts `tuple`; returns true when the closure must stop.
fn admit(
    cl: &mut TupleClosure,
    opts: &ClosureOptions<'_>,
    tuple: &[u32],
    recipe: impl FnOnce() -> Recipe,
) -> bool {
    if cl.len() >= opts.max_elements && !cl.contains(tuple) {
        cl.status = ClosureStatus::CapReached;
        return true;
    }
    let (i, new) = cl.insert(tuple, recipe);
    if new {
        if let Some(stop) = opts.stop {
            if stop(tuple) {
                cl.status = ClosureStatus::Stopped(i);
                return true;
            }
        }
    }
    false
}

/// Generates the subuniverse of `∏ coords[c]` spanned by `generators`.
///
/// Ties in discovery order go to generator index, then symbol order, then
/// argument order.
pub fn close_tuples(
    coords: &[&FiniteAlgebra],
    generators: &[Vec<u32>],
    opts: &ClosureOptions<'_>,
) -> Result<TupleClosure> {
    let width = coords.len();
    let sig: Signature = match coords.first() {
        Some(a) => a.signature().clone(),
        None => return Err(Error::precondition("closure over a product of no factors")),
    };
    for a in &coords[1..] {
        if a.signature() != &sig {
            a.same_signature(coords[0])?;
        }
    }
    for g in generators {
        if g.len() != width {
            return Err(Error::precondition(format!(
                "generator of width {} in a product of width {width}",
                g.len()
            )));
        }
        for (c, &x) in g.iter().enumerate() {
            if x as usize >= coords[c].size() {
                return Err(Error::ElementOutOfRange { element: x as usize, size: coords[c].size() });
            }
        }
    }

    let mut cl = TupleClosure::empty(width);
    let sizes: Vec<usize> = coords.iter().map(|a| a.size()).collect();
    let mut out = vec![0u32; width];

    for (g, tuple) in generators.iter().enumerate() {
        if admit(&mut cl, opts, tuple, || Recipe::Generator(g)) {
            return Ok(cl);
        }
    }
    for s in 0..sig.len() {
        if sig.arity(s) == 0 {
            for (c, a) in coords.iter().enumerate() {
                out[c] = a.table(s)[0];
            }
            let tuple = out.clone();
            if admit(&mut cl, opts, &tuple, || Recipe::Apply { symbol: s, args: vec![] }) {
                return Ok(cl);
            }
        }
    }

    let tables: Vec<Vec<&[u32]>> = (0..sig.len())
        .map(|s| coords.iter().map(|a| a.table(s)).collect())
        .collect();
    let mut args: Vec<u32> = Vec::new();
    let mut i = 0;
    while i < cl.len() {
        for s in 0..sig.len() {
            let arity = sig.arity(s);
            if arity == 0 {
                continue;
            }
            let tab = &tables[s];
            // p = position of the first occurrence of i
            for p in 0..arity {
                if p > 0 && i == 0 {
                    break;
                }
                args.clear();
                args.resize(arity, 0);
                args[p] = i as u32;
                loop {
                    match arity {
                        1 => {
                            let x = cl.get(args[0] as usize);
                            for c in 0..width {
                                out[c] = tab[c][x[c] as usize];
                            }
                        }
                        2 => {
                            let x = cl.get(args[0] as usize);
                            let y = cl.get(args[1] as usize);
                            for c in 0..width {
                                out[c] = tab[c][x[c] as usize * sizes[c] + y[c] as usize];
                            }
                        }
                        _ => {
                            for c in 0..width {
                                let mut off = 0usize;
                                for &a in args.iter() {
                                    off = off * sizes[c] + cl.get(a as usize)[c] as usize;
                                }
                                out[c] = tab[c][off];
                            }
                        }
                    }
                    let tuple = std::mem::take(&mut out);
                    let stop = admit(&mut cl, opts, &tuple, || Recipe::Apply { symbol: s, args: args.clone() });
                    out = tuple;
                    if stop {
                        return Ok(cl);
                    }
                    // advance the odometer over positions != p, lexicographically:
                    // positions before p range over [0, i), after p over [0, i]
                    let mut pos = arity;
                    let mut advanced = false;
                    while pos > 0 {
                        pos -= 1;
                        if pos == p {
                            continue;
                        }
                        let limit = if pos < p { i } else { i + 1 };
                        args[pos] += 1;
                        if (args[pos] as usize) < limit {
                            advanced = true;
                            break;
                        }
                        args[pos] = 0;
                    }
                    if !advanced {
                        break;
                    }
                }
            }
        }
        i += 1;
    }
    Ok(cl)
}

/// An element of a single algebra with the derivation that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedElement {
    pub element: usize,
    /// `Apply` arguments index into the surrounding element list.
    pub recipe: Recipe,
}

/// `⟨X⟩` in a single algebra, elements in discovery order.
#[derive(Debug, Clone)]
pub struct Subuniverse {
    pub elements: Vec<DerivedElement>,
    members: Vec<bool>,
}

impl Subuniverse {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.get(x).copied().unwrap_or(false)
    }

    /// Sorted member list.
    pub fn set(&self) -> Vec<usize> {
        (0..self.members.len()).filter(|&x| self.members[x]).collect()
    }

    /// Term over the generators (as `x0, x1, …`) producing element number `i`.
    pub fn term(&self, i: usize) -> Term {
        match &self.elements[i].recipe {
            Recipe::Generator(g) => Term::Var(*g),
            Recipe::Apply { symbol, args } => {
                Term::App(*symbol, args.iter().map(|&a| self.term(a as usize)).collect())
            }
        }
    }

    /// Recomputes element `i` from its recipe.
    pub fn replay(&self, a: &FiniteAlgebra, generators: &[usize], i: usize) -> usize {
        match &self.elements[i].recipe {
            Recipe::Generator(g) => generators[*g],
            Recipe::Apply { symbol, args } => {
                let vals: Vec<usize> = args.iter().map(|&j| self.replay(a, generators, j as usize)).collect();
                a.apply(*symbol, &vals)
            }
        }
    }
}

/// The smallest subset of `a` containing `generators` and closed under all operations.
pub fn subuniverse_closure(a: &FiniteAlgebra, generators: &[usize]) -> Result<Subuniverse> {
    let gens: Vec<Vec<u32>> = generators.iter().map(|&g| vec![g as u32]).collect();
    let cl = close_tuples(&[a], &gens, &ClosureOptions::default())?;
    let mut members = vec![false; a.size()];
    let elements = (0..cl.len())
        .map(|i| {
            let x = cl.get(i)[0] as usize;
            members[x] = true;
            DerivedElement { element: x, recipe: cl.recipe(i).clone() }
        })
        .collect();
    Ok(Subuniverse { elements, members })
}

/// Greedy generating set: repeatedly add the element whose addition yields the
/// largest closure, ties to the least element, until `target` is reached.
pub fn greedy_generators(
    coords: &[&FiniteAlgebra],
    candidates: &[Vec<u32>],
    target_size: usize,
) -> Result<Vec<Vec<u32>>> {
    let mut chosen: Vec<Vec<u32>> = Vec::new();
    let mut current = close_tuples(coords, &chosen, &ClosureOptions::default())?;
    while current.len() < target_size {
        let mut best: Option<(usize, usize, TupleClosure)> = None;
        for (ci, c) in candidates.iter().enumerate() {
            if current.contains(c) {
                continue;
            }
            let mut trial = chosen.clone();
            trial.push(c.clone());
            let cl = close_tuples(coords, &trial, &ClosureOptions::default())?;
            if best.as_ref().is_none_or(|(_, sz, _)| cl.len() > *sz) {
                best = Some((ci, cl.len(), cl));
            }
        }
        match best {
            Some((ci, _, cl)) => {
                chosen.push(candidates[ci].clone());
                current = cl;
            }
            None => {
                return Err(Error::precondition(
                    "candidates do not generate a subuniverse of the target size",
                ))
            }
        }
    }
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn one_generates_z4() {
        let z4 = zoo::z_mod(4);
        assert_eq!(subuniverse_closure(&z4, &[1]).unwrap().set(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn two_generates_even_subgroup() {
        let z4 = zoo::z_mod(4);
        assert_eq!(subuniverse_closure(&z4, &[2]).unwrap().set(), vec![0, 2]);
    }

    #[test]
    fn empty_generators_close_constants() {
        let z4 = zoo::z_mod(4);
        assert_eq!(subuniverse_closure(&z4, &[]).unwrap().set(), vec![0]);
        let semilattice = zoo::meet_semilattice_2();
        assert!(subuniverse_closure(&semilattice, &[]).unwrap().is_empty());
    }

    #[test]
    fn ternary_operation_closure() {
        // Z5 with only the Mal'cev operation x - y + z
        let z5 = zoo::affine_z(5);
        let sub = subuniverse_closure(&z5, &[0, 1]).unwrap();
        assert_eq!(sub.set(), vec![0, 1, 2, 3, 4]);
        for (i, d) in sub.elements.iter().enumerate() {
            assert_eq!(sub.replay(&z5, &[0, 1], i), d.element);
        }
    }

    #[test]
    fn recipes_replay_and_terms_evaluate() {
        let s3 = zoo::symmetric_group_3();
        let gens = [1, 3];
        let sub = subuniverse_closure(&s3, &gens).unwrap();
        assert_eq!(sub.len(), 6);
        for (i, d) in sub.elements.iter().enumerate() {
            assert_eq!(sub.replay(&s3, &gens, i), d.element);
            let t = sub.term(i);
            assert_eq!(crate::term::eval_term(&s3, &t, &gens).unwrap(), d.element);
        }
    }

    #[test]
    fn element_cap_is_reported() {
        let z4 = zoo::z_mod(4);
        let opts = ClosureOptions { max_elements: 2, stop: None };
        let cl = close_tuples(&[&z4], &[vec![1]], &opts).unwrap();
        assert_eq!(cl.status(), ClosureStatus::CapReached);
        assert_eq!(cl.len(), 2);
    }
}
