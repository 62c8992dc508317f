//! Seeded random subdirect products and fiber products built from the zoo.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::algebra::{direct_product, is_homomorphism, missed_by, quotient, FiniteAlgebra};
use crate::closure::subuniverse_closure;
use crate::config::Caps;
use crate::congruence::con_lattice;
use crate::error::{Error, Result};
use crate::subdirect::SubproductAlgebra;
use crate::synthesis::group_malcev_hint;
use crate::term::Term;
use crate::zoo;

/// Nontrivial groups of order at most 8.
pub fn group_pool() -> Vec<FiniteAlgebra> {
    zoo::small_groups().into_iter().filter(|g| g.size() > 1).collect()
}

/// Groups of order at most 8 together with the small rings.
pub fn group_and_ring_pool() -> Vec<FiniteAlgebra> {
    let mut pool = group_pool();
    pool.extend(zoo::small_rings());
    pool
}

/// Nontrivial abelian groups and commutative rings of order at most 8.
pub fn abelian_pool() -> Vec<FiniteAlgebra> {
    let mut pool: Vec<FiniteAlgebra> = zoo::small_abelian_groups().into_iter().filter(|g| g.size() > 1).collect();
    pool.extend(zoo::small_commutative_rings());
    pool
}

fn pick_factors<R: Rng>(rng: &mut R, pool: &[FiniteAlgebra], n: usize) -> Result<Vec<FiniteAlgebra>> {
    let first = pool.choose(rng).ok_or_else(|| Error::precondition("empty algebra pool"))?.clone();
    let same: Vec<&FiniteAlgebra> = pool.iter().filter(|p| p.signature() == first.signature()).collect();
    let mut factors = vec![first];
    for _ in 1..n {
        factors.push((*same.choose(rng).expect("contains the first factor")).clone());
    }
    Ok(factors)
}

fn random_tuple<R: Rng>(rng: &mut R, factors: &[FiniteAlgebra]) -> Vec<usize> {
    factors.iter().map(|f| rng.random_range(0..f.size())).collect()
}

/// A subdirect product of `n` factors of one signature drawn from `pool`,
/// generated by one or two random tuples plus more until it is subdirect.
pub fn random_subdirect<R: Rng>(rng: &mut R, pool: &[FiniteAlgebra], n: usize, caps: &Caps) -> Result<SubproductAlgebra> {
    let factors = pick_factors(rng, pool, n)?;
    let mut gens: Vec<Vec<usize>> = (0..rng.random_range(1..=2)).map(|_| random_tuple(rng, &factors)).collect();
    loop {
        let c = SubproductAlgebra::generated(factors.clone(), &gens, caps)?;
        if c.is_subdirect() {
            return Ok(c);
        }
        gens.push(random_tuple(rng, &factors));
    }
}

/// Least-first generating set: add the least element outside the current closure.
pub fn simple_generators(a: &FiniteAlgebra) -> Result<Vec<usize>> {
    let mut gens = Vec::new();
    loop {
        let sub = subuniverse_closure(a, &gens)?;
        match (0..a.size()).find(|&x| !sub.contains(x)) {
            Some(x) => gens.push(x),
            None => return Ok(gens),
        }
    }
}

/// A surjective homomorphism `b → d`, trying generator images in random order.
pub fn random_onto_hom<R: Rng>(rng: &mut R, b: &FiniteAlgebra, d: &FiniteAlgebra) -> Result<Option<Vec<usize>>> {
    b.same_signature(d)?;
    let gens = simple_generators(b)?;
    let sub = subuniverse_closure(b, &gens)?;
    let total = d.size().checked_pow(gens.len() as u32).filter(|&t| t <= 1 << 16).ok_or_else(|| {
        Error::precondition("too many generator assignments to search")
    })?;
    let mut order: Vec<usize> = (0..total).collect();
    order.shuffle(rng);
    for code in order {
        let mut r = code;
        let images: Vec<usize> = gens
            .iter()
            .map(|_| {
                let v = r % d.size();
                r /= d.size();
                v
            })
            .collect();
        let mut map = vec![0; b.size()];
        for (i, el) in sub.elements.iter().enumerate() {
            map[el.element] = sub.replay(d, &images, i);
        }
        if missed_by(&map, d.size()).is_none() && is_homomorphism(b, d, &map)? {
            return Ok(Some(map));
        }
    }
    Ok(None)
}

/// Data of a fiber product `{(a,b) : g(a) = h(b)}`.
#[derive(Debug, Clone)]
pub struct FiberData {
    pub a: FiniteAlgebra,
    pub b: FiniteAlgebra,
    pub d: FiniteAlgebra,
    pub g: Vec<usize>,
    pub h: Vec<usize>,
}

/// `D = A/θ` for a random congruence `θ`, with a random onto map from `B`.
pub fn random_fiber<R: Rng>(rng: &mut R, pool: &[FiniteAlgebra], caps: &Caps) -> Result<FiberData> {
    for _ in 0..1000 {
        let f = pick_factors(rng, pool, 2)?;
        let lattice = con_lattice(&f[0], caps)?;
        let theta = lattice.congruences().choose(rng).expect("lattice has 0 and 1").partition().clone();
        let q = quotient(&f[0], &theta)?;
        if let Some(h) = random_onto_hom(rng, &f[1], &q.algebra)? {
            let [a, b]: [FiniteAlgebra; 2] = f.try_into().expect("two factors");
            return Ok(FiberData { a, b, d: q.algebra, g: q.surjection, h });
        }
    }
    Err(Error::precondition("no fiber product found after 1000 draws"))
}

/// A Mal'cev term shared by all `factors`, from the group reduct of their product.
pub fn shared_malcev_hint(factors: &[FiniteAlgebra], caps: &Caps) -> Result<Option<Term>> {
    let refs: Vec<&FiniteAlgebra> = factors.iter().collect();
    Ok(group_malcev_hint(&direct_product(&refs, caps)?.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subdirect::fiber_product;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn random_products_are_subdirect() {
        let mut rng = StdRng::seed_from_u64(7);
        let pool = group_and_ring_pool();
        for n in [2, 3] {
            for _ in 0..10 {
                let c = random_subdirect(&mut rng, &pool, n, &Caps::default()).unwrap();
                assert!(c.is_subdirect());
                assert_eq!(c.factor_count(), n);
            }
        }
    }

    #[test]
    fn random_fibers_are_fiber_products() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..10 {
            let f = random_fiber(&mut rng, &abelian_pool(), &Caps::default()).unwrap();
            let c = fiber_product(&f.a, &f.b, &f.d, &f.g, &f.h, &Caps::default()).unwrap();
            assert!(c.is_subdirect());
            assert_eq!(c.len() * f.d.size(), f.a.size() * f.b.size());
        }
    }

    #[test]
    fn generators_and_seeds() {
        assert_eq!(simple_generators(&zoo::cyclic_group(6)).unwrap(), vec![1]);
        let draw = |seed| {
            let mut rng = StdRng::seed_from_u64(seed);
            random_subdirect(&mut rng, &group_pool(), 2, &Caps::default()).unwrap().elements().to_vec()
        };
        assert_eq!(draw(3), draw(3));
        let hint = shared_malcev_hint(&[zoo::cyclic_group(4), zoo::cyclic_group(2)], &Caps::default()).unwrap();
        assert!(hint.is_some());
    }
}
