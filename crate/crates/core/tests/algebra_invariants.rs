use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use sdw_core::commutator::commutator;
use sdw_core::sample::{group_and_ring_pool, random_subdirect};
use sdw_core::subdirect::{is_fiber_product, pair_report};
use sdw_core::synthesis::verify_thm41a;
use sdw_core::{cg, con_lattice, Caps, FiniteAlgebra, Partition, Signature};

/// A random algebra with one binary and one unary operation.
fn algebra() -> impl Strategy<Value = FiniteAlgebra> {
    (2usize..=4).prop_flat_map(|n| {
        (proptest::collection::vec(0..n, n * n), proptest::collection::vec(0..n, n)).prop_map(move |(bin, un)| {
            let sig = Signature::new([("f", 2), ("g", 1)]).unwrap();
            FiniteAlgebra::from_fn("R", n, sig, |s, a| if s == 0 { bin[a[0] * n + a[1]] } else { un[a[0]] })
                .unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cg_is_least_compatible_partition(a in algebra(), x in 0usize..4, y in 0usize..4) {
        let n = a.size();
        let pair = (x % n, y % n);
        let caps = Caps::default();
        let theta = cg(&a, &[pair], &caps).unwrap();
        prop_assert!(a.is_compatible(theta.partition()));
        prop_assert!(theta.partition().related(pair.0, pair.1));
        for c in con_lattice(&a, &caps).unwrap().congruences() {
            prop_assert!(a.is_compatible(c.partition()));
            if c.partition().related(pair.0, pair.1) {
                prop_assert!(theta.leq(c));
            }
        }
    }

    #[test]
    fn congruence_lattice_is_closed(a in algebra()) {
        let caps = Caps::default();
        let lat = con_lattice(&a, &caps).unwrap();
        let cons = lat.congruences();
        prop_assert!(cons[lat.bottom()].is_zero() && cons[lat.top()].is_one());
        for p in cons {
            for q in cons {
                prop_assert!(lat.index_of(p.meet(q).unwrap().partition()).is_some());
                prop_assert!(lat.index_of(p.join(q).unwrap().partition()).is_some());
            }
        }
    }

    #[test]
    fn commutator_lies_below_meet(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let caps = Caps::default();
        let c = random_subdirect(&mut rng, &group_and_ring_pool(), 2, &caps).unwrap();
        let a = &c.factors()[0];
        let cons: Vec<Partition> = con_lattice(a, &caps).unwrap().congruences().iter().map(|c| c.partition().clone()).collect();
        let (i, j) = ((seed % cons.len() as u64) as usize, ((seed >> 16) % cons.len() as u64) as usize);
        let gamma = commutator(a, &[cons[i].clone(), cons[j].clone()], &caps).unwrap().gamma;
        prop_assert!(gamma.leq(&cons[i].meet(&cons[j]).unwrap()));
    }

    #[test]
    fn subdirect_products_of_malcev_factors(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let caps = Caps::default();
        let c = random_subdirect(&mut rng, &group_and_ring_pool(), 2, &caps).unwrap();
        prop_assert!(is_fiber_product(&c, &caps).unwrap().is_fiber_product());
        let c3 = random_subdirect(&mut rng, &group_and_ring_pool(), 3, &caps).unwrap();
        let pairs = pair_report(&c3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    prop_assert!(c3.factors()[j].is_compatible(pairs.lambda(i, j).unwrap()));
                }
            }
        }
        prop_assert!(verify_thm41a(&c3, &caps).unwrap());
    }
}
