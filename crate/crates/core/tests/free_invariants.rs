use proptest::prelude::*;

use sdw_core::algebra::direct_product;
use sdw_core::free::lattice::{lattice_eval, whitman_leq, LatticeOps, LatticeTerm};
use sdw_core::free::monoid::{monoid_relate, replay, Bounds, Relation, RewritePresentation};
use sdw_core::free::Word;
use sdw_core::{zoo, Caps, FiniteAlgebra};

fn term(depth: u32, gens: usize) -> impl Strategy<Value = LatticeTerm> {
    let leaf = (0..gens).prop_map(LatticeTerm::gen);
    leaf.prop_recursive(depth, 32, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.meet(b)),
            (inner.clone(), inner).prop_map(|(a, b)| a.join(b)),
        ]
    })
}

fn chain(n: usize) -> FiniteAlgebra {
    let leq: Vec<Vec<bool>> = (0..n).map(|x| (0..n).map(|y| x <= y).collect()).collect();
    zoo::lattice_from_order(&format!("C{n}"), &leq)
}

fn small_lattices() -> Vec<FiniteAlgebra> {
    let l2 = zoo::lattice_2();
    let square = direct_product(&[&l2, &l2], &Caps::default()).unwrap().0;
    vec![l2, chain(3), chain(4), square, zoo::m3(), zoo::n5()]
}

fn rho() -> RewritePresentation {
    RewritePresentation::parse("xy^2x = xyx; yx^2y = yxy; x^2y^2 = x^2y; y^2x^2 = yx^2; y^2x^2 = y^2x; x^2y^2 = xy^2")
        .unwrap()
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(prop_oneof![Just(b'x'), Just(b'y')], 0..=max).prop_map(Word)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn whitman_is_reflexive_and_transitive(p in term(5, 4), q in term(5, 4), r in term(5, 4)) {
        prop_assert!(whitman_leq(&p, &p));
        if whitman_leq(&p, &q) && whitman_leq(&q, &r) {
            prop_assert!(whitman_leq(&p, &r));
        }
        prop_assert!(whitman_leq(&p.clone().meet(q.clone()), &p));
        prop_assert!(whitman_leq(&p, &p.clone().join(q)));
    }

    #[test]
    fn whitman_is_sound_in_finite_lattices(p in term(4, 3), q in term(4, 3), seed in any::<u64>()) {
        prop_assume!(whitman_leq(&p, &q));
        for l in small_lattices() {
            let ops = LatticeOps::detect(&l).unwrap();
            let n = l.size() as u64;
            let assignment: Vec<usize> = (0..3).map(|i| ((seed >> (8 * i)) % n) as usize).collect();
            let (a, b) = (lattice_eval(&p, &l, &assignment).unwrap(), lattice_eval(&q, &l, &assignment).unwrap());
            prop_assert!(ops.leq(&l, a, b), "{p} ≤ {q} fails in {} at {assignment:?}", l.name());
        }
    }

    #[test]
    fn generators_are_meet_prime(p in term(4, 3), q in term(4, 3), g in 0usize..3) {
        let gen = LatticeTerm::gen(g);
        if whitman_leq(&p.clone().meet(q.clone()), &gen) {
            prop_assert!(whitman_leq(&p, &gen) || whitman_leq(&q, &gen));
        }
    }

    #[test]
    fn relations_replay_and_survive_contexts(rule in 0usize..6, w in word(2), w2 in word(2)) {
        let pres = rho();
        let r = &pres.rules(12)[rule];
        let bounds = Bounds::default();
        let u = Word([w.0.clone(), r.left.0.clone(), w2.0.clone()].concat());
        let v = Word([w.0.clone(), r.right.0.clone(), w2.0.clone()].concat());
        match monoid_relate(&pres, &u, &v, bounds) {
            Relation::Related { path } => prop_assert!(replay(&path)),
            Relation::NotWithinBounds { .. } => prop_assert!(false, "{u} and {v} not related"),
        }
    }
}

#[test]
fn mutual_leq_is_equivalence_not_identity() {
    let p = LatticeTerm::parse("x /\\ (x \\/ y)").unwrap();
    let x = LatticeTerm::parse("x").unwrap();
    assert!(whitman_leq(&p, &x) && whitman_leq(&x, &p));
    assert_ne!(p, x);
}
