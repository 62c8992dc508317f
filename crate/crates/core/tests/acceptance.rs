//! Acceptance run: one PASS/FAIL line per criterion, with pinned limits.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::SeedableRng;

use sdw_core::commutator::{commutator, group_oracle, property_suite, ring_oracle, supernilpotence_class};
use sdw_core::free::lattice::{whitman_leq, xyz_claims, LatticeTerm};
use sdw_core::free::monoid::{check_cong_join_claim, Bounds, RewritePresentation};
use sdw_core::free::monomial::{monomial_ideal_member, verify_intersection_generation, Sided};
use sdw_core::free::vector::{permutations_of, vector_monoid_analysis, VectorGenerator};
use sdw_core::free::{parse_families, Word};
use sdw_core::sample::{
    abelian_pool, group_and_ring_pool, random_fiber, random_subdirect, shared_malcev_hint, simple_generators,
};
use sdw_core::subdirect::{
    factor_kernels, fiber_product, is_fiber_product, kernel_on, module_fiber_quotient_check, project,
};
use sdw_core::synthesis::{find_malcev_term, lift_generators, lambda_projection_check, verify_thm41a, MalcevOutcome};
use sdw_core::{con_lattice, zoo, Caps, FiniteAlgebra, Partition, Result};

const FLEISCHER_CASES: usize = 200;
const LIFT_CASES: usize = 100;
const THM41_CASES: usize = 100;
const MODULE_CASES: usize = 50;
const SEED: u64 = 0x5d5d;
/// `|A|^8` for `|A| = 8`: the rings `Z8` and `UT2` generate the full eighth power at arity 3.
const FULL_CUBE_CAP: usize = 1 << 24;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn(&Caps) -> Result<(bool, String)>,
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn fleischer(caps: &Caps) -> Result<(bool, String)> {
    let mut rng = StdRng::seed_from_u64(SEED);
    let pool = group_and_ring_pool();
    let mut ok = 0;
    for _ in 0..FLEISCHER_CASES {
        let c = random_subdirect(&mut rng, &pool, 2, caps)?;
        let rep = is_fiber_product(&c, caps)?;
        let permute = kernel_on(&c, 0).permutes_with(&kernel_on(&c, 1))?;
        ok += usize::from(rep.is_fiber_product() && rep.kernels_permute && permute);
    }
    Ok((ok == FLEISCHER_CASES, format!("{ok}/{FLEISCHER_CASES} random subdirect products")))
}

fn tuples_up_to(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut all = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..k {
        layer = layer.iter().flat_map(|t| (0..n).map(move |i| [t.clone(), vec![i]].concat())).collect();
        all.extend(layer.iter().cloned());
    }
    all
}

fn cube_caps(caps: &Caps) -> Caps {
    Caps { max_cube_functions: FULL_CUBE_CAP, ..*caps }
}

fn oracle_agreement(caps: &Caps) -> Result<(bool, String)> {
    let caps = &cube_caps(caps);
    let rings = [zoo::ring_z(4), zoo::ring_z(8), zoo::ring_z2_squared(), zoo::ring_upper_triangular_z2()];
    let subjects = zoo::small_groups().into_iter().map(|g| (g, true)).chain(rings.into_iter().map(|r| (r, false)));
    let (mut checked, mut mismatches) = (0usize, Vec::new());
    for (a, is_group) in subjects {
        let cons: Vec<Partition> = con_lattice(&a, caps)?.congruences().iter().map(|c| c.partition().clone()).collect();
        for t in tuples_up_to(cons.len(), 3) {
            let alphas: Vec<Partition> = t.iter().map(|&i| cons[i].clone()).collect();
            let got = commutator(&a, &alphas, caps)?.gamma;
            let want = if is_group { group_oracle(&a, &alphas)? } else { ring_oracle(&a, &alphas)? };
            checked += 1;
            if got != want {
                mismatches.push(format!("{} {t:?}", a.name()));
            }
        }
    }
    Ok((mismatches.is_empty(), format!("{checked} tuples, mismatches {:?}", mismatches.iter().take(3).collect::<Vec<_>>())))
}

fn axioms(caps: &Caps) -> Result<(bool, String)> {
    let caps = &cube_caps(caps);
    let mut subjects: Vec<FiniteAlgebra> = zoo::small_groups();
    subjects.extend(zoo::small_rings());
    subjects.extend((2..=8).map(zoo::z_mod));
    subjects.extend([zoo::z2_plus_zero(), zoo::affine_z(3)]);
    let (mut algebras, mut instances, mut violations) = (0, 0, 0);
    let mut unverified = Vec::new();
    for a in subjects.iter().filter(|a| a.size() <= 8) {
        let rep = property_suite(a, 3, caps)?;
        if !rep.malcev_verified {
            unverified.push(a.name().to_string());
            continue;
        }
        algebras += 1;
        instances += rep.outcomes.iter().map(|o| o.instances).sum::<usize>();
        violations += rep.violations();
    }
    Ok((
        violations == 0 && unverified.is_empty(),
        format!("{algebras} algebras, {instances} instances, {violations} violations, unverified {unverified:?}"),
    ))
}

fn exact_commutators(caps: &Caps) -> Result<(bool, String)> {
    let s3 = zoo::symmetric_group_3();
    let one = Partition::total(6);
    let a3 = Partition::from_blocks(6, &[vec![0, 3, 4], vec![1, 2, 5]])?;
    let s3_ok = commutator(&s3, &[one.clone(), one], caps)?.gamma == a3;
    let d4 = zoo::dihedral_group(4);
    let t = Partition::total(8);
    let two = commutator(&d4, &[t.clone(), t.clone()], caps)?.gamma;
    let three = commutator(&d4, &[t.clone(), t.clone(), t.clone()], caps)?.gamma;
    let class = supernilpotence_class(&d4, &t, 2, caps)?;
    let ok = s3_ok && !two.is_discrete() && three.is_discrete() && class == Some(2);
    Ok((ok, format!("S3 [1,1]=A3 {s3_ok}; D4 [1,1]={two} [1,1,1]={three} class {class:?}")))
}

fn malcev_detection(_: &Caps) -> Result<(bool, String)> {
    let limit = secs(30);
    let mut parts = Vec::new();
    let mut ok = true;
    let cases = [
        (zoo::z2_plus_zero(), true),
        (zoo::z_mod(4), true),
        (zoo::symmetric_group_3(), true),
        (zoo::meet_semilattice_2(), false),
        (zoo::lattice_2(), false),
    ];
    for (a, expect) in cases {
        let start = Instant::now();
        let out = find_malcev_term(&a, sdw_core::synthesis::DEFAULT_MALCEV_BUDGET)?;
        let took = start.elapsed();
        let good = match (&out, expect) {
            (MalcevOutcome::Found(_), true) | (MalcevOutcome::NoneInVariety { .. }, false) => took <= limit,
            _ => false,
        };
        ok &= good;
        let verdict = match out {
            MalcevOutcome::Found(w) => format!("found {}", w.rendered),
            MalcevOutcome::NoneInVariety { .. } => "none".into(),
            MalcevOutcome::BudgetExhausted { .. } => "budget".into(),
        };
        parts.push(format!("{}: {verdict} ({:.2}s)", a.name(), took.as_secs_f64()));
    }
    Ok((ok, parts.join("; ")))
}

fn lifting(caps: &Caps) -> Result<(bool, String)> {
    let mut rng = StdRng::seed_from_u64(SEED + 6);
    let pool = group_and_ring_pool();
    let mut ok = 0;
    for _ in 0..LIFT_CASES {
        let f = random_fiber(&mut rng, &pool, caps)?;
        let c = fiber_product(&f.a, &f.b, &f.d, &f.g, &f.h, caps)?;
        let lambda_b = factor_kernels(&c)?.lambda_b.into_partition();
        let u: Vec<(usize, usize)> =
            (0..f.b.size()).filter(|&x| lambda_b.rep(x) != x).map(|x| (x, lambda_b.rep(x))).collect();
        let m = shared_malcev_hint(c.factors(), caps)?.expect("group reduct");
        let cert = lift_generators(&c, &simple_generators(&f.a)?, &simple_generators(&f.b)?, &u, &m, caps)?;
        ok += usize::from(cert.generates());
    }
    Ok((ok == LIFT_CASES, format!("{ok}/{LIFT_CASES} random fiber products")))
}

fn thm41(caps: &Caps) -> Result<(bool, String)> {
    let mut rng = StdRng::seed_from_u64(SEED + 7);
    let pool = group_and_ring_pool();
    let (mut ok, mut prop_ok) = (0, 0);
    for _ in 0..THM41_CASES {
        let c = random_subdirect(&mut rng, &pool, 3, caps)?;
        ok += usize::from(verify_thm41a(&c, caps)?);
        let mut all = true;
        for pair in [[0, 1], [0, 2], [1, 2], [1, 0], [2, 0], [2, 1]] {
            all &= lambda_projection_check(&project(&c, &pair, caps)?, caps)?;
        }
        prop_ok += usize::from(all);
    }
    Ok((
        ok == THM41_CASES && prop_ok == THM41_CASES,
        format!("{ok}/{THM41_CASES} union-of-classes; {prop_ok}/{THM41_CASES} kernel generation on all pair projections"),
    ))
}

fn monomial_ideals(_: &Caps) -> Result<(bool, String)> {
    let i = parse_families("xy^ix : i>=1; x^2y^2; y^2x^2; yxy")?;
    let j = parse_families("yx^iy : i>=1; y^2x^2; x^2y^2; xyx")?;
    let cand = parse_families("x^2y^2; y^2x^2; xyx; yxy")?;
    let rep = verify_intersection_generation(&i, &j, &cand, b"xy", 8);
    let xy2x = Word::parse("xy^2x")?;
    let side = (monomial_ideal_member(&i, &xy2x, Sided::Two).is_some(), monomial_ideal_member(&j, &xy2x, Sided::Two).is_some());
    Ok((
        rep.agrees() && side == (true, false),
        format!("{} monomials, {} in I∩J, {} disagreements", rep.checked, rep.intersection_members, rep.disagreements.len()),
    ))
}

fn monoid_join(_: &Caps) -> Result<(bool, String)> {
    let sigma = RewritePresentation::parse("xy^ix = xyx : i>=1; x^2y^2 = x^2y; y^2x^2 = yx^2")?;
    let tau = RewritePresentation::parse("yx^iy = yxy : i>=1; y^2x^2 = y^2x; x^2y^2 = xy^2")?;
    let rho = RewritePresentation::parse(
        "xy^2x = xyx; yx^2y = yxy; x^2y^2 = x^2y; y^2x^2 = yx^2; y^2x^2 = y^2x; x^2y^2 = xy^2",
    )?;
    let rep = check_cong_join_claim(&sigma, &tau, &rho, Bounds { max_len: 12, ..Bounds::default() }, 6, 8);
    let related = rep.checks.iter().filter(|c| c.related).count();
    Ok((
        rep.holds(),
        format!("{related}/{} generators ρ-related, {} common nontrivial pairs", rep.checks.len(), rep.common_pairs.len()),
    ))
}

fn vector_monoid(_: &Caps) -> Result<(bool, String)> {
    let mut gens: Vec<VectorGenerator> = permutations_of(&[1, 0, 3]).into_iter().map(VectorGenerator::Literal).collect();
    gens.push(VectorGenerator::parse("0,2,n : n>=7")?);
    let mut queries: Vec<Vec<usize>> = (7..=20).map(|n| vec![0, 2, n]).collect();
    queries.push(vec![0, 2, 6]);
    let rep = vector_monoid_analysis(&gens, &queries, 40)?;
    let (tail, six) = rep.elements.split_at(14);
    let ok = rep.surjective_on_pairs
        && tail.iter().all(|e| e.indecomposable)
        && six[0].decomposition == Some((vec![0, 1, 3], vec![0, 1, 3]));
    Ok((
        ok,
        format!(
            "pairs surjective {}; {}/14 indecomposable; (0,2,6) = {:?}",
            rep.surjective_on_pairs,
            tail.iter().filter(|e| e.indecomposable).count(),
            six[0].decomposition
        ),
    ))
}

fn free_lattice(_: &Caps) -> Result<(bool, String)> {
    let rep = xyz_claims(6, &zoo::m3(), [1, 2, 3])?;
    let x = LatticeTerm::parse("x")?;
    let bigger = LatticeTerm::parse("x \\/ (y /\\ z)")?;
    let base = (whitman_leq(&x, &bigger), whitman_leq(&bigger, &x));
    let claims: Vec<String> = rep.claims.iter().map(|c| format!("{}:{}", c.claim, c.holds)).collect();
    Ok((rep.all_hold() && base == (true, false), format!("{} base {base:?}", claims.join(" "))))
}

fn module_quotients(caps: &Caps) -> Result<(bool, String)> {
    let mut rng = StdRng::seed_from_u64(SEED + 12);
    let pool = abelian_pool();
    let mut ok = 0;
    for _ in 0..MODULE_CASES {
        let f = random_fiber(&mut rng, &pool, caps)?;
        ok += usize::from(module_fiber_quotient_check(&f.a, &f.b, &f.d, &f.g, &f.h, caps)?.holds());
    }
    Ok((ok == MODULE_CASES, format!("{ok}/{MODULE_CASES} random abelian fiber products")))
}

fn main() -> ExitCode {
    let caps = Caps::default();
    let criteria = [
        Criterion { id: 1, name: "fiber products", limit: secs(60), run: fleischer },
        Criterion { id: 2, name: "commutator oracles", limit: secs(300), run: oracle_agreement },
        Criterion { id: 3, name: "commutator axioms", limit: secs(300), run: axioms },
        Criterion { id: 4, name: "S3 and D4 commutators", limit: secs(60), run: exact_commutators },
        Criterion { id: 5, name: "Mal'cev detection", limit: secs(150), run: malcev_detection },
        Criterion { id: 6, name: "generator lifting", limit: secs(120), run: lifting },
        Criterion { id: 7, name: "three-factor union of classes", limit: secs(120), run: thm41 },
        Criterion { id: 8, name: "monomial intersection", limit: secs(10), run: monomial_ideals },
        Criterion { id: 9, name: "monoid congruence join", limit: secs(120), run: monoid_join },
        Criterion { id: 10, name: "vector monoid", limit: secs(60), run: vector_monoid },
        Criterion { id: 11, name: "free lattice chain", limit: secs(120), run: free_lattice },
        Criterion { id: 12, name: "abelian fiber quotients", limit: secs(60), run: module_quotients },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)(&caps);
        let took = start.elapsed();
        let (pass, detail) = match outcome {
            Ok((ok, d)) => (ok && took <= c.limit, d),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!pass);
        println!(
            "{} {:>2} {}: {} [{:.2}s, limit {}s]",
            if pass { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            detail,
            took.as_secs_f64(),
            c.limit.as_secs()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
