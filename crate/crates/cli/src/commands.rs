use std::path::Path;

use serde_json::json;

use sdw_core::algebra::{direct_product, FiniteAlgebra};
use sdw_core::commutator::{property_suite, supernilpotence_class, Commutators};
use sdw_core::congruence::{cg, con_lattice};
use sdw_core::free::lattice::{countermodel, refutation_trace, whitman_leq, xyz_claims, LatticeTerm};
use sdw_core::free::monoid::{check_cong_join_claim, monoid_relate, pump_independence, Bounds, Relation, RewritePresentation};
use sdw_core::free::monomial::{monomial_ideal_member, verify_intersection_generation, Sided};
use sdw_core::free::vector::{permutations_of, vector_monoid_analysis, VectorGenerator};
use sdw_core::free::{parse_families, Word};
use sdw_core::io::{algebra_to_json, load_subproduct, parse_map, parse_partition, resolve_algebra};
use sdw_core::subdirect::{fiber_product, is_fiber_product, pair_report, SubproductAlgebra};
use sdw_core::synthesis::{
    fg_certificate, find_malcev_term, greedy_generating_set, lift_generators, thm41_gammas, verify_thm41a, MalcevOutcome,
};
use sdw_core::{zoo, Caps, Error, Partition, Result, Term};

use crate::args::{AlgCmd, Cli, CommCmd, Command, ConCmd, FreeCmd, SdpCmd};
use crate::report::{Done, Outcome};

pub fn execute(cli: &Cli, caps: &Caps) -> Result<Done> {
    match &cli.command {
        Command::Alg(c) => alg(c),
        Command::Con(c) => con(c, caps),
        Command::Sdp(c) => sdp(c, caps),
        Command::Comm(c) => comm(c, caps),
        Command::Malcev(m) => malcev(&algebra(&m.algebra)?, m.budget),
        Command::Free(c) => free(c),
        Command::Corpus(c) => crate::corpus::run_corpus(&c.directory, c.workers),
    }
}

fn algebra(spec: &str) -> Result<FiniteAlgebra> {
    resolve_algebra(spec, Path::new("."))
}

/// The contents of `arg` when it names a file, else `arg` itself.
fn text_or_file(arg: &str) -> Result<String> {
    let p = Path::new(arg);
    if p.is_file() {
        std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{arg}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn congruence(arg: &str, a: &FiniteAlgebra) -> Result<Partition> {
    match arg.trim() {
        "0" => Ok(Partition::discrete(a.size())),
        "1" => Ok(Partition::total(a.size())),
        _ => {
            let p = parse_partition(&text_or_file(arg)?, a.size(), arg)?;
            if let Some(e) = a.compatibility_violation(&p) {
                return Err(e);
            }
            Ok(p)
        }
    }
}

fn numbers(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Error::Parse(format!("`{s}` is not a natural number"))))
        .collect()
}

/// `0,1;2,3` as tuples.
fn tuples(text: &str) -> Result<Vec<Vec<usize>>> {
    text.split(';').map(str::trim).filter(|s| !s.is_empty()).map(numbers).collect()
}

fn pairs(text: &str) -> Result<Vec<(usize, usize)>> {
    tuples(text)?
        .into_iter()
        .map(|t| match t[..] {
            [a, b] => Ok((a, b)),
            _ => Err(Error::Parse(format!("`{t:?}` is not a pair"))),
        })
        .collect()
}

fn subproduct(path: &Path, caps: &Caps) -> Result<SubproductAlgebra> {
    load_subproduct(path, caps)
}

fn alg(cmd: &AlgCmd) -> Result<Done> {
    match cmd {
        AlgCmd::Show { algebra: spec } => {
            let a = algebra(spec)?;
            let sig: Vec<_> = a.signature().symbols().iter().map(|s| json!({"name": s.name, "arity": s.arity})).collect();
            let summary = format!("{}: {} elements, signature {}", a.name(), a.size(), a.signature());
            Ok(Done::new(
                Outcome::True,
                summary,
                json!({"name": a.name(), "size": a.size(), "signature": sig, "fingerprint": format!("{:016x}", a.fingerprint())}),
            ))
        }
        AlgCmd::Export { algebra: spec } => {
            let a = algebra(spec)?;
            let value: serde_json::Value = serde_json::from_str(&algebra_to_json(&a)).expect("own output parses");
            Ok(Done::new(Outcome::True, format!("{} in the JSON file format", a.name()), value))
        }
        AlgCmd::List => Ok(Done::new(Outcome::True, "built-in algebras", zoo::BUILTIN_NAMES)),
    }
}

fn con(cmd: &ConCmd, caps: &Caps) -> Result<Done> {
    match cmd {
        ConCmd::Lattice { algebra: spec } => {
            let a = algebra(spec)?;
            let lat = con_lattice(&a, caps)?;
            let result = json!({
                "congruences": lat.congruences(),
                "covers": lat.covers(),
                "modular": lat.is_modular(),
                "distributive": lat.lattice().is_distributive(),
                "non_permuting_pair": lat.non_permuting_pair(),
            });
            Ok(Done::new(Outcome::True, format!("{} congruences on {}", lat.len(), a.name()), result))
        }
        ConCmd::Cg { algebra: spec, pairs: p } => {
            let a = algebra(spec)?;
            let theta = cg(&a, &pairs(p)?, caps)?;
            Ok(Done::new(Outcome::True, format!("Cg = {theta}"), json!({"congruence": theta})))
        }
    }
}

fn sdp(cmd: &SdpCmd, caps: &Caps) -> Result<Done> {
    match cmd {
        SdpCmd::Check { subproduct: path } => {
            let c = subproduct(path, caps)?;
            let violation = c.subdirect_violation();
            let result = json!({
                "size": c.len(),
                "factors": c.factors().iter().map(|f| f.name()).collect::<Vec<_>>(),
                "subdirect": violation.is_none(),
                "missed": violation.map(|(coordinate, element)| json!({"coordinate": coordinate, "element": element})),
            });
            let summary = match violation {
                None => format!("subdirect, {} elements", c.len()),
                Some((i, x)) => format!("not subdirect: coordinate {i} misses {x}"),
            };
            Ok(Done::new(Outcome::from_bool(violation.is_none()), summary, result))
        }
        SdpCmd::Fiber { left, right, onto, g, h } => {
            let (a, b, d) = (algebra(left)?, algebra(right)?, algebra(onto)?);
            let g = parse_map(&text_or_file(g)?, "g")?;
            let h = parse_map(&text_or_file(h)?, "h")?;
            let c = fiber_product(&a, &b, &d, &g, &h, caps)?;
            let result = json!({"factors": [left, right], "elements": c.tuples().collect::<Vec<_>>()});
            Ok(Done::new(Outcome::True, format!("fiber product with {} elements", c.len()), result))
        }
        SdpCmd::Pairs { subproduct: path } => {
            let c = subproduct(path, caps)?;
            let rep = pair_report(&c)?;
            let ok = rep.surjective_on_pairs();
            let summary = if ok { "surjective on pairs" } else { "not surjective on pairs" };
            Ok(Done::new(Outcome::from_bool(ok), summary, rep))
        }
        SdpCmd::Fleischer { subproduct: path } => {
            let c = subproduct(path, caps)?;
            let rep = is_fiber_product(&c, caps)?;
            let result = json!({
                "kernels_permute": rep.kernels_permute,
                "rectangle_witness": rep.rectangle_witness,
                "fiber": rep.fiber.as_ref().map(|f| json!({"d_size": f.d.size(), "g": f.g, "h": f.h})),
            });
            let summary = match &rep.rectangle_witness {
                None => "fiber product over A/λ_A".to_string(),
                Some((p, q)) => format!("not a fiber product: ({},{}) ∈ C but ({},{}) ∉ C", p[0], q[1], q[0], p[1]),
            };
            Ok(Done::new(Outcome::from_bool(rep.is_fiber_product()), summary, result))
        }
        SdpCmd::Lift { subproduct: path, gens_a, gens_b, lambda_pairs, term } => {
            let c = subproduct(path, caps)?;
            let m = match term {
                Some(t) => Term::parse(t, c.factors()[0].signature())?,
                None => shared_malcev_term(c.factors(), caps)?,
            };
            let cert = lift_generators(&c, &numbers(gens_a)?, &numbers(gens_b)?, &pairs(lambda_pairs)?, &m, caps)?;
            let summary = format!("{} generators lift to a generating set of C ({} elements)", cert.generators().len(), c.len());
            Ok(Done::new(Outcome::from_bool(cert.generates()), summary, json!({
                "term": m.display(c.factors()[0].signature()).to_string(),
                "certificate": cert,
                "generators": cert.generators(),
            })))
        }
        SdpCmd::Thm41 { subproduct: path } => {
            let c = subproduct(path, caps)?;
            let gammas = thm41_gammas(&c, caps)?;
            let holds = verify_thm41a(&c, caps)?;
            let summary = if holds { "C is a union of γ-classes" } else { "C is not a union of γ-classes" };
            Ok(Done::new(Outcome::from_bool(holds), summary, json!({"gammas": gammas, "union_of_classes": holds})))
        }
        SdpCmd::Certify { subproduct: path, gens } => {
            let c = subproduct(path, caps)?;
            let rep = fg_certificate(&c, &tuples(gens)?, caps)?;
            let ok = rep.clauses_hold() && rep.closure_size == rep.target_size;
            let summary = format!("closure {} of {}; clauses hold: {}", rep.closure_size, rep.target_size, rep.clauses_hold());
            Ok(Done::new(Outcome::from_bool(ok), summary, rep))
        }
        SdpCmd::Gens { subproduct: path } => {
            let c = subproduct(path, caps)?;
            let gens = greedy_generating_set(&c)?;
            Ok(Done::new(Outcome::True, format!("{} generators", gens.len()), json!({"generators": gens})))
        }
    }
}

/// A Mal'cev term valid on every factor: the group term when there is one, else a search on the product.
fn shared_malcev_term(factors: &[FiniteAlgebra], caps: &Caps) -> Result<Term> {
    if let Some(t) = sdw_core::sample::shared_malcev_hint(factors, caps)? {
        return Ok(t);
    }
    let refs: Vec<&FiniteAlgebra> = factors.iter().collect();
    let product = direct_product(&refs, caps)?.0;
    match find_malcev_term(&product, sdw_core::synthesis::DEFAULT_MALCEV_BUDGET)? {
        MalcevOutcome::Found(w) => Ok(w.term),
        _ => Err(Error::Precondition("no Mal'cev term found for the factors; pass --term".into())),
    }
}

fn comm(cmd: &CommCmd, caps: &Caps) -> Result<Done> {
    match cmd {
        CommCmd::Compute { algebra: spec, congs } => {
            let a = algebra(spec)?;
            let alphas = congs.iter().map(|c| congruence(c, &a)).collect::<Result<Vec<_>>>()?;
            let res = Commutators::new(&a, caps).compute(&alphas)?;
            Ok(Done::new(Outcome::True, format!("[{}] = {}", congs.join(", "), res.gamma), res))
        }
        CommCmd::Class { algebra: spec, max_k, relative } => {
            let a = algebra(spec)?;
            let rel = match relative {
                Some(r) => congruence(r, &a)?,
                None => Partition::total(a.size()),
            };
            let class = supernilpotence_class(&a, &rel, *max_k, caps)?;
            let done = match class {
                Some(k) => Done::new(Outcome::True, format!("supernilpotent of class {k}"), json!({"class": k})),
                None => Done::new(
                    Outcome::Inconclusive,
                    format!("not supernilpotent of class at most {max_k} (bound max_k reached)"),
                    json!({"class": null}),
                ),
            };
            Ok(done.with_bounds(json!({"max_k": max_k})))
        }
        CommCmd::Properties { algebra: spec, max_k } => {
            let a = algebra(spec)?;
            let rep = property_suite(&a, *max_k, caps)?;
            let v = rep.violations();
            let summary = format!("{} congruences, {v} violations", rep.congruences.len());
            Ok(Done::new(Outcome::from_bool(v == 0), summary, rep).with_bounds(json!({"max_k": max_k})))
        }
    }
}

fn malcev(a: &FiniteAlgebra, budget: u64) -> Result<Done> {
    let out = find_malcev_term(a, budget)?;
    let done = match &out {
        MalcevOutcome::Found(w) => Done::new(Outcome::True, format!("Mal'cev term {}", w.rendered), &out),
        MalcevOutcome::NoneInVariety { closure_size } => Done::new(
            Outcome::False,
            format!("no Mal'cev term: the {closure_size} ternary term operations miss the identities"),
            &out,
        ),
        MalcevOutcome::BudgetExhausted { explored } => {
            Done::new(Outcome::Inconclusive, format!("budget exhausted after {explored} term operations"), &out)
        }
    };
    Ok(done.with_bounds(json!({"budget": budget})))
}

fn presentation(arg: &str) -> Result<RewritePresentation> {
    RewritePresentation::parse(&text_or_file(arg)?)
}

fn vector_generators(text: &str) -> Result<Vec<VectorGenerator>> {
    let mut out = Vec::new();
    for item in text.split([';', '\n']).map(str::trim).filter(|s| !s.is_empty() && !s.starts_with('#')) {
        match item.strip_prefix("perms") {
            Some(rest) => {
                let v = numbers(rest.trim().trim_start_matches('(').trim_end_matches(')'))?;
                out.extend(permutations_of(&v).into_iter().map(VectorGenerator::Literal));
            }
            None => out.push(VectorGenerator::parse(item)?),
        }
    }
    Ok(out)
}

fn free(cmd: &FreeCmd) -> Result<Done> {
    match cmd {
        FreeCmd::LatticeLeq { p, q } => {
            let (tp, tq) = (LatticeTerm::parse(p)?, LatticeTerm::parse(q)?);
            let holds = whitman_leq(&tp, &tq);
            if holds {
                return Ok(Done::new(Outcome::True, format!("{tp} ≤ {tq}"), json!({"leq": true})));
            }
            let lattices = [zoo::lattice_2(), zoo::m3(), zoo::n5()];
            let model = countermodel(&tp, &tq, &lattices)?
                .map(|(name, asg, a, b)| json!({"lattice": name, "assignment": asg, "left": a, "right": b}));
            Ok(Done::new(
                Outcome::False,
                format!("{tp} ≰ {tq}"),
                json!({"leq": false, "trace": refutation_trace(&tp, &tq), "countermodel": model}),
            ))
        }
        FreeCmd::XyzClaims { max_n } => {
            let rep = xyz_claims(*max_n, &zoo::m3(), [1, 2, 3])?;
            let ok = rep.all_hold();
            let summary = format!("claims (a)-(d) for n ≤ {max_n}: {}", if ok { "hold" } else { "fail" });
            Ok(Done::new(Outcome::from_bool(ok), summary, rep).with_bounds(json!({"max_n": max_n})))
        }
        FreeCmd::MonoidRelate { presentation: pres, u, v, max_len, max_states } => {
            let bounds = Bounds { max_len: *max_len, max_states: *max_states };
            let (u, v) = (Word::parse(u)?, Word::parse(v)?);
            let done = match monoid_relate(&presentation(pres)?, &u, &v, bounds) {
                Relation::Related { path } => {
                    Done::new(Outcome::True, format!("{u} ~ {v} in {} steps", path.len()), json!({"path": path}))
                }
                Relation::NotWithinBounds { explored, .. } => Done::new(
                    Outcome::Inconclusive,
                    format!("no derivation of {u} ~ {v} within length {max_len} ({explored} words explored)"),
                    json!({"explored": explored}),
                ),
            };
            Ok(done.with_bounds(bounds))
        }
        FreeCmd::IdealMember { generators, monomial, sided } => {
            let gens = parse_families(&text_or_file(generators)?)?;
            let m = Word::parse(monomial)?;
            let side: Sided = sided.parse()?;
            let f = monomial_ideal_member(&gens, &m, side);
            let summary = match &f {
                Some(f) => format!("{m} = {} · {} · {}", f.left, f.middle, f.right),
                None => format!("{m} is not in the ideal"),
            };
            Ok(Done::new(Outcome::from_bool(f.is_some()), summary, json!({"factorization": f})))
        }
        FreeCmd::IntersectCheck { i_gens, j_gens, candidates, max_degree, alphabet } => {
            let fam = |s: &str| -> Result<_> { parse_families(&text_or_file(s)?) };
            let rep = verify_intersection_generation(&fam(i_gens)?, &fam(j_gens)?, &fam(candidates)?, alphabet.as_bytes(), *max_degree);
            let summary = format!("{} monomials of degree ≤ {max_degree}, {} disagreements", rep.checked, rep.disagreements.len());
            Ok(Done::new(Outcome::from_bool(rep.agrees()), summary, rep).with_bounds(json!({"max_degree": max_degree})))
        }
        FreeCmd::JoinCheck { sigma, tau, rho, max_index, max_len, max_states, intersection_len } => {
            let bounds = Bounds { max_len: *max_len, max_states: *max_states };
            let rep = check_cong_join_claim(&presentation(sigma)?, &presentation(tau)?, &presentation(rho)?, bounds, *max_index, *intersection_len);
            let related = rep.checks.iter().filter(|c| c.related).count();
            let outcome = if !rep.common_pairs.is_empty() {
                Outcome::False
            } else if rep.all_related {
                Outcome::True
            } else {
                Outcome::Inconclusive
            };
            let summary = format!(
                "{related}/{} generators related within length {max_len}; {} nontrivial common pairs up to length {intersection_len}",
                rep.checks.len(),
                rep.common_pairs.len()
            );
            Ok(Done::new(outcome, summary, &rep)
                .with_bounds(json!({"max_len": max_len, "max_states": max_states, "max_index": max_index, "intersection_len": intersection_len})))
        }
        FreeCmd::PumpCheck { presentation: pres, family, max_index, max_len, max_states } => {
            let bounds = Bounds { max_len: *max_len, max_states: *max_states };
            let ev = pump_independence(&presentation(pres)?, *family, *max_index, bounds)?;
            let nontrivial = ev.iter().filter(|e| e.left != e.right).count();
            let independent = ev.iter().filter(|e| e.left != e.right && !e.derivable_without_it).count();
            let summary = format!(
                "bounded evidence only: {independent}/{nontrivial} nontrivial instances not derivable from the others"
            );
            Ok(Done::new(Outcome::from_bool(independent == nontrivial), summary, json!({"bounded": true, "evidence": ev}))
                .with_bounds(bounds))
        }
        FreeCmd::Vector { generators, query, bound } => {
            let gens = vector_generators(&text_or_file(generators)?)?;
            let queries = query.iter().map(|q| numbers(q)).collect::<Result<Vec<_>>>()?;
            let rep = vector_monoid_analysis(&gens, &queries, *bound)?;
            let indecomposable = rep.elements.iter().filter(|e| e.indecomposable).count();
            let summary = format!(
                "surjective on pairs: {}; {indecomposable}/{} queries indecomposable in the box of bound {bound}",
                rep.surjective_on_pairs,
                rep.elements.len()
            );
            Ok(Done::new(Outcome::from_bool(rep.surjective_on_pairs), summary, rep).with_bounds(json!({"bound": bound})))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn list_parsing() {
        assert_eq!(tuples("0,1; 2,3;").unwrap(), vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(pairs("1,3").unwrap(), vec![(1, 3)]);
        assert!(pairs("1,2,3").is_err());
        assert!(numbers("a").is_err());
        assert_eq!(vector_generators("perms(1,0,3); 0,2,n : n>=7").unwrap().len(), 7);
    }
}
