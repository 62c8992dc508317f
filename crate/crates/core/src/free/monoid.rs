//! Congruences of free monoids given by (pumped) generating pairs, explored
//! within a word-length bound.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use super::{IndexRange, Pattern, Word};
use crate::error::{Error, Result};
use crate::partition::UnionFind;

/// A generating pair `(u, v)`, possibly a family in a shared index `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairFamily {
    pub left: Pattern,
    pub right: Pattern,
    pub range: IndexRange,
}

impl PairFamily {
    pub fn literal(u: Word, v: Word) -> Self {
        PairFamily { left: Pattern::literal(u), right: Pattern::literal(v), range: IndexRange::default() }
    }

    pub fn is_pumped(&self) -> bool {
        self.left.is_pumped() || self.right.is_pumped()
    }

    /// Instances with both sides of length at most `max_len` and index at most `max_index`.
    pub fn expand(&self, max_len: usize, max_index: usize) -> Vec<(Option<usize>, Word, Word)> {
        if !self.is_pumped() {
            let (u, v) = (self.left.prefix.clone(), self.right.prefix.clone());
            return if u.len() <= max_len && v.len() <= max_len { vec![(None, u, v)] } else { vec![] };
        }
        let mut out = Vec::new();
        let mut i = self.range.min;
        while self.range.contains(i) && i <= max_index {
            let (lu, lv) = (self.left.len_at(i), self.right.len_at(i));
            if lu > max_len || lv > max_len {
                break;
            }
            out.push((Some(i), self.left.instantiate(i), self.right.instantiate(i)));
            i += 1;
        }
        out
    }
}

impl fmt::Display for PairFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.left, self.right)?;
        if self.is_pumped() {
            match self.range.max {
                Some(m) => write!(f, " : {}<=i<={m}", self.range.min)?,
                None => write!(f, " : i>={}", self.range.min)?,
            }
        }
        Ok(())
    }
}

/// Generating pairs of a monoid congruence.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RewritePresentation {
    pub pairs: Vec<PairFamily>,
}

/// One expanded generating pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rule {
    pub family: usize,
    pub index: Option<usize>,
    pub left: Word,
    pub right: Word,
}

impl RewritePresentation {
    /// One pair per line (or `;`): `u = v` with an optional `: i>=1` range; `#` comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for line in text.lines().map(|l| l.split('#').next().unwrap_or("")).flat_map(|l| l.split(';')) {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (body, range) = match line.split_once(':') {
                Some((b, r)) => (b, IndexRange::parse(r)?),
                None => (line, IndexRange::default()),
            };
            let (l, r) = body
                .split_once('=')
                .or_else(|| body.split_once('~'))
                .ok_or_else(|| Error::Parse(format!("expected `u = v` in `{line}`")))?;
            pairs.push(PairFamily { left: Pattern::parse(l)?, right: Pattern::parse(r)?, range });
        }
        Ok(RewritePresentation { pairs })
    }

    pub fn rules(&self, max_len: usize) -> Vec<Rule> {
        self.rules_up_to_index(max_len, usize::MAX)
    }

    pub fn rules_up_to_index(&self, max_len: usize, max_index: usize) -> Vec<Rule> {
        self.pairs
            .iter()
            .enumerate()
            .flat_map(|(k, p)| {
                p.expand(max_len, max_index).into_iter().map(move |(index, left, right)| Rule { family: k, index, left, right })
            })
            .filter(|r| r.left != r.right)
            .collect()
    }

    /// Letters occurring in any generating pair.
    pub fn alphabet(&self) -> Vec<u8> {
        let mut v: Vec<u8> = self
            .pairs
            .iter()
            .flat_map(|p| [&p.left, &p.right])
            .flat_map(|q| [&q.prefix, &q.block, &q.suffix])
            .flat_map(|w| w.0.iter().copied())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

impl fmt::Display for RewritePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub max_len: usize,
    pub max_states: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_len: 12, max_states: 1_000_000 }
    }
}

/// A single replacement of a factor by the other side of a generating pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RewriteStep {
    pub from: Word,
    pub to: Word,
    pub rule: Rule,
    pub position: usize,
    /// `true` when the left side was replaced by the right side.
    pub forward: bool,
}

#[derive(Debug, Clone, Serialize)]
pub enum Relation {
    Related { path: Vec<RewriteStep> },
    NotWithinBounds { explored: usize, bounds: Bounds },
}

impl Relation {
    pub fn is_related(&self) -> bool {
        matches!(self, Relation::Related { .. })
    }
}

fn neighbours(w: &Word, rules: &[Rule], max_len: usize, mut visit: impl FnMut(Word, usize, usize, bool)) {
    for (ri, r) in rules.iter().enumerate() {
        for (pat, rep, forward) in [(&r.left, &r.right, true), (&r.right, &r.left, false)] {
            if w.len() - pat.len().min(w.len()) + rep.len() > max_len || pat.len() > w.len() {
                continue;
            }
            for pos in 0..=w.len() - pat.len() {
                if w.0[pos..pos + pat.len()] == pat.0[..] {
                    let mut v = Vec::with_capacity(w.len() - pat.len() + rep.len());
                    v.extend_from_slice(&w.0[..pos]);
                    v.extend_from_slice(&rep.0);
                    v.extend_from_slice(&w.0[pos + pat.len()..]);
                    visit(Word(v), ri, pos, forward);
                }
            }
        }
    }
}

/// Searches for a chain of single-factor replacements from `u` to `v`
/// through words of length at most `bounds.max_len`.
pub fn monoid_relate(pres: &RewritePresentation, u: &Word, v: &Word, bounds: Bounds) -> Relation {
    if u == v {
        return Relation::Related { path: vec![] };
    }
    if u.len() > bounds.max_len || v.len() > bounds.max_len {
        return Relation::NotWithinBounds { explored: 0, bounds };
    }
    let rules = pres.rules(bounds.max_len);
    // parent[side][w] = (predecessor, rule, position, forward as applied from predecessor)
    type Parent = HashMap<Word, Option<(Word, usize, usize, bool)>>;
    let mut parents: [Parent; 2] = [HashMap::new(), HashMap::new()];
    let mut queues: [VecDeque<Word>; 2] = [VecDeque::new(), VecDeque::new()];
    for (side, w) in [u, v].into_iter().enumerate() {
        parents[side].insert(w.clone(), None);
        queues[side].push_back(w.clone());
    }
    let mut meet: Option<Word> = None;
    while meet.is_none() && !(queues[0].is_empty() && queues[1].is_empty()) {
        if parents[0].len() + parents[1].len() >= bounds.max_states {
            return Relation::NotWithinBounds { explored: parents[0].len() + parents[1].len(), bounds };
        }
        let side = if queues[1].is_empty() || (!queues[0].is_empty() && queues[0].len() <= queues[1].len()) { 0 } else { 1 };
        let layer = std::mem::take(&mut queues[side]);
        let (mine, other) = if side == 0 {
            let (a, b) = parents.split_at_mut(1);
            (&mut a[0], &b[0])
        } else {
            let (a, b) = parents.split_at_mut(1);
            (&mut b[0], &a[0])
        };
        for w in layer {
            neighbours(&w, &rules, bounds.max_len, |x, ri, pos, fwd| {
                if meet.is_some() || mine.contains_key(&x) {
                    return;
                }
                mine.insert(x.clone(), Some((w.clone(), ri, pos, fwd)));
                if other.contains_key(&x) {
                    meet = Some(x.clone());
                }
                queues[side].push_back(x);
            });
            if meet.is_some() {
                break;
            }
        }
    }
    let Some(mid) = meet else {
        return Relation::NotWithinBounds { explored: parents[0].len() + parents[1].len(), bounds };
    };
    let mut path = Vec::new();
    let mut cur = mid.clone();
    while let Some(Some((prev, ri, pos, fwd))) = parents[0].get(&cur) {
        path.push(RewriteStep { from: prev.clone(), to: cur.clone(), rule: rules[*ri].clone(), position: *pos, forward: *fwd });
        cur = prev.clone();
    }
    path.reverse();
    let mut cur = mid;
    while let Some(Some((prev, ri, pos, fwd))) = parents[1].get(&cur) {
        // the step prev → cur is reversed: cur → prev
        path.push(RewriteStep { from: cur.clone(), to: prev.clone(), rule: rules[*ri].clone(), position: *pos, forward: !*fwd });
        cur = prev.clone();
    }
    Relation::Related { path }
}

/// Checks that each step replaces one occurrence of a rule side by the other.
pub fn replay(path: &[RewriteStep]) -> bool {
    path.windows(2).all(|w| w[0].to == w[1].from)
        && path.iter().all(|s| {
            let (pat, rep) = if s.forward { (&s.rule.left, &s.rule.right) } else { (&s.rule.right, &s.rule.left) };
            let p = s.position;
            s.from.0.get(p..p + pat.len()) == Some(&pat.0[..])
                && s.to.0[..p] == s.from.0[..p]
                && s.to.0.get(p..p + rep.len()) == Some(&rep.0[..])
                && s.to.0[p + rep.len()..] == s.from.0[p + pat.len()..]
        })
}

/// Classes of the congruence restricted to chains through words of length at most `max_len`.
pub struct BoundedClasses {
    pub words: Vec<Word>,
    index: HashMap<Word, usize>,
    uf: UnionFind,
}

impl BoundedClasses {
    pub fn new(pres: &RewritePresentation, alphabet: &[u8], max_len: usize) -> Self {
        let words = Word::all_up_to(alphabet, max_len);
        let index: HashMap<Word, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let rules = pres.rules(max_len);
        let mut uf = UnionFind::new(words.len());
        for (i, w) in words.iter().enumerate() {
            neighbours(w, &rules, max_len, |x, _, _, _| {
                if let Some(&j) = index.get(&x) {
                    uf.union(i, j);
                }
            });
        }
        BoundedClasses { words, index, uf }
    }

    pub fn related(&mut self, u: &Word, v: &Word) -> Option<bool> {
        let (i, j) = (*self.index.get(u)?, *self.index.get(v)?);
        Some(self.uf.same(i, j))
    }

    fn labels(&mut self) -> Vec<usize> {
        (0..self.words.len()).map(|i| self.uf.find(i)).collect()
    }
}

/// Pairs `u ≠ v` related in both bounded congruences (over the same word list).
pub fn common_pairs(a: &mut BoundedClasses, b: &mut BoundedClasses) -> Vec<(Word, Word)> {
    let (la, lb) = (a.labels(), b.labels());
    let mut groups: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for i in 0..la.len() {
        groups.entry((la[i], lb[i])).or_default().push(i);
    }
    let mut out: Vec<(Word, Word)> = groups
        .values()
        .filter(|g| g.len() > 1)
        .flat_map(|g| g[1..].iter().map(|&j| (a.words[g[0]].clone(), a.words[j].clone())))
        .collect();
    out.sort();
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratorCheck {
    pub source: &'static str,
    pub family: usize,
    pub index: Option<usize>,
    pub left: Word,
    pub right: Word,
    pub related: bool,
    pub steps: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CongJoinReport {
    pub bounds: Bounds,
    pub max_index: usize,
    pub checks: Vec<GeneratorCheck>,
    pub all_related: bool,
    pub intersection_len: usize,
    /// Nontrivial pairs related by both `σ` and `τ` within the bound.
    pub common_pairs: Vec<(Word, Word)>,
    /// Every expanded `σ` pair preserves the count of the first letter, every `τ` pair the second.
    pub letter_invariants: (bool, bool),
}

impl CongJoinReport {
    pub fn holds(&self) -> bool {
        self.all_related && self.common_pairs.is_empty()
    }
}

/// Checks that every `σ`- and `τ`-generator with index at most `max_index`
/// is `ρ`-related within `bounds`, and that `σ ∩ τ` is trivial on words of
/// length at most `intersection_len`.
pub fn check_cong_join_claim(
    sigma: &RewritePresentation,
    tau: &RewritePresentation,
    rho: &RewritePresentation,
    bounds: Bounds,
    max_index: usize,
    intersection_len: usize,
) -> CongJoinReport {
    let mut checks = Vec::new();
    for (source, pres) in [("σ", sigma), ("τ", tau)] {
        for r in pres.rules_up_to_index(bounds.max_len, max_index) {
            let rel = monoid_relate(rho, &r.left, &r.right, bounds);
            let steps = match &rel {
                Relation::Related { path } => Some(path.len()),
                Relation::NotWithinBounds { .. } => None,
            };
            checks.push(GeneratorCheck {
                source,
                family: r.family,
                index: r.index,
                left: r.left,
                right: r.right,
                related: steps.is_some(),
                steps,
            });
        }
    }
    let mut alphabet = sigma.alphabet();
    alphabet.extend(tau.alphabet());
    alphabet.sort_unstable();
    alphabet.dedup();
    let mut s = BoundedClasses::new(sigma, &alphabet, intersection_len);
    let mut t = BoundedClasses::new(tau, &alphabet, intersection_len);
    let common = common_pairs(&mut s, &mut t);
    let keeps = |p: &RewritePresentation, letter: Option<&u8>| {
        letter.is_some_and(|&c| p.rules(intersection_len).iter().all(|r| r.left.count(c) == r.right.count(c)))
    };
    CongJoinReport {
        bounds,
        max_index,
        all_related: checks.iter().all(|c| c.related),
        checks,
        intersection_len,
        common_pairs: common,
        letter_invariants: (keeps(sigma, alphabet.first()), keeps(tau, alphabet.get(1))),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PumpEvidence {
    pub index: usize,
    pub left: Word,
    pub right: Word,
    /// Whether the pair follows from the other instances within the bounds.
    pub derivable_without_it: bool,
}

/// Bounded evidence that a pumped family is not finitely generated: for each
/// index, tries to derive its instance from all other instances.
pub fn pump_independence(pres: &RewritePresentation, family: usize, max_index: usize, bounds: Bounds) -> Result<Vec<PumpEvidence>> {
    let fam = pres.pairs.get(family).ok_or_else(|| Error::precondition(format!("no family {family}")))?;
    if !fam.is_pumped() {
        return Err(Error::precondition("the family has no pumped block"));
    }
    let mut out = Vec::new();
    for (index, left, right) in fam.expand(bounds.max_len, max_index) {
        let index = index.expect("pumped");
        let mut reduced = pres.clone();
        let others = PairFamily {
            range: IndexRange { min: fam.range.min, max: Some(index - 1) },
            ..fam.clone()
        };
        let rest = PairFamily { range: IndexRange { min: index + 1, max: fam.range.max }, ..fam.clone() };
        reduced.pairs.remove(family);
        if index > fam.range.min {
            reduced.pairs.push(others);
        }
        reduced.pairs.push(rest);
        let rel = monoid_relate(&reduced, &left, &right, bounds);
        out.push(PumpEvidence { index, left, right, derivable_without_it: rel.is_related() });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn sigma() -> RewritePresentation {
        RewritePresentation::parse("xy^ix = xyx : i>=1\nx^2y^2 = x^2y\ny^2x^2 = yx^2").unwrap()
    }

    fn tau() -> RewritePresentation {
        RewritePresentation::parse("yx^iy = yxy : i>=1; y^2x^2 = y^2x; x^2y^2 = xy^2").unwrap()
    }

    fn rho() -> RewritePresentation {
        RewritePresentation::parse(
            "xy^2x = xyx; yx^2y = yxy; x^2y^2 = x^2y; y^2x^2 = yx^2; y^2x^2 = y^2x; x^2y^2 = xy^2",
        )
        .unwrap()
    }

    #[test]
    fn parsing() {
        let s = sigma();
        assert_eq!(s.pairs.len(), 3);
        assert_eq!(s.alphabet(), b"xy");
        assert_eq!(s.pairs[0].to_string(), "(xy^ix, xyx) : i>=1");
        assert!(RewritePresentation::parse("xy").is_err());
        // i = 1 is the trivial pair and is dropped
        let rules = s.rules(5);
        assert_eq!(rules.iter().filter(|r| r.family == 0).count(), 2);
    }

    #[test]
    fn relate_paths() {
        let r = monoid_relate(&rho(), &w("xy^3x"), &w("xyx"), Bounds::default());
        match r {
            Relation::Related { path } => {
                assert!(!path.is_empty());
                assert_eq!(path[0].from, w("xy^3x"));
                assert_eq!(path.last().unwrap().to, w("xyx"));
                assert!(replay(&path));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(monoid_relate(&rho(), &w("xy"), &w("xy"), Bounds::default()), Relation::Related { path } if path.is_empty()));
        let r = monoid_relate(&sigma(), &w("x"), &w("y"), Bounds::default());
        assert!(!r.is_related());
    }

    #[test]
    fn generator_of_rho_is_one_step() {
        match monoid_relate(&rho(), &w("x^2y^2"), &w("x^2y"), Bounds::default()) {
            Relation::Related { path } => assert_eq!(path.len(), 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sigma_keeps_x_count() {
        for r in sigma().rules(12) {
            assert_eq!(r.left.count(b'x'), r.right.count(b'x'));
        }
    }

    #[test]
    fn join_claim_small() {
        let rep = check_cong_join_claim(&sigma(), &tau(), &rho(), Bounds::default(), 4, 6);
        assert!(rep.holds(), "{:?}", rep.checks.iter().filter(|c| !c.related).collect::<Vec<_>>());
        assert_eq!(rep.letter_invariants, (true, true));
    }

    #[test]
    fn pump_is_independent() {
        let ev = pump_independence(&sigma(), 0, 5, Bounds { max_len: 10, max_states: 100_000 }).unwrap();
        assert!(ev.iter().filter(|e| e.index >= 2).all(|e| !e.derivable_without_it));
    }

    #[test]
    fn bounded_classes() {
        let mut c = BoundedClasses::new(&rho(), b"xy", 6);
        assert_eq!(c.related(&w("xy^2x"), &w("xyx")), Some(true));
        assert_eq!(c.related(&w("x"), &w("y")), Some(false));
        assert_eq!(c.related(&w("x^9"), &w("y")), None);
    }
}
