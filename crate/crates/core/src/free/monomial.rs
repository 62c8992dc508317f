//! Membership of monomials in monomial ideals (two-sided or one-sided) of a
//! free ring with one.

use serde::Serialize;

use super::{Word, WordFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sided {
    /// `R g R`: `g` is a factor of `m`.
    Two,
    /// `R g`: `g` is a suffix of `m`.
    Left,
    /// `g R`: `g` is a prefix of `m`.
    Right,
}

impl std::str::FromStr for Sided {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "two" | "two-sided" | "both" => Ok(Sided::Two),
            "left" => Ok(Sided::Left),
            "right" => Ok(Sided::Right),
            _ => Err(crate::error::Error::Parse(format!("unknown sidedness `{s}` (two, left, right)"))),
        }
    }
}

/// `m = left · generator · right`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub generator: usize,
    pub index: Option<usize>,
    pub left: Word,
    pub middle: Word,
    pub right: Word,
}

/// Lengths `ℓ` such that `m[start..start+ℓ]` is an instance of `fam`, with the index.
fn matches_at(fam: &WordFamily, m: &[u8], start: usize) -> Vec<(Option<usize>, usize)> {
    let p = &fam.pattern;
    let rest = &m[start..];
    if !rest.starts_with(&p.prefix.0) {
        return vec![];
    }
    if !p.is_pumped() {
        return vec![(None, p.prefix.len())];
    }
    let mut out = Vec::new();
    let mut pos = p.prefix.len();
    let mut i = 0;
    loop {
        if fam.range.contains(i) && rest[pos..].starts_with(&p.suffix.0) {
            out.push((Some(i), pos + p.suffix.len()));
        }
        if fam.range.max.is_some_and(|mx| i >= mx) || !rest[pos..].starts_with(&p.block.0) {
            break;
        }
        pos += p.block.len();
        i += 1;
    }
    out
}

/// The first factorization of `m` through a generator (by start, then generator order, then length).
pub fn monomial_ideal_member(gens: &[WordFamily], m: &Word, sided: Sided) -> Option<Factorization> {
    let n = m.len();
    let starts: Vec<usize> = match sided {
        Sided::Right => vec![0],
        _ => (0..=n).collect(),
    };
    for start in starts {
        for (gi, fam) in gens.iter().enumerate() {
            for (index, len) in matches_at(fam, &m.0, start) {
                if len == 0 || (sided == Sided::Left && start + len != n) {
                    continue;
                }
                return Some(Factorization {
                    generator: gi,
                    index,
                    left: Word(m.0[..start].to_vec()),
                    middle: Word(m.0[start..start + len].to_vec()),
                    right: Word(m.0[start + len..].to_vec()),
                });
            }
        }
    }
    None
}

#[derive(Debug, Clone, Serialize)]
pub struct Disagreement {
    pub monomial: Word,
    pub in_intersection: bool,
    pub in_candidate_ideal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct IntersectionReport {
    pub max_degree: usize,
    pub checked: usize,
    pub intersection_members: usize,
    pub disagreements: Vec<Disagreement>,
}

impl IntersectionReport {
    pub fn agrees(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Compares `I ∩ J` with the ideal generated by `candidates` on all monomials of degree `1..=max_degree`.
pub fn verify_intersection_generation(
    gens_i: &[WordFamily],
    gens_j: &[WordFamily],
    candidates: &[WordFamily],
    alphabet: &[u8],
    max_degree: usize,
) -> IntersectionReport {
    let mut checked = 0;
    let mut members = 0;
    let mut disagreements = Vec::new();
    for m in Word::all_up_to(alphabet, max_degree).into_iter().filter(|w| !w.is_empty()) {
        checked += 1;
        let both = monomial_ideal_member(gens_i, &m, Sided::Two).is_some()
            && monomial_ideal_member(gens_j, &m, Sided::Two).is_some();
        let cand = monomial_ideal_member(candidates, &m, Sided::Two).is_some();
        members += usize::from(both);
        if both != cand {
            disagreements.push(Disagreement { monomial: m, in_intersection: both, in_candidate_ideal: cand });
        }
    }
    IntersectionReport { max_degree, checked, intersection_members: members, disagreements }
}

#[cfg(test)]
mod tests {
    use super::super::parse_families;
    use super::*;

    fn fams(s: &str) -> Vec<WordFamily> {
        parse_families(s).unwrap()
    }

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn pumped_matching() {
        let g = fams("xy^ix : i>=1");
        let f = monomial_ideal_member(&g, &w("yxy^3xy"), Sided::Two).unwrap();
        assert_eq!((f.index, f.left.clone(), f.middle.clone(), f.right.clone()), (Some(3), w("y"), w("xy^3x"), w("y")));
        assert!(monomial_ideal_member(&g, &w("x^2"), Sided::Two).is_none());
        let bounded = fams("xy^ix : 1<=i<=2");
        assert!(monomial_ideal_member(&bounded, &w("xy^3x"), Sided::Two).is_none());
        assert!(monomial_ideal_member(&bounded, &w("xy^2x"), Sided::Two).is_some());
    }

    #[test]
    fn sidedness() {
        let k = fams("x^iy : i>=1");
        assert!(monomial_ideal_member(&k, &w("x^2yx"), Sided::Right).is_some());
        assert!(monomial_ideal_member(&k, &w("yx^2y"), Sided::Right).is_none());
        assert!(monomial_ideal_member(&k, &w("yx^2y"), Sided::Two).is_some());
        assert!(monomial_ideal_member(&k, &w("yx^2y"), Sided::Left).is_some());
        assert!(monomial_ideal_member(&k, &w("x^2yx"), Sided::Left).is_none());
        assert_eq!("left".parse::<Sided>().unwrap(), Sided::Left);
        assert!("up".parse::<Sided>().is_err());
    }

    #[test]
    fn literal_generators_and_empty_word() {
        let g = fams("xyx; yxy");
        assert!(monomial_ideal_member(&g, &w("1"), Sided::Two).is_none());
        assert_eq!(monomial_ideal_member(&g, &w("yxyx"), Sided::Two).unwrap().generator, 1);
    }
}
