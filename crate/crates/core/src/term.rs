//! Terms over a signature and their evaluation.

use std::fmt;

use crate::algebra::{FiniteAlgebra, Signature};
use crate::error::{Error, Result};

/// A term tree: variables `x0, x1, …` at the leaves, operation symbols
/// (by index into the signature) at internal nodes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(usize),
    App(usize, Vec<Term>),
}

impl Term {
    pub fn var(i: usize) -> Self {
        Term::Var(i)
    }

    pub fn app(symbol: usize, args: Vec<Term>) -> Self {
        Term::App(symbol, args)
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// One more than the largest variable index (0 for ground terms).
    pub fn variable_count(&self) -> usize {
        match self {
            Term::Var(i) => i + 1,
            Term::App(_, args) => args.iter().map(Term::variable_count).max().unwrap_or(0),
        }
    }

    /// Checks symbol indices, arities and variable bounds.
    pub fn check(&self, sig: &Signature, vars: usize) -> Result<()> {
        match self {
            Term::Var(i) if *i >= vars => Err(Error::VariableOutOfRange {
                index: *i,
                available: vars,
            }),
            Term::Var(_) => Ok(()),
            Term::App(s, args) => {
                if *s >= sig.len() {
                    return Err(Error::Parse(format!("symbol index {s} not in signature {sig}")));
                }
                if args.len() != sig.arity(*s) {
                    return Err(Error::Arity {
                        symbol: sig.name(*s).to_string(),
                        expected: sig.arity(*s),
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|t| t.check(sig, vars))
            }
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> TermDisplay<'a> {
        TermDisplay { term: self, sig }
    }

    /// Parses prefix syntax `mul(x0, inv(x1))`; constants may omit parentheses.
    pub fn parse(text: &str, sig: &Signature) -> Result<Term> {
        let mut p = TermParser { s: text.as_bytes(), pos: 0, sig };
        let t = p.term()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(Error::Parse(format!("trailing input at byte {} of `{text}`", p.pos)));
        }
        Ok(t)
    }
}

pub struct TermDisplay<'a> {
    term: &'a Term,
    sig: &'a Signature,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term {
            Term::Var(i) => write!(f, "x{i}"),
            Term::App(s, args) => {
                f.write_str(self.sig.name(*s))?;
                if args.is_empty() {
                    return Ok(());
                }
                f.write_str("(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}", a.display(self.sig))?;
                }
                f.write_str(")")
            }
        }
    }
}

struct TermParser<'a> {
    s: &'a [u8],
    pos: usize,
    sig: &'a Signature,
}

impl TermParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() {
            let c = self.s[self.pos];
            if c.is_ascii_whitespace() || c == b'(' || c == b')' || c == b',' {
                break;
            }
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse(format!("expected a symbol or variable at byte {start}")));
        }
        Ok(String::from_utf8_lossy(&self.s[start..self.pos]).into_owned())
    }

    fn term(&mut self) -> Result<Term> {
        let name = self.ident()?;
        if let Some(sym) = self.sig.index_of(&name) {
            let mut args = Vec::new();
            self.skip_ws();
            if self.s.get(self.pos) == Some(&b'(') {
                self.pos += 1;
                self.skip_ws();
                if self.s.get(self.pos) == Some(&b')') {
                    self.pos += 1;
                } else {
                    loop {
                        args.push(self.term()?);
                        self.skip_ws();
                        match self.s.get(self.pos) {
                            Some(b',') => self.pos += 1,
                            Some(b')') => {
                                self.pos += 1;
                                break;
                            }
                            _ => return Err(Error::Parse(format!("expected `,` or `)` at byte {}", self.pos))),
                        }
                    }
                }
            }
            if args.len() != self.sig.arity(sym) {
                return Err(Error::Arity {
                    symbol: name,
                    expected: self.sig.arity(sym),
                    found: args.len(),
                });
            }
            return Ok(Term::App(sym, args));
        }
        if let Some(idx) = name.strip_prefix('x').and_then(|d| d.parse::<usize>().ok()) {
            return Ok(Term::Var(idx));
        }
        Err(Error::Parse(format!("unknown symbol `{name}`")))
    }
}

/// Evaluates `t` bottom-up through the operation tables.
pub fn eval_term(a: &FiniteAlgebra, t: &Term, assignment: &[usize]) -> Result<usize> {
    t.check(a.signature(), assignment.len())?;
    if let Some(&x) = assignment.iter().find(|&&x| x >= a.size()) {
        return Err(Error::ElementOutOfRange { element: x, size: a.size() });
    }
    Ok(eval_unchecked(a, t, assignment))
}

pub(crate) fn eval_unchecked(a: &FiniteAlgebra, t: &Term, assignment: &[usize]) -> usize {
    match t {
        Term::Var(i) => assignment[*i],
        Term::App(s, args) => {
            let vals: Vec<usize> = args.iter().map(|u| eval_unchecked(a, u, assignment)).collect();
            a.apply(*s, &vals)
        }
    }
}

/// The term operation of `t` on `a` as a table over `a^vars` (row-major).
pub fn term_table(a: &FiniteAlgebra, t: &Term, vars: usize) -> Result<Vec<usize>> {
    t.check(a.signature(), vars)?;
    let n = a.size();
    let len = n.checked_pow(vars as u32).ok_or_else(|| Error::precondition("term table too large"))?;
    // evaluate column-wise: each subterm becomes a vector over all assignments
    fn go(a: &FiniteAlgebra, t: &Term, n: usize, vars: usize, len: usize) -> Vec<usize> {
        match t {
            Term::Var(i) => {
                let stride = n.pow((vars - 1 - i) as u32);
                (0..len).map(|idx| (idx / stride) % n).collect()
            }
            Term::App(s, args) => {
                let cols: Vec<Vec<usize>> = args.iter().map(|u| go(a, u, n, vars, len)).collect();
                let mut buf = vec![0; cols.len()];
                (0..len)
                    .map(|idx| {
                        for (b, c) in buf.iter_mut().zip(&cols) {
                            *b = c[idx];
                        }
                        a.apply(*s, &buf)
                    })
                    .collect()
            }
        }
    }
    Ok(go(a, t, n, vars, len))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn modular_addition() {
        let z4 = zoo::z_mod(4);
        let plus = z4.symbol("+").unwrap();
        let t = Term::app(plus, vec![Term::var(0), Term::var(1)]);
        assert_eq!(eval_term(&z4, &t, &[3, 2]).unwrap(), 1);
    }

    #[test]
    fn projection_is_identity() {
        let s3 = zoo::symmetric_group_3();
        for a in 0..6 {
            assert_eq!(eval_term(&s3, &Term::var(0), &[a]).unwrap(), a);
        }
    }

    #[test]
    fn g_times_g_inverse_is_identity() {
        let s3 = zoo::symmetric_group_3();
        let t = Term::parse("mul(x0, inv(x1))", s3.signature()).unwrap();
        let e = s3.apply(s3.symbol("e").unwrap(), &[]);
        for g in 0..6 {
            assert_eq!(eval_term(&s3, &t, &[g, g]).unwrap(), e);
        }
    }

    #[test]
    fn errors_on_bad_assignment() {
        let z4 = zoo::z_mod(4);
        let t = Term::parse("+(x0, x2)", z4.signature()).unwrap();
        assert!(matches!(
            eval_term(&z4, &t, &[1, 1]),
            Err(Error::VariableOutOfRange { index: 2, available: 2 })
        ));
        let bad = Term::App(z4.symbol("+").unwrap(), vec![Term::var(0)]);
        assert!(matches!(eval_term(&z4, &bad, &[1]), Err(Error::Arity { .. })));
    }

    #[test]
    fn parse_display_round_trip() {
        let s3 = zoo::symmetric_group_3();
        let src = "mul(mul(x0, inv(x1)), x2)";
        let t = Term::parse(src, s3.signature()).unwrap();
        assert_eq!(t.display(s3.signature()).to_string(), src);
        assert_eq!(Term::parse("e", s3.signature()).unwrap(), Term::App(2, vec![]));
    }

    #[test]
    fn term_table_agrees_with_eval() {
        let s3 = zoo::symmetric_group_3();
        let t = Term::parse("mul(mul(x0, inv(x1)), x2)", s3.signature()).unwrap();
        let table = term_table(&s3, &t, 3).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                for c in 0..6 {
                    assert_eq!(table[a * 36 + b * 6 + c], eval_term(&s3, &t, &[a, b, c]).unwrap());
                }
            }
        }
    }
}
