//! Free lattices: terms, Whitman's solution of the word problem, and
//! evaluation in finite lattices.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};

/// A lattice term over generators `0, 1, …` (displayed as `x, y, z, …`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LatticeTerm {
    Gen(usize),
    Meet(Box<LatticeTerm>, Box<LatticeTerm>),
    Join(Box<LatticeTerm>, Box<LatticeTerm>),
}

impl LatticeTerm {
    pub fn gen(g: usize) -> Self {
        LatticeTerm::Gen(g)
    }

    pub fn meet(self, other: LatticeTerm) -> Self {
        LatticeTerm::Meet(Box::new(self), Box::new(other))
    }

    pub fn join(self, other: LatticeTerm) -> Self {
        LatticeTerm::Join(Box::new(self), Box::new(other))
    }

    pub fn size(&self) -> usize {
        match self {
            LatticeTerm::Gen(_) => 1,
            LatticeTerm::Meet(a, b) | LatticeTerm::Join(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            LatticeTerm::Gen(_) => 0,
            LatticeTerm::Meet(a, b) | LatticeTerm::Join(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// One more than the largest generator index.
    pub fn generator_count(&self) -> usize {
        match self {
            LatticeTerm::Gen(g) => g + 1,
            LatticeTerm::Meet(a, b) | LatticeTerm::Join(a, b) => a.generator_count().max(b.generator_count()),
        }
    }

    /// Parses `x /\ (y \/ z)`; `∧`, `∨`, `&`, `|` are accepted too. Meet binds tighter.
    ///
    /// Generators are single letters: `x, y, z, w` map to `0..4`, any other
    /// letter to `4 + (letter − 'a')`, or `g<k>` for generator `k`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = Parser { chars: text.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0 };
        let t = p.join()?;
        if p.pos != p.chars.len() {
            return Err(Error::Parse(format!("unexpected `{}` at position {}", p.chars[p.pos], p.pos)));
        }
        Ok(t)
    }
}

fn generator_name(g: usize) -> String {
    match g {
        0..=3 => ["x", "y", "z", "w"][g].to_string(),
        _ if g < 4 + 22 => {
            let letters: Vec<char> = ('a'..='z').filter(|c| !"xyzw".contains(*c)).collect();
            letters[g - 4].to_string()
        }
        _ => format!("g{g}"),
    }
}

fn generator_index(c: char) -> Option<usize> {
    if let Some(i) = "xyzw".find(c) {
        return Some(i);
    }
    let letters: Vec<char> = ('a'..='z').filter(|c| !"xyzw".contains(*c)).collect();
    letters.iter().position(|&l| l == c).map(|i| i + 4)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, tokens: &[&str]) -> bool {
        for t in tokens {
            let tc: Vec<char> = t.chars().collect();
            if self.chars[self.pos..].starts_with(&tc) {
                self.pos += tc.len();
                return true;
            }
        }
        false
    }

    fn join(&mut self) -> Result<LatticeTerm> {
        let mut t = self.meet()?;
        while self.eat(&["\\/", "∨", "|"]) {
            t = t.join(self.meet()?);
        }
        Ok(t)
    }

    fn meet(&mut self) -> Result<LatticeTerm> {
        let mut t = self.atom()?;
        while self.eat(&["/\\", "∧", "&"]) {
            t = t.meet(self.atom()?);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<LatticeTerm> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let t = self.join()?;
                if !self.eat(&[")"]) {
                    return Err(Error::Parse(format!("expected `)` at position {}", self.pos)));
                }
                Ok(t)
            }
            Some('g') if self.chars.get(self.pos + 1).is_some_and(char::is_ascii_digit) => {
                self.pos += 1;
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let digits: String = self.chars[start..self.pos].iter().collect();
                Ok(LatticeTerm::Gen(digits.parse().map_err(|e| Error::Parse(format!("{e}")))?))
            }
            Some(c) => match generator_index(c) {
                Some(g) => {
                    self.pos += 1;
                    Ok(LatticeTerm::Gen(g))
                }
                None => Err(Error::Parse(format!("unexpected `{c}` at position {}", self.pos))),
            },
            None => Err(Error::Parse("unexpected end of term".into())),
        }
    }
}

impl fmt::Display for LatticeTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeTerm::Gen(g) => write!(f, "{}", generator_name(*g)),
            LatticeTerm::Meet(a, b) => {
                let side = |t: &LatticeTerm| match t {
                    LatticeTerm::Join(..) => format!("({t})"),
                    _ => t.to_string(),
                };
                write!(f, "{}∧{}", side(a), side(b))
            }
            LatticeTerm::Join(a, b) => write!(f, "{}∨{}", a, b),
        }
    }
}

pub type NodeId = u32;

/// Canonical node: flattened, sorted and deduplicated operand lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Node {
    Gen(usize),
    Meet(Vec<NodeId>),
    Join(Vec<NodeId>),
}

/// Hash-consed lattice terms with a memoized order test.
#[derive(Debug, Default)]
pub struct FreeLattice {
    nodes: Vec<Node>,
    ids: HashMap<Node, NodeId>,
    memo: HashMap<(NodeId, NodeId), bool>,
}

impl FreeLattice {
    pub fn new() -> Self {
        FreeLattice::default()
    }

    fn intern(&mut self, node: Node) -> NodeId {
        if let Some(&id) = self.ids.get(&node) {
            return id;
        }
        let id = self.nodes.len() as NodeId;
        self.nodes.push(node.clone());
        self.ids.insert(node, id);
        id
    }

    pub fn gen(&mut self, g: usize) -> NodeId {
        self.intern(Node::Gen(g))
    }

    fn combine(&mut self, meet: bool, a: NodeId, b: NodeId) -> NodeId {
        let mut ops = Vec::new();
        for x in [a, b] {
            match &self.nodes[x as usize] {
                Node::Meet(xs) if meet => ops.extend_from_slice(xs),
                Node::Join(xs) if !meet => ops.extend_from_slice(xs),
                _ => ops.push(x),
            }
        }
        ops.sort_unstable();
        ops.dedup();
        if ops.len() == 1 {
            return ops[0];
        }
        self.intern(if meet { Node::Meet(ops) } else { Node::Join(ops) })
    }

    pub fn meet(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.combine(true, a, b)
    }

    pub fn join(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.combine(false, a, b)
    }

    pub fn add(&mut self, t: &LatticeTerm) -> NodeId {
        match t {
            LatticeTerm::Gen(g) => self.gen(*g),
            LatticeTerm::Meet(a, b) => {
                let (a, b) = (self.add(a), self.add(b));
                self.meet(a, b)
            }
            LatticeTerm::Join(a, b) => {
                let (a, b) = (self.add(a), self.add(b));
                self.join(a, b)
            }
        }
    }

    /// Number of distinct canonical subterms seen so far.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// `p ≤ q` in the free lattice.
    pub fn leq(&mut self, p: NodeId, q: NodeId) -> bool {
        if p == q {
            return true;
        }
        if let Some(&r) = self.memo.get(&(p, q)) {
            return r;
        }
        let pn = self.nodes[p as usize].clone();
        let qn = self.nodes[q as usize].clone();
        let r = match (&pn, &qn) {
            (Node::Join(ps), _) => ps.iter().all(|&x| self.leq(x, q)),
            (_, Node::Meet(qs)) => qs.iter().all(|&y| self.leq(p, y)),
            (Node::Gen(_), Node::Gen(_)) => false,
            (Node::Gen(_), Node::Join(qs)) => qs.iter().any(|&y| self.leq(p, y)),
            (Node::Meet(ps), Node::Gen(_)) => ps.iter().any(|&x| self.leq(x, q)),
            (Node::Meet(ps), Node::Join(qs)) => {
                let gens_first = |lat: &Self, xs: &[NodeId]| {
                    let mut v = xs.to_vec();
                    v.sort_by_key(|&x| !matches!(lat.nodes[x as usize], Node::Gen(_)));
                    v
                };
                let ps = gens_first(self, ps);
                let qs = gens_first(self, qs);
                ps.iter().any(|&x| self.leq(x, q)) || qs.iter().any(|&y| self.leq(p, y))
            }
        };
        self.memo.insert((p, q), r);
        r
    }

    pub fn equal(&mut self, p: NodeId, q: NodeId) -> bool {
        self.leq(p, q) && self.leq(q, p)
    }

    pub fn term(&self, id: NodeId) -> LatticeTerm {
        match &self.nodes[id as usize] {
            Node::Gen(g) => LatticeTerm::Gen(*g),
            Node::Meet(xs) | Node::Join(xs) => {
                let meet = matches!(self.nodes[id as usize], Node::Meet(_));
                let mut it = xs.iter().map(|&x| self.term(x));
                let first = it.next().expect("operands");
                it.fold(first, |acc, t| if meet { acc.meet(t) } else { acc.join(t) })
            }
        }
    }
}

/// `p ≤ q` in the free lattice (fresh memo table).
pub fn whitman_leq(p: &LatticeTerm, q: &LatticeTerm) -> bool {
    let mut lat = FreeLattice::new();
    let (a, b) = (lat.add(p), lat.add(q));
    lat.leq(a, b)
}

/// `x_{n+1} = x ∨ (y_n ∧ z_n)` and cyclically for `y`, `z`, starting from the generators.
pub fn xyz_sequence(n: usize) -> (LatticeTerm, LatticeTerm, LatticeTerm) {
    let (x, y, z) = (LatticeTerm::gen(0), LatticeTerm::gen(1), LatticeTerm::gen(2));
    let (mut xn, mut yn, mut zn) = (x.clone(), y.clone(), z.clone());
    for _ in 0..n {
        let nx = x.clone().join(yn.clone().meet(zn.clone()));
        let ny = y.clone().join(xn.clone().meet(zn.clone()));
        let nz = z.clone().join(xn.clone().meet(yn.clone()));
        (xn, yn, zn) = (nx, ny, nz);
    }
    (xn, yn, zn)
}

/// The sequence `(x_k, y_k, z_k)` for `k ≤ n` as shared nodes.
pub fn xyz_nodes(lat: &mut FreeLattice, n: usize) -> Vec<[NodeId; 3]> {
    let g = [lat.gen(0), lat.gen(1), lat.gen(2)];
    let mut out = vec![g];
    for _ in 0..n {
        let [x, y, z] = *out.last().expect("nonempty");
        let yz = lat.meet(y, z);
        let xz = lat.meet(x, z);
        let xy = lat.meet(x, y);
        out.push([lat.join(g[0], yz), lat.join(g[1], xz), lat.join(g[2], xy)]);
    }
    out
}

/// The meet and join operations of a lattice reduct.
#[derive(Debug, Clone, Copy)]
pub struct LatticeOps {
    pub meet: usize,
    pub join: usize,
}

impl LatticeOps {
    /// Finds binary operations named meet/join (or `∧`/`∨`) and checks the lattice laws.
    pub fn detect(l: &FiniteAlgebra) -> Result<Self> {
        let sig = l.signature();
        let find = |names: &[&str]| names.iter().find_map(|n| sig.index_of(n)).filter(|&s| sig.arity(s) == 2);
        let (meet, join) = match (find(&["meet", "∧", "/\\", "and"]), find(&["join", "∨", "\\/", "or"])) {
            (Some(m), Some(j)) => (m, j),
            _ => return Err(Error::MissingReduct(format!("`{}` has no meet/join operations", l.name()))),
        };
        let n = l.size();
        let f = |s: usize, a: usize, b: usize| l.table(s)[a * n + b] as usize;
        for a in 0..n {
            for b in 0..n {
                let ok = [meet, join].iter().all(|&s| f(s, a, b) == f(s, b, a) && f(s, a, a) == a)
                    && f(meet, a, f(join, a, b)) == a
                    && f(join, a, f(meet, a, b)) == a
                    && (0..n).all(|c| {
                        [meet, join].iter().all(|&s| f(s, f(s, a, b), c) == f(s, a, f(s, b, c)))
                    });
                if !ok {
                    return Err(Error::MissingReduct(format!("`{}` violates the lattice laws at ({a},{b})", l.name())));
                }
            }
        }
        Ok(LatticeOps { meet, join })
    }

    pub fn leq(&self, l: &FiniteAlgebra, a: usize, b: usize) -> bool {
        l.table(self.meet)[a * l.size() + b] as usize == a
    }
}

/// Evaluates `t` in the lattice `l` with generator `g ↦ assignment[g]`.
pub fn lattice_eval(t: &LatticeTerm, l: &FiniteAlgebra, assignment: &[usize]) -> Result<usize> {
    let ops = LatticeOps::detect(l)?;
    eval_with(t, l, &ops, assignment)
}

fn eval_with(t: &LatticeTerm, l: &FiniteAlgebra, ops: &LatticeOps, assignment: &[usize]) -> Result<usize> {
    match t {
        LatticeTerm::Gen(g) => {
            let v = *assignment
                .get(*g)
                .ok_or(Error::VariableOutOfRange { index: *g, available: assignment.len() })?;
            if v >= l.size() {
                return Err(Error::ElementOutOfRange { element: v, size: l.size() });
            }
            Ok(v)
        }
        LatticeTerm::Meet(a, b) | LatticeTerm::Join(a, b) => {
            let s = if matches!(t, LatticeTerm::Meet(..)) { ops.meet } else { ops.join };
            let (x, y) = (eval_with(a, l, ops, assignment)?, eval_with(b, l, ops, assignment)?);
            Ok(l.table(s)[x * l.size() + y] as usize)
        }
    }
}

/// Evaluates a shared node, memoized per call.
pub fn node_eval(lat: &FreeLattice, id: NodeId, l: &FiniteAlgebra, ops: &LatticeOps, assignment: &[usize]) -> usize {
    fn go(lat: &FreeLattice, id: NodeId, l: &FiniteAlgebra, ops: &LatticeOps, asg: &[usize], memo: &mut HashMap<NodeId, usize>) -> usize {
        if let Some(&v) = memo.get(&id) {
            return v;
        }
        let n = l.size();
        let v = match &lat.nodes[id as usize] {
            Node::Gen(g) => asg[*g],
            Node::Meet(xs) | Node::Join(xs) => {
                let s = if matches!(lat.nodes[id as usize], Node::Meet(_)) { ops.meet } else { ops.join };
                let vals: Vec<usize> = xs.iter().map(|&x| go(lat, x, l, ops, asg, memo)).collect();
                vals[1..].iter().fold(vals[0], |acc, &v| l.table(s)[acc * n + v] as usize)
            }
        };
        memo.insert(id, v);
        v
    }
    go(lat, id, l, ops, assignment, &mut HashMap::new())
}

/// Why `p ≤ q` fails in the free lattice: one line per forced subgoal, ending at
/// a comparison where no Whitman clause applies. Empty when `p ≤ q` holds.
pub fn refutation_trace(p: &LatticeTerm, q: &LatticeTerm) -> Vec<String> {
    let mut out = Vec::new();
    let (mut p, mut q) = (p.clone(), q.clone());
    while !whitman_leq(&p, &q) {
        match (&p, &q) {
            (LatticeTerm::Join(a, b), _) => {
                let bad = if whitman_leq(a, &q) { b } else { a };
                out.push(format!("{p} ≤ {q} needs every joinand below; {bad} ≰ {q}"));
                p = (**bad).clone();
            }
            (_, LatticeTerm::Meet(a, b)) => {
                let bad = if whitman_leq(&p, a) { b } else { a };
                out.push(format!("{p} ≤ {q} needs p below every meetand; {p} ≰ {bad}"));
                q = (**bad).clone();
            }
            _ => {
                out.push(format!("{p} ≰ {q}: no meetand of the left side lies below {q} and the left side lies below no joinand of the right"));
                break;
            }
        }
    }
    out
}

/// An assignment into one of `lattices` with `eval(p) ≰ eval(q)`, if any.
pub fn countermodel(p: &LatticeTerm, q: &LatticeTerm, lattices: &[FiniteAlgebra]) -> Result<Option<(String, Vec<usize>, usize, usize)>> {
    let gens = p.generator_count().max(q.generator_count());
    for l in lattices {
        let ops = LatticeOps::detect(l)?;
        let n = l.size();
        let total = n.checked_pow(gens as u32).filter(|&t| t <= 1 << 20).unwrap_or(0);
        for code in 0..total {
            let mut r = code;
            let asg: Vec<usize> = (0..gens)
                .map(|_| {
                    let v = r % n;
                    r /= n;
                    v
                })
                .collect();
            let (a, b) = (eval_with(p, l, &ops, &asg)?, eval_with(q, l, &ops, &asg)?);
            if !ops.leq(l, a, b) {
                return Ok(Some((l.name().to_string(), asg, a, b)));
            }
        }
    }
    Ok(None)
}

/// Outcome of one claim family.
#[derive(Debug, Clone, Serialize)]
pub struct ClaimCheck {
    pub claim: &'static str,
    pub statement: &'static str,
    pub instances: usize,
    pub holds: bool,
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct XyzReport {
    pub max_n: usize,
    /// The checks are bounded: indices range over `0..=max_n` only.
    pub bounded: bool,
    pub claims: Vec<ClaimCheck>,
    pub base_comparison: (bool, bool),
}

impl XyzReport {
    pub fn all_hold(&self) -> bool {
        self.claims.iter().all(|c| c.holds) && self.base_comparison == (true, false)
    }
}

fn check(claim: &'static str, statement: &'static str) -> ClaimCheck {
    ClaimCheck { claim, statement, instances: 0, holds: true, first_failure: None }
}

impl ClaimCheck {
    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok && self.holds {
            self.holds = false;
            self.first_failure = Some(describe());
        }
    }
}

/// Checks claims (a)–(d) about `x_n, y_n, z_n` for all indices up to `max_n`.
///
/// (a) `φ(x_n) = a`, `φ(y_n) = b`, `φ(z_n) = c` in `M₃`; (b) `x_n` is
/// incomparable with `y_m` and `z_m`; (c) `x_n < x_{n+1}`; (d)
/// `x_{n+1} ∧ y_{n+1} ≰ x_m` for `m ≤ n`. Cyclic analogues are checked too.
pub fn xyz_claims(max_n: usize, m3: &FiniteAlgebra, assignment: [usize; 3]) -> Result<XyzReport> {
    let ops = LatticeOps::detect(m3)?;
    let mut lat = FreeLattice::new();
    let seq = xyz_nodes(&mut lat, max_n + 1);
    let mut a = check("a", "φ(x_n) = a, φ(y_n) = b, φ(z_n) = c");
    let mut b = check("b", "x_n incomparable with y_m and z_m");
    let mut c = check("c", "x_n < x_{n+1}");
    let mut d = check("d", "x_{n+1} ∧ y_{n+1} ≰ x_m for m ≤ n");
    let names = ["x", "y", "z"];
    for n in 0..=max_n {
        for v in 0..3 {
            let val = node_eval(&lat, seq[n][v], m3, &ops, &assignment);
            a.record(val == assignment[v], || format!("φ({}_{n}) = {val}", names[v]));
            let (cur, next) = (seq[n][v], seq[n + 1][v]);
            let ok = lat.leq(cur, next) && !lat.leq(next, cur);
            c.record(ok, || format!("{0}_{n} < {0}_{1} fails", names[v], n + 1));
            for m in 0..=max_n {
                for w in (0..3).filter(|&w| w != v) {
                    let (p, q) = (seq[n][v], seq[m][w]);
                    let ok = !lat.leq(p, q) && !lat.leq(q, p);
                    b.record(ok, || format!("{}_{n} and {}_{m} are comparable", names[v], names[w]));
                }
            }
        }
        for m in 0..=n {
            for v in 0..3 {
                let w = (v + 1) % 3;
                let top = lat.meet(seq[n + 1][v], seq[n + 1][w]);
                for target in [v, w] {
                    let ok = !lat.leq(top, seq[m][target]);
                    d.record(ok, || {
                        format!("{0}_{1} ∧ {2}_{1} ≤ {3}_{m}", names[v], n + 1, names[w], names[target])
                    });
                }
            }
        }
    }
    let x = lat.gen(0);
    let x1 = seq[1][0];
    let base = (lat.leq(x, x1), lat.leq(x1, x));
    Ok(XyzReport { max_n, bounded: true, claims: vec![a, b, c, d], base_comparison: base })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    fn t(s: &str) -> LatticeTerm {
        LatticeTerm::parse(s).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let p = t("x /\\ (y \\/ z)");
        assert_eq!(p.to_string(), "x∧(y∨z)");
        assert_eq!(t("x∧y∨z"), t("(x&y)|z"));
        assert!(LatticeTerm::parse("x /\\").is_err());
        assert!(LatticeTerm::parse("(x").is_err());
        assert_eq!(t("g7"), LatticeTerm::Gen(7));
    }

    #[test]
    fn basic_order() {
        assert!(whitman_leq(&t("x/\\y"), &t("x")));
        assert!(!whitman_leq(&t("x"), &t("x/\\y")));
        assert!(whitman_leq(&t("x"), &t("x\\/(y/\\z)")));
        assert!(!whitman_leq(&t("x\\/(y/\\z)"), &t("x")));
        // distributivity fails in free lattices
        assert!(!whitman_leq(&t("x/\\(y\\/z)"), &t("(x/\\y)\\/(x/\\z)")));
        assert!(whitman_leq(&t("(x/\\y)\\/(x/\\z)"), &t("x/\\(y\\/z)")));
        // absorption
        let mut lat = FreeLattice::new();
        let (a, b) = (lat.add(&t("x\\/(x/\\y)")), lat.add(&t("x")));
        assert!(lat.equal(a, b));
    }

    #[test]
    fn sequence_shapes() {
        let (x0, y0, z0) = xyz_sequence(0);
        assert_eq!((x0.to_string(), y0.to_string(), z0.to_string()), ("x".into(), "y".into(), "z".into()));
        assert_eq!(xyz_sequence(1).0.to_string(), "x∨y∧z");
        assert_eq!(xyz_sequence(1).0, t("x\\/(y/\\z)"));
        assert_eq!(xyz_sequence(2).0, t("x\\/((y\\/(x/\\z))/\\(z\\/(x/\\y)))"));
        let (x1, y1, _) = xyz_sequence(1);
        assert!(!whitman_leq(&x1.meet(y1), &t("x")));
    }

    #[test]
    fn eval_in_m3() {
        let m3 = zoo::m3();
        let phi = [1, 2, 3];
        assert_eq!(lattice_eval(&t("x/\\y"), &m3, &phi).unwrap(), 0);
        assert_eq!(lattice_eval(&t("x\\/y"), &m3, &phi).unwrap(), 4);
        for n in 0..=8 {
            assert_eq!(lattice_eval(&xyz_sequence(n).0, &m3, &phi).unwrap(), 1);
        }
        assert!(lattice_eval(&t("x"), &zoo::z_mod(2), &[0]).is_err());
        assert!(lattice_eval(&t("w"), &m3, &phi).is_err());
    }

    #[test]
    fn claims_small() {
        let r = xyz_claims(3, &zoo::m3(), [1, 2, 3]).unwrap();
        assert!(r.all_hold(), "{r:?}");
        assert!(r.claims.iter().all(|c| c.instances > 0));
    }

    #[test]
    fn claims_fail_under_a_wrong_assignment() {
        let r = xyz_claims(1, &zoo::m3(), [1, 1, 3]).unwrap();
        assert!(!r.claims[0].holds);
    }

    #[test]
    fn refutations() {
        let (x, p) = (t("x"), t("x \\/ (y /\\ z)"));
        assert!(refutation_trace(&x, &p).is_empty());
        let trace = refutation_trace(&p, &x);
        assert_eq!(trace.len(), 2, "{trace:?}");
        let (name, asg, a, b) = countermodel(&p, &x, &[crate::zoo::lattice_2()]).unwrap().unwrap();
        assert_eq!((name.as_str(), a, b), ("L2", 1, 0));
        assert_eq!(asg, vec![0, 1, 1]);
        assert!(countermodel(&x, &p, &[crate::zoo::m3()]).unwrap().is_none());
    }
}
