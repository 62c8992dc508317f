//! Bounded computations in free lattices, free monoids, monomial ideals of
//! free rings, and submonoids of `N₀^k`.

pub mod lattice;
pub mod monoid;
pub mod monomial;
pub mod vector;

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A word over single-letter generators (lowercase ASCII).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn new(letters: impl Into<Vec<u8>>) -> Self {
        Word(letters.into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    /// Parses `xy^3x`, `(xy)^2`, or `1` / `ε` for the empty word.
    pub fn parse(text: &str) -> Result<Self> {
        let p = Pattern::parse(text)?;
        if p.is_pumped() {
            return Err(Error::Parse(format!("`{text}` has a pumped exponent; a literal word is expected")));
        }
        Ok(p.prefix)
    }

    pub fn count(&self, letter: u8) -> usize {
        self.0.iter().filter(|&&c| c == letter).count()
    }

    /// All words over `alphabet` of length `0..=max_len` in shortlex order.
    pub fn all_up_to(alphabet: &[u8], max_len: usize) -> Vec<Word> {
        let mut out = vec![Word::default()];
        let mut layer = vec![Word::default()];
        for _ in 0..max_len {
            let mut next = Vec::with_capacity(layer.len() * alphabet.len());
            for w in &layer {
                for &a in alphabet {
                    let mut v = w.0.clone();
                    v.push(a);
                    next.push(Word(v));
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut i = 0;
        while i < self.0.len() {
            let c = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == c {
                j += 1;
            }
            if j - i > 1 {
                write!(f, "{}^{}", c as char, j - i)?;
            } else {
                write!(f, "{}", c as char)?;
            }
            i = j;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `prefix · block^i · suffix`; a literal word when `block` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    pub prefix: Word,
    pub block: Word,
    pub suffix: Word,
}

impl Pattern {
    pub fn literal(w: Word) -> Self {
        Pattern { prefix: w, block: Word::default(), suffix: Word::default() }
    }

    pub fn is_pumped(&self) -> bool {
        !self.block.is_empty()
    }

    pub fn instantiate(&self, i: usize) -> Word {
        let mut v = self.prefix.0.clone();
        for _ in 0..i {
            v.extend_from_slice(&self.block.0);
        }
        v.extend_from_slice(&self.suffix.0);
        Word(v)
    }

    pub fn len_at(&self, i: usize) -> usize {
        self.prefix.len() + i * self.block.len() + self.suffix.len()
    }

    /// Parses letters with optional exponents: `a^3`, `a^i`, `(ab)^2`, `(ab)^i`.
    /// At most one `^i` is allowed.
    pub fn parse(text: &str) -> Result<Self> {
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() || chars == ['1'] || chars == ['ε'] {
            return Ok(Pattern::literal(Word::default()));
        }
        let mut prefix = Vec::new();
        let mut block: Option<Vec<u8>> = None;
        let mut suffix = Vec::new();
        let mut pos = 0;
        while pos < chars.len() {
            let unit: Vec<u8> = match chars[pos] {
                '(' => {
                    let close = chars[pos..]
                        .iter()
                        .position(|&c| c == ')')
                        .ok_or_else(|| Error::Parse(format!("unclosed `(` in `{text}`")))?;
                    let inner: Vec<char> = chars[pos + 1..pos + close].to_vec();
                    pos += close + 1;
                    let mut v = Vec::new();
                    for c in inner {
                        v.push(letter(c, text)?);
                    }
                    if v.is_empty() {
                        return Err(Error::Parse(format!("empty group in `{text}`")));
                    }
                    v
                }
                c => {
                    pos += 1;
                    vec![letter(c, text)?]
                }
            };
            let mut pumped = false;
            let mut reps = 1;
            if chars.get(pos) == Some(&'^') {
                pos += 1;
                let start = pos;
                if chars.get(pos).is_some_and(char::is_ascii_digit) {
                    while chars.get(pos).is_some_and(char::is_ascii_digit) {
                        pos += 1;
                    }
                } else if pos < chars.len() {
                    pos += 1;
                }
                let exp: String = chars[start..pos].iter().collect();
                match exp.as_str() {
                    "i" | "n" | "k" => pumped = true,
                    _ => reps = exp.parse().map_err(|_| Error::Parse(format!("bad exponent `{exp}` in `{text}`")))?,
                }
            }
            if pumped {
                if block.is_some() {
                    return Err(Error::Parse(format!("`{text}` has more than one pumped block")));
                }
                block = Some(unit);
            } else {
                let target = if block.is_some() { &mut suffix } else { &mut prefix };
                for _ in 0..reps {
                    target.extend_from_slice(&unit);
                }
            }
        }
        Ok(Pattern { prefix: Word(prefix), block: Word(block.unwrap_or_default()), suffix: Word(suffix) })
    }
}

fn letter(c: char, text: &str) -> Result<u8> {
    if c.is_ascii_lowercase() {
        Ok(c as u8)
    } else {
        Err(Error::Parse(format!("`{c}` is not a generator letter in `{text}`")))
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.is_pumped() {
            return write!(f, "{}", self.prefix);
        }
        if !self.prefix.is_empty() {
            write!(f, "{}", self.prefix)?;
        }
        if self.block.len() == 1 {
            write!(f, "{}^i", self.block.0[0] as char)?;
        } else {
            write!(f, "({})^i", String::from_utf8_lossy(&self.block.0))?;
        }
        if !self.suffix.is_empty() {
            write!(f, "{}", self.suffix)?;
        }
        Ok(())
    }
}

/// Range of the pump index: `min..=max`, unbounded above when `max` is `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IndexRange {
    pub min: usize,
    pub max: Option<usize>,
}

impl Default for IndexRange {
    fn default() -> Self {
        IndexRange { min: 1, max: None }
    }
}

impl IndexRange {
    pub fn contains(&self, i: usize) -> bool {
        i >= self.min && self.max.is_none_or(|m| i <= m)
    }

    /// Parses `i>=2`, `i<=5`, `1<=i<=6`, `i>=2,i<=6` (default lower bound 1).
    pub fn parse(text: &str) -> Result<Self> {
        let mut r = IndexRange::default();
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("bad index range `{text}`"));
        for part in t.split(',').filter(|p| !p.is_empty()) {
            let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
            let var = |s: &str| matches!(s, "i" | "n" | "k");
            if let Some((l, rest)) = part.split_once("<=") {
                if let Some((m, u)) = rest.split_once("<=") {
                    if !var(m) {
                        return Err(bad());
                    }
                    r.min = num(l)?;
                    r.max = Some(num(u)?);
                } else if var(l) {
                    r.max = Some(num(rest)?);
                } else if var(rest) {
                    r.min = num(l)?;
                } else {
                    return Err(bad());
                }
            } else if let Some((l, u)) = part.split_once(">=") {
                if var(l) {
                    r.min = num(u)?;
                } else if var(u) {
                    r.max = Some(num(l)?);
                } else {
                    return Err(bad());
                }
            } else {
                return Err(bad());
            }
        }
        Ok(r)
    }
}

/// A single pumped word family `u a^i v : i ∈ range` (or a literal word).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordFamily {
    pub pattern: Pattern,
    pub range: IndexRange,
}

impl WordFamily {
    pub fn literal(w: Word) -> Self {
        WordFamily { pattern: Pattern::literal(w), range: IndexRange::default() }
    }

    /// Parses `xy^ix : i>=1` or a literal word.
    pub fn parse(text: &str) -> Result<Self> {
        let (pat, range) = match text.split_once(':') {
            Some((p, r)) => (p, IndexRange::parse(r)?),
            None => (text, IndexRange::default()),
        };
        Ok(WordFamily { pattern: Pattern::parse(pat)?, range })
    }

    /// Members of length at most `max_len` with their index.
    pub fn expand(&self, max_len: usize) -> Vec<(Option<usize>, Word)> {
        if !self.pattern.is_pumped() {
            return if self.pattern.prefix.len() <= max_len { vec![(None, self.pattern.prefix.clone())] } else { vec![] };
        }
        let mut out = Vec::new();
        let mut i = self.range.min;
        while self.range.contains(i) && self.pattern.len_at(i) <= max_len {
            out.push((Some(i), self.pattern.instantiate(i)));
            i += 1;
        }
        out
    }
}

impl fmt::Display for WordFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pattern)?;
        if self.pattern.is_pumped() {
            match self.range.max {
                Some(m) => write!(f, " : {}<=i<={m}", self.range.min)?,
                None => write!(f, " : i>={}", self.range.min)?,
            }
        }
        Ok(())
    }
}

/// Parses a list of families separated by newlines or semicolons; `#` starts a comment.
pub fn parse_families(text: &str) -> Result<Vec<WordFamily>> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split(';'))
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(WordFamily::parse)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words() {
        let w = Word::parse("xy^3x").unwrap();
        assert_eq!(w.0, b"xyyyx");
        assert_eq!(w.to_string(), "xy^3x");
        assert_eq!(Word::parse("(xy)^2").unwrap().0, b"xyxy");
        assert_eq!(Word::parse("x^12").unwrap().len(), 12);
        assert!(Word::parse("1").unwrap().is_empty());
        assert!(Word::parse("xy^ix").is_err());
        assert!(Word::parse("X").is_err());
        assert_eq!(Word::all_up_to(b"xy", 3).len(), 15);
    }

    #[test]
    fn patterns() {
        let p = Pattern::parse("xy^ix").unwrap();
        assert_eq!((p.prefix.0.as_slice(), p.block.0.as_slice(), p.suffix.0.as_slice()), (&b"x"[..], &b"y"[..], &b"x"[..]));
        assert_eq!(p.instantiate(2).to_string(), "xy^2x");
        assert_eq!(p.to_string(), "xy^ix");
        assert!(Pattern::parse("x^iy^i").is_err());
        assert_eq!(Pattern::parse("x^2y^2").unwrap().prefix.0, b"xxyy");
        let q = Pattern::parse("(xy)^iz").unwrap();
        assert_eq!(q.instantiate(2).0, b"xyxyz");
    }

    #[test]
    fn ranges_and_families() {
        assert_eq!(IndexRange::parse("i>=2").unwrap(), IndexRange { min: 2, max: None });
        assert_eq!(IndexRange::parse("1<=i<=6").unwrap(), IndexRange { min: 1, max: Some(6) });
        assert_eq!(IndexRange::parse("i>=2, i<=4").unwrap(), IndexRange { min: 2, max: Some(4) });
        assert!(IndexRange::parse("j>=2").is_err());
        let f = WordFamily::parse("xy^ix : i>=1").unwrap();
        let e = f.expand(5);
        assert_eq!(e.len(), 3);
        assert_eq!(e[2], (Some(3), Word::parse("xy^3x").unwrap()));
        assert_eq!(f.to_string(), "xy^ix : i>=1");
        let fams = parse_families("x^2y^2; y^2x^2 # finite part\nxy^ix : i>=1").unwrap();
        assert_eq!(fams.len(), 3);
    }
}
