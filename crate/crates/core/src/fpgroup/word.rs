use std::fmt;

use crate::error::{Error, Result};

/// A generator or its inverse. Stored as a nonzero signed index: `+(g+1)` for
/// generator `g`, `-(g+1)` for its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(i32);

impl Letter {
    pub fn gen(index: usize) -> Letter {
        Letter(index as i32 + 1)
    }

    pub fn inv_gen(index: usize) -> Letter {
        Letter(-(index as i32) - 1)
    }

    pub fn index(self) -> usize {
        (self.0.unsigned_abs() - 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    /// Column of this letter in a coset table with `2 * generators` columns.
    pub fn column(self) -> usize {
        2 * self.index() + usize::from(self.is_inverse())
    }

    pub fn from_column(col: usize) -> Letter {
        if col.is_multiple_of(2) {
            Letter::gen(col / 2)
        } else {
            Letter::inv_gen(col / 2)
        }
    }
}

/// A word over a set of generators. Not necessarily freely reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn new() -> Word {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Free reduction (cancels adjacent `x x^-1`).
    pub fn reduced(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Free and cyclic reduction.
    pub fn cyclically_reduced(&self) -> Word {
        let mut w = self.reduced().0;
        while w.len() >= 2 && w[0] == w[w.len() - 1].inverse() {
            w.pop();
            w.remove(0);
        }
        Word(w)
    }

    /// Exponent sum of each generator, the row of the relation matrix of the
    /// abelianization.
    pub fn exponent_sums(&self, generators: usize) -> Vec<i64> {
        let mut sums = vec![0i64; generators];
        for l in &self.0 {
            sums[l.index()] += if l.is_inverse() { -1 } else { 1 };
        }
        sums
    }

    /// Renders the word with the given generator names in the
    /// `a^-1 b a b^-2` style accepted by [`Word::parse`].
    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        WordDisplay { word: self, names }
    }

    /// Parses whitespace-separated signed symbols such as `a^-1 b a b^-2`.
    /// A bare `1` or the empty string is the empty word.
    pub fn parse(text: &str, names: &[String]) -> Result<Word> {
        let mut out = Word::new();
        for token in text.split_whitespace() {
            if token == "1" {
                continue;
            }
            let (sym, exp) = match token.split_once('^') {
                Some((s, e)) => {
                    let e: i64 = e
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{token}`")))?;
                    (s, e)
                }
                None => (token, 1),
            };
            let index = names
                .iter()
                .position(|n| n == sym)
                .ok_or_else(|| Error::Parse(format!("unknown generator `{sym}`")))?;
            let letter = if exp < 0 {
                Letter::inv_gen(index)
            } else {
                Letter::gen(index)
            };
            for _ in 0..exp.unsigned_abs() {
                out.push(letter);
            }
        }
        Ok(out)
    }
}

struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters = self.word.letters();
        if letters.is_empty() {
            return write!(f, "1");
        }
        let mut i = 0;
        let mut first = true;
        while i < letters.len() {
            let l = letters[i];
            let mut run = 1;
            while i + run < letters.len() && letters[i + run] == l {
                run += 1;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let name = &self.names[l.index()];
            let exp = if l.is_inverse() { -(run as i64) } else { run as i64 };
            if exp == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{exp}")?;
            }
            i += run;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: &[&str]) -> Vec<String> {
        n.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parse_and_display_round_trip() {
        let n = names(&["a", "b"]);
        let w = Word::parse("a^-1 b a b^-2", &n).unwrap();
        assert_eq!(w.len(), 5);
        assert_eq!(w.display(&n).to_string(), "a^-1 b a b^-2");
        assert_eq!(Word::parse("1", &n).unwrap(), Word::new());
    }

    #[test]
    fn unknown_symbol_is_rejected() {
        let n = names(&["a"]);
        assert!(Word::parse("a z", &n).is_err());
        assert!(Word::parse("a^x", &n).is_err());
    }

    #[test]
    fn reduction() {
        let n = names(&["a", "b"]);
        let w = Word::parse("b^-1 a b b^-1 a^-1 b", &n).unwrap();
        assert!(w.reduced().is_empty());
        let w = Word::parse("b^-1 a b a b", &n).unwrap();
        assert_eq!(w.cyclically_reduced().display(&n).to_string(), "a b a");
        let w = Word::parse("a b^-1 a b", &n).unwrap();
        assert_eq!(w.exponent_sums(2), vec![2, 0]);
    }
}
