//! Words in the braid group `B_n`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// One elementary generator `b_{i, i+1}` or its inverse; `index` is the
/// 1-based strand `i` with `1 <= i <= strands - 1`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BraidLetter {
    pub index: usize,
    pub inverse: bool,
}

impl BraidLetter {
    pub fn pos(index: usize) -> Self {
        BraidLetter { index, inverse: false }
    }

    pub fn neg(index: usize) -> Self {
        BraidLetter { index, inverse: true }
    }

    pub fn inverted(self) -> Self {
        BraidLetter { index: self.index, inverse: !self.inverse }
    }
}

/// A braid word; letters act leftmost first.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BraidWord {
    pub strands: usize,
    pub letters: Vec<BraidLetter>,
}

impl fmt::Debug for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BraidWord[{}]({})", self.strands, self.render())
    }
}

impl BraidWord {
    pub fn identity(strands: usize) -> Self {
        BraidWord { strands, letters: Vec::new() }
    }

    pub fn from_letters(strands: usize, letters: Vec<BraidLetter>) -> Result<Self> {
        for l in &letters {
            if l.index == 0 || l.index >= strands {
                return Err(Error::invalid(format!(
                    "letter index {} out of range for {} strands",
                    l.index, strands
                )));
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn push(&mut self, letter: BraidLetter) {
        debug_assert!(letter.index >= 1 && letter.index < self.strands);
        self.letters.push(letter);
    }

    pub fn concat(&self, other: &BraidWord) -> Result<Self> {
        if self.strands != other.strands {
            return Err(Error::invalid("concatenating words on different strand counts"));
        }
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().copied());
        Ok(BraidWord { strands: self.strands, letters })
    }

    /// The formal inverse: reversed order, inverted letters.
    pub fn inverse(&self) -> Self {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|l| l.inverted()).collect(),
        }
    }

    pub fn repeat(&self, times: usize) -> Self {
        let mut letters = Vec::with_capacity(self.letters.len() * times);
        for _ in 0..times {
            letters.extend(self.letters.iter().copied());
        }
        BraidWord { strands: self.strands, letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Render in the CLI grammar: `b2 b1 B3` with capitals for inverses.
    pub fn render(&self) -> String {
        self.letters
            .iter()
            .map(|l| format!("{}{}", if l.inverse { "B" } else { "b" }, l.index))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parse the CLI grammar; whitespace-separated letters, leftmost first.
    pub fn parse(strands: usize, s: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            let (inverse, rest) = match tok.chars().next() {
                Some('b') => (false, &tok[1..]),
                Some('B') => (true, &tok[1..]),
                _ => return Err(Error::Parse(format!("bad braid letter: {tok}"))),
            };
            let index: usize = rest
                .parse()
                .map_err(|_| Error::Parse(format!("bad braid letter: {tok}")))?;
            letters.push(BraidLetter { index, inverse });
        }
        BraidWord::from_letters(strands, letters)
    }

    /// The underlying permutation of strand endpoints (letters as adjacent
    /// transpositions, leftmost applied first).
    pub fn permutation(&self) -> Vec<usize> {
        let mut tau: Vec<usize> = (0..self.strands).collect();
        for l in &self.letters {
            tau.swap(l.index - 1, l.index);
        }
        tau
    }
}

/// The full-rotation (central) braid `(b_{12} b_{23} ... b_{n-1,n})^n`.
pub fn central_braid(n: usize) -> BraidWord {
    let mut base = BraidWord::identity(n);
    for i in 1..n {
        base.push(BraidLetter::pos(i));
    }
    base.repeat(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        let w = BraidWord::parse(4, "b2 b1 B3").unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w.render(), "b2 b1 B3");
        assert!(w.letters[2].inverse);
        assert!(BraidWord::parse(3, "b3").is_err());
        assert!(BraidWord::parse(3, "x1").is_err());
    }

    #[test]
    fn inverse_reverses_and_flips() {
        let w = BraidWord::parse(4, "b1 b2 B3").unwrap();
        let inv = w.inverse();
        assert_eq!(inv.render(), "b3 B2 B1");
        let id = w.concat(&inv).unwrap();
        // free reduction is not performed, but the permutation is trivial
        assert_eq!(id.permutation(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn central_braid_shape() {
        let c = central_braid(2);
        assert_eq!(c.render(), "b1 b1");
        assert_eq!(central_braid(3).len(), 6);
        // full rotation is a pure braid: trivial permutation
        assert_eq!(central_braid(5).permutation(), vec![0, 1, 2, 3, 4]);
    }
}
