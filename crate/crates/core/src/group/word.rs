use std::fmt;

use crate::error::{Error, Result};

/// Freely reduced word over generators `0..rank`.
///
/// Letter `k > 0` is generator `k − 1`; letter `−k` is its inverse.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<i32>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn generator(index: usize) -> Self {
        Word(vec![index as i32 + 1])
    }

    /// Reduces an arbitrary letter sequence.
    pub fn from_letters(letters: impl IntoIterator<Item = i32>) -> Self {
        let mut out: Vec<i32> = Vec::new();
        for l in letters {
            assert!(l != 0, "letter 0 is not a generator");
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Parses `a`, `b`, … as generators and `A`, `B`, … as inverses; `1` or
    /// the empty string is the identity.
    pub fn parse(text: &str, rank: usize) -> Result<Self> {
        let text = text.trim();
        if text == "1" {
            return Ok(Word::identity());
        }
        let mut letters = Vec::with_capacity(text.len());
        for ch in text.chars() {
            let (index, sign) = match ch {
                'a'..='z' => (ch as u32 - 'a' as u32, 1),
                'A'..='Z' => (ch as u32 - 'A' as u32, -1),
                _ => return Err(Error::Parse(format!("invalid letter {ch:?} in word {text:?}"))),
            };
            if index as usize >= rank {
                return Err(Error::Parse(format!("letter {ch:?} exceeds rank {rank}")));
            }
            letters.push(sign * (index as i32 + 1));
        }
        Ok(Word::from_letters(letters))
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest generator index used, plus one.
    pub fn max_generator(&self) -> usize {
        self.0.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &Word) -> Word {
        let overlap = self
            .0
            .iter()
            .rev()
            .zip(&other.0)
            .take_while(|(x, y)| **x == -**y)
            .count();
        let mut out = self.0[..self.0.len() - overlap].to_vec();
        out.extend_from_slice(&other.0[overlap..]);
        Word(out)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| -l).collect())
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Vec::with_capacity(base.0.len() * n.unsigned_abs() as usize);
        for _ in 0..n.unsigned_abs() {
            append_reduced(&mut out, base.0.iter().copied());
        }
        Word(out)
    }

    /// Replaces generator `i` by `images[i]` and reduces.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Vec::new();
        for &l in &self.0 {
            let img = &images[l.unsigned_abs() as usize - 1].0;
            if l > 0 {
                append_reduced(&mut out, img.iter().copied());
            } else {
                append_reduced(&mut out, img.iter().rev().map(|x| -x));
            }
        }
        Word(out)
    }
}

fn append_reduced(out: &mut Vec<i32>, letters: impl IntoIterator<Item = i32>) {
    for l in letters {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for &l in &self.0 {
            let i = l.unsigned_abs() - 1;
            let ch = if i < 26 {
                let base = if l > 0 { b'a' } else { b'A' };
                (base + i as u8) as char
            } else {
                return write!(f, "<{l}>");
            };
            write!(f, "{ch}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_parse() {
        let ab = Word::parse("ab", 2).unwrap();
        let ba = Word::parse("Ba", 2).unwrap();
        assert_eq!(ab.mul(&ba).to_string(), "aa");
        assert_eq!(Word::parse("aAbB", 2).unwrap(), Word::identity());
        assert_eq!(Word::parse("abA", 2).unwrap().len(), 3);
        assert!(Word::parse("c", 2).is_err());
        assert_eq!(ab.mul(&ab.inverse()), Word::identity());
    }

    #[test]
    fn fibonacci_substitution() {
        let images = [Word::parse("ab", 2).unwrap(), Word::parse("a", 2).unwrap()];
        let sq: Vec<Word> = images.iter().map(|w| w.substitute(&images)).collect();
        assert_eq!(sq[0].to_string(), "aba");
        assert_eq!(sq[1].to_string(), "ab");
    }
}
