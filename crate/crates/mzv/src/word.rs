//! Binary words and the dictionary between indices and words.
//!
//! A [`Word`] is a finite string over {0, 1}. Words encode iterated
//! integrals: reading the variables from the maximal one down, letter 0
//! stands for the form `dt/t` and letter 1 for `dt/(1-t)`. An admissible
//! index `k = (k1, ..., kn)` corresponds to the word
//! `0^(k1-1) 1 0^(k2-1) 1 ... 0^(kn-1) 1`, and under this encoding the
//! duality `ζ(k) = ζ(k†)` is the reversal-complement of the word.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::index::Index;

/// A word over the alphabet {0, 1}.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<u8>,
}

impl Word {
    /// Builds a word, rejecting letters other than 0 and 1.
    pub fn new(letters: Vec<u8>) -> Result<Self> {
        if letters.iter().any(|&l| l > 1) {
            return Err(Error::BadLetter);
        }
        Ok(Word { letters })
    }

    pub fn empty() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Empty, or starting with 0 and ending with 1. Exactly the words of
    /// admissible indices, i.e. the words of convergent integrals.
    pub fn is_admissible(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (None, _) => true,
            (Some(&first), Some(&last)) => first == 0 && last == 1,
            _ => unreachable!(),
        }
    }

    /// Reversal-complement: reverse the letters and swap 0 ↔ 1. An
    /// involution that maps admissible words to admissible words; on the
    /// index side it is the duality `k ↦ k†` with `ζ(k) = ζ(k†)`.
    pub fn dual(&self) -> Word {
        let letters = self.letters.iter().rev().map(|&l| 1 - l).collect();
        Word { letters }
    }

    /// Decodes an admissible word back to its admissible index: each letter
    /// 1 closes a part whose size is one plus the run of 0s before it.
    pub fn to_index(&self) -> Result<Index> {
        if !self.is_admissible() {
            return Err(Error::NonAdmissibleWord);
        }
        Ok(Self::index_of_letters(&self.letters))
    }

    /// Same decoding without the admissibility gate; only meaningful on
    /// words ending in 1 (every maximal run of 0s must be closed).
    pub(crate) fn index_of_letters(letters: &[u8]) -> Index {
        debug_assert!(letters.last().map_or(true, |&l| l == 1));
        let mut parts = Vec::new();
        let mut zeros = 0u32;
        for &l in letters {
            if l == 0 {
                zeros += 1;
            } else {
                parts.push(zeros + 1);
                zeros = 0;
            }
        }
        Index::new(parts).expect("parts are positive by construction")
    }
}

impl Index {
    /// Encodes an admissible index as its word `0^(k1-1) 1 ... 0^(kn-1) 1`.
    pub fn to_word(&self) -> Result<Word> {
        if !self.is_admissible() {
            return Err(Error::NonAdmissibleIndex);
        }
        Ok(self.word_unchecked())
    }

    /// The same encoding applied to an arbitrary index. The result of a
    /// non-admissible index starts with the letter 1; such words label
    /// vertical diagrams hanging below other vertices, never standalone
    /// integrals.
    pub(crate) fn word_unchecked(&self) -> Word {
        let mut letters = Vec::with_capacity(self.weight() as usize);
        for &p in self.parts() {
            letters.extend(std::iter::repeat(0).take(p as usize - 1));
            letters.push(1);
        }
        Word { letters }
    }

    /// The duality partner `k†` with `ζ(k) = ζ(k†)`: encode as a word,
    /// reverse-complement, decode. Defined for admissible indices only.
    /// Distinct from [`Index::transpose`], which acts on finite sums.
    pub fn dual(&self) -> Result<Index> {
        self.to_word()?.dual().to_index()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w({self})")
    }
}

/// Text form is the bare letter string, e.g. `"00101"`; the empty string is
/// the empty word.
impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut letters = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => letters.push(0),
                '1' => letters.push(1),
                _ => return Err(Error::BadLetter),
            }
        }
        Ok(Word { letters })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(parts: &[u32]) -> Index {
        Index::new(parts.to_vec()).unwrap()
    }

    fn word(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn encoding_examples() {
        assert_eq!(idx(&[2]).to_word().unwrap(), word("01"));
        assert_eq!(idx(&[2, 1]).to_word().unwrap(), word("011"));
        assert_eq!(idx(&[3, 2]).to_word().unwrap(), word("00101"));
        assert_eq!(idx(&[2, 1, 2]).to_word().unwrap(), word("01101"));
        assert_eq!(Index::empty().to_word().unwrap(), Word::empty());
        assert_eq!(idx(&[1, 2]).to_word(), Err(Error::NonAdmissibleIndex));
    }

    #[test]
    fn decoding_examples() {
        assert_eq!(word("01011").to_index().unwrap(), idx(&[2, 2, 1]));
        assert_eq!(word("00101").to_index().unwrap(), idx(&[3, 2]));
        assert_eq!(Word::empty().to_index().unwrap(), Index::empty());
        assert_eq!(word("10").to_index(), Err(Error::NonAdmissibleWord));
        assert_eq!(word("010").to_index(), Err(Error::NonAdmissibleWord));
    }

    #[test]
    fn encode_decode_round_trip() {
        for parts in [vec![2], vec![3, 1], vec![2, 1, 2], vec![4, 1, 1, 2]] {
            let k = idx(&parts);
            assert_eq!(k.to_word().unwrap().to_index().unwrap(), k);
        }
    }

    #[test]
    fn weight_is_length_and_depth_counts_ones() {
        let k = idx(&[3, 1, 2]);
        let w = k.to_word().unwrap();
        assert_eq!(w.len() as u32, k.weight());
        assert_eq!(
            w.letters().iter().filter(|&&l| l == 1).count(),
            k.depth()
        );
    }

    #[test]
    fn duality_examples() {
        assert_eq!(idx(&[2]).dual().unwrap(), idx(&[2]));
        assert_eq!(idx(&[3]).dual().unwrap(), idx(&[2, 1]));
        assert_eq!(idx(&[2, 1]).dual().unwrap(), idx(&[3]));
        assert_eq!(idx(&[3, 2]).dual().unwrap(), idx(&[2, 2, 1]));
        assert_eq!(idx(&[4]).dual().unwrap(), idx(&[2, 1, 1]));
        assert_eq!(Index::empty().dual().unwrap(), Index::empty());
        assert_eq!(idx(&[1, 2]).dual(), Err(Error::NonAdmissibleIndex));
    }

    #[test]
    fn duality_is_an_involution() {
        for parts in [vec![2], vec![2, 3], vec![5, 1, 2], vec![2, 1, 1, 1]] {
            let k = idx(&parts);
            let d = k.dual().unwrap();
            assert_eq!(d.weight(), k.weight());
            assert!(d.is_admissible());
            assert_eq!(d.dual().unwrap(), k);
        }
    }

    #[test]
    fn unchecked_word_of_non_admissible_index() {
        // Used by the family builders: (1, 2) reads as 1 01.
        assert_eq!(idx(&[1, 2]).word_unchecked(), word("101"));
    }

    #[test]
    fn word_text_round_trip_and_errors() {
        for text in ["", "0", "1", "00101", "0110"] {
            assert_eq!(word(text).to_string(), text);
        }
        assert_eq!("0 1".parse::<Word>(), Err(Error::BadLetter));
        assert_eq!("2".parse::<Word>(), Err(Error::BadLetter));
        assert!(word("").is_admissible());
        assert!(word("01").is_admissible());
        assert!(!word("10").is_admissible());
        assert!(!word("010").is_admissible());
    }
}
