//! Cyclic side words and their canonical forms.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A cyclic word of side indices (stored 0-based; parsed and displayed
/// 1-based as in the text interface "1,2,1,3").
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Itinerary {
    word: Vec<usize>,
}

impl Itinerary {
    /// Build from 0-based side indices. Consecutive letters (cyclically)
    /// must differ: a trajectory cannot hit the same side twice in a row.
    pub fn new(word: Vec<usize>) -> Result<Self> {
        if word.len() < 2 {
            return Err(Error::IllegalItinerary {
                reason: "itinerary needs at least two letters".into(),
            });
        }
        for k in 0..word.len() {
            if word[k] == word[(k + 1) % word.len()] {
                return Err(Error::IllegalItinerary {
                    reason: format!("letters {} and {} repeat a side", k, (k + 1) % word.len()),
                });
            }
        }
        Ok(Self { word })
    }

    /// Build from 1-based side labels.
    pub fn from_labels(labels: &[usize]) -> Result<Self> {
        if labels.iter().any(|&l| l == 0) {
            return Err(Error::ItineraryParse("side labels are 1-based".into()));
        }
        Self::new(labels.iter().map(|&l| l - 1).collect())
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn period(&self) -> usize {
        self.word.len()
    }

    pub fn is_even(&self) -> bool {
        self.word.len() % 2 == 0
    }

    /// Letter at cyclic position `k`.
    pub fn letter(&self, k: usize) -> usize {
        self.word[k % self.word.len()]
    }

    /// Lexicographically minimal rotation.
    pub fn canonical(&self) -> Itinerary {
        let p = self.word.len();
        let mut best = 0;
        for start in 1..p {
            for k in 0..p {
                let a = self.word[(start + k) % p];
                let b = self.word[(best + k) % p];
                if a != b {
                    if a < b {
                        best = start;
                    }
                    break;
                }
            }
        }
        let word = (0..p).map(|k| self.word[(best + k) % p]).collect();
        Itinerary { word }
    }

    /// The itinerary of the time-reversed cylinder.
    pub fn reversed(&self) -> Itinerary {
        let mut word = self.word.clone();
        word.reverse();
        Itinerary { word }
    }

    /// Shortest word `u` with `self = u^m`, together with `m`.
    pub fn primitive_root(&self) -> (Itinerary, usize) {
        let p = self.word.len();
        for len in 1..=p / 2 {
            if p % len != 0 {
                continue;
            }
            if (0..p).all(|k| self.word[k] == self.word[k % len]) {
                return (
                    Itinerary {
                        word: self.word[..len].to_vec(),
                    },
                    p / len,
                );
            }
        }
        (self.clone(), 1)
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive_root().1 == 1
    }

    /// Largest side label referenced (1-based), for range checks against a
    /// polygon.
    pub fn max_label(&self) -> usize {
        self.word.iter().copied().max().unwrap_or(0) + 1
    }
}

impl fmt::Display for Itinerary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, side) in self.word.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", side + 1)?;
        }
        Ok(())
    }
}

impl FromStr for Itinerary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let labels: Vec<usize> = s
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::ItineraryParse(format!("`{}`: {}", tok.trim(), e)))
            })
            .collect::<Result<_>>()?;
        Self::from_labels(&labels)
    }
}

/// All primitive cyclic words (one representative per rotation class) over
/// sides `0..d` with exact period `p` and no equal consecutive letters.
pub fn primitive_words(d: usize, p: usize) -> Vec<Itinerary> {
    let mut out = Vec::new();
    if p < 2 || d < 2 {
        return out;
    }
    let mut word = vec![0usize; p];
    for first in 0..d {
        word[0] = first;
        enumerate(d, p, 1, &mut word, &mut out);
    }
    return out;

    fn enumerate(d: usize, p: usize, k: usize, word: &mut Vec<usize>, out: &mut Vec<Itinerary>) {
        if k == p {
            if word[p - 1] == word[0] {
                return;
            }
            let it = Itinerary { word: word.clone() };
            if it.is_primitive() && it.canonical() == it {
                out.push(it);
            }
            return;
        }
        for letter in 0..d {
            if letter == word[k - 1] {
                continue;
            }
            word[k] = letter;
            enumerate(d, p, k + 1, word, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_displays_one_based() {
        let it: Itinerary = "1,2,1,3".parse().unwrap();
        assert_eq!(it.word(), &[0, 1, 0, 2]);
        assert_eq!(it.to_string(), "1,2,1,3");
        assert!("1,1,2".parse::<Itinerary>().is_err());
        assert!("1".parse::<Itinerary>().is_err());
        assert!("0,1".parse::<Itinerary>().is_err());
    }

    #[test]
    fn canonical_is_minimal_rotation() {
        let it: Itinerary = "3,1,2,1".parse().unwrap();
        assert_eq!(it.canonical().to_string(), "1,2,1,3");
        // reversal of 1,2,1,3 is cyclically the same word
        let rev = it.reversed().canonical();
        assert_eq!(rev.to_string(), "1,2,1,3");
    }

    #[test]
    fn primitive_root_detects_powers() {
        let it: Itinerary = "1,3,1,3".parse().unwrap();
        let (root, m) = it.primitive_root();
        assert_eq!(root.to_string(), "1,3");
        assert_eq!(m, 2);
        assert!(!it.is_primitive());
        assert!("1,2,3".parse::<Itinerary>().unwrap().is_primitive());
    }

    #[test]
    fn primitive_word_enumeration_counts() {
        // Over 2 sides only the ping-pong word exists.
        assert_eq!(primitive_words(2, 2).len(), 1);
        // d=4, p=2: pairs {i,j}: C(4,2) = 6 words.
        assert_eq!(primitive_words(4, 2).len(), 6);
        for it in primitive_words(4, 6) {
            assert!(it.is_primitive());
            assert_eq!(it.canonical(), it);
            assert_eq!(it.period(), 6);
        }
    }
}
