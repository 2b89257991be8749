//! Words over a finite alphabet and the cylinder metric.
//!
//! Symbols are small integers rendered as digits (`0`-`9`, then `a`-`z`), so a
//! word prints as a digit string like `"0110"` or `"021"`. Distances are exact
//! rationals: two distinct points at distance 1/(m+1) where m is the first
//! index of disagreement.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported alphabet (symbols render as 0-9a-z).
pub const MAX_ALPHABET: u8 = 36;

/// Exact rational distance value.
pub type Rat = num_rational::Ratio<i64>;

/// A single symbol. Alphabet membership is checked where a spec is in scope.
pub type Symbol = u8;

/// A finite word; the empty word is allowed and denotes the whole space
/// when used as a cylinder base.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    pub fn pop(&mut self) {
        self.0.pop();
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    /// Drop the first `n` symbols (the n-fold shift of a finite window).
    pub fn shifted(&self, n: usize) -> Word {
        Word(self.0[n.min(self.0.len())..].to_vec())
    }

    pub fn truncated(&self, len: usize) -> Word {
        Word(self.0[..len.min(self.0.len())].to_vec())
    }

    pub fn starts_with(&self, prefix: &Word) -> bool {
        self.0.starts_with(&prefix.0)
    }

    pub fn ends_with(&self, suffix: &Word) -> bool {
        self.0.ends_with(&suffix.0)
    }

    /// Remove every `2`; the projection that characterizes tilde languages.
    pub fn delete_twos(&self) -> Word {
        Word(self.0.iter().copied().filter(|&s| s != 2).collect())
    }

    /// w^[n]: n-fold repetition.
    pub fn power(&self, n: usize) -> Word {
        let mut v = Vec::with_capacity(self.0.len() * n);
        for _ in 0..n {
            v.extend_from_slice(&self.0);
        }
        Word(v)
    }

    /// Length-`len` prefix of the periodic extension w^[∞].
    pub fn periodic_prefix(&self, len: usize) -> Word {
        assert!(!self.0.is_empty(), "periodic extension of the empty word");
        Word((0..len).map(|i| self.0[i % self.0.len()]).collect())
    }

    pub fn rotated(&self, r: usize) -> Word {
        let n = self.0.len();
        Word((0..n).map(|i| self.0[(i + r) % n]).collect())
    }

    /// True when the word is not a power of a strictly shorter word.
    pub fn is_primitive(&self) -> bool {
        let n = self.0.len();
        for d in 1..n {
            if n.is_multiple_of(d) && (0..n).all(|i| self.0[i] == self.0[i % d]) {
                return false;
            }
        }
        true
    }

    /// Lexicographically least rotation — the canonical representative of the
    /// rotation class.
    pub fn canonical_rotation(&self) -> Word {
        (0..self.0.len()).map(|r| self.rotated(r)).min().unwrap_or_else(Word::empty)
    }

    /// All start indices at which `pattern` occurs.
    pub fn occurrences(&self, pattern: &Word) -> Vec<usize> {
        if pattern.is_empty() || pattern.len() > self.len() {
            return Vec::new();
        }
        (0..=self.len() - pattern.len())
            .filter(|&i| self.0[i..i + pattern.len()] == pattern.0[..])
            .collect()
    }

    pub fn max_symbol(&self) -> Option<Symbol> {
        self.0.iter().copied().max()
    }
}

fn symbol_char(s: Symbol) -> char {
    char::from_digit(s as u32, MAX_ALPHABET as u32).expect("symbol out of range")
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.0 {
            write!(f, "{}", symbol_char(s))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let mut v = Vec::with_capacity(s.len());
        for (i, c) in s.chars().enumerate() {
            let d = c
                .to_digit(MAX_ALPHABET as u32)
                .ok_or_else(|| Error::parse(i, format!("invalid symbol {c:?}")))?;
            v.push(d as Symbol);
        }
        Ok(Word(v))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

/// Cylinder metric on equal-length windows: 0 if equal, else 1/(m+1) where m
/// is the first index of disagreement.
pub fn metric_distance(x: &Word, y: &Word) -> Result<Rat> {
    if x.len() != y.len() {
        return Err(Error::InvalidInput(format!(
            "metric compares equal-length words ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    if x.is_empty() {
        return Err(Error::InvalidInput("metric on empty words".into()));
    }
    match x.symbols().iter().zip(y.symbols()).position(|(a, b)| a != b) {
        None => Ok(Rat::from_integer(0)),
        Some(m) => Ok(Rat::new(1, m as i64 + 1)),
    }
}

/// Render a rational as `"p/q"` (integers without the slash).
pub fn rat_string(r: Rat) -> String {
    r.to_string()
}

/// serde helper: emit rationals as `"p/q"` strings, never floats.
pub fn serialize_rat<S: Serializer>(r: &Rat, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.collect_str(r)
}

/// One application of the shift to a finite window: drop the first symbol.
pub fn shift_word(w: &Word) -> Result<Word> {
    if w.is_empty() {
        return Err(Error::InvalidInput("cannot shift the empty word".into()));
    }
    Ok(w.shifted(1))
}
