//! Shift-space descriptions and their textual grammar.
//!
//! ```text
//! full:k=2
//! sft:k=2;forbid=11,101
//! subst:0->01;1->10;seed=0
//! tilde(subst:0->01;1->10;seed=0)
//! ```
//!
//! Parse errors carry the byte offset of the offending input.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::shiftspace::word::{Symbol, Word, MAX_ALPHABET};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ShiftSpaceSpec {
    /// Every word over k symbols is admissible.
    Full { k: u8 },
    /// Words avoiding a finite set of forbidden factors.
    FiniteType { k: u8, forbidden: Vec<Word> },
    /// Factors of the substitution fixed point grown from `seed`.
    Substitution { rules: Vec<Word>, seed: Symbol },
    /// Ternary extension of a binary space: admissible iff the word with all
    /// 2s deleted is admissible inside.
    TildeExtension { inner: Box<ShiftSpaceSpec> },
}

impl ShiftSpaceSpec {
    pub fn full(k: u8) -> Result<Self> {
        let spec = ShiftSpaceSpec::Full { k };
        spec.validate()?;
        Ok(spec)
    }

    pub fn finite_type(k: u8, mut forbidden: Vec<Word>) -> Result<Self> {
        forbidden.sort_by_key(|w| (w.len(), w.clone()));
        forbidden.dedup();
        let spec = ShiftSpaceSpec::FiniteType { k, forbidden };
        spec.validate()?;
        Ok(spec)
    }

    pub fn substitution(rules: Vec<Word>, seed: Symbol) -> Result<Self> {
        let spec = ShiftSpaceSpec::Substitution { rules, seed };
        spec.validate()?;
        Ok(spec)
    }

    pub fn tilde(inner: ShiftSpaceSpec) -> Result<Self> {
        let spec = ShiftSpaceSpec::TildeExtension { inner: Box::new(inner) };
        spec.validate()?;
        Ok(spec)
    }

    /// The Thue-Morse substitution 0 -> 01, 1 -> 10 grown from 0.
    pub fn thue_morse() -> Self {
        ShiftSpaceSpec::Substitution {
            rules: vec![Word::new(vec![0, 1]), Word::new(vec![1, 0])],
            seed: 0,
        }
    }

    /// The Chacon substitution 0 -> 0010, 1 -> 1 grown from 0.
    pub fn chacon() -> Self {
        ShiftSpaceSpec::Substitution {
            rules: vec![Word::new(vec![0, 0, 1, 0]), Word::new(vec![1])],
            seed: 0,
        }
    }

    /// Alphabet size k.
    pub fn alphabet_size(&self) -> u8 {
        match self {
            ShiftSpaceSpec::Full { k } => *k,
            ShiftSpaceSpec::FiniteType { k, .. } => *k,
            ShiftSpaceSpec::Substitution { rules, .. } => rules.len() as u8,
            ShiftSpaceSpec::TildeExtension { .. } => 3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ShiftSpaceSpec::Full { k } => check_k(*k),
            ShiftSpaceSpec::FiniteType { k, forbidden } => {
                check_k(*k)?;
                for w in forbidden {
                    if w.is_empty() {
                        return Err(Error::InvalidInput("empty forbidden word".into()));
                    }
                    if w.max_symbol().unwrap() >= *k {
                        return Err(Error::InvalidInput(format!(
                            "forbidden word {w} uses a symbol outside the {k}-letter alphabet"
                        )));
                    }
                }
                Ok(())
            }
            ShiftSpaceSpec::Substitution { rules, seed } => {
                let k = rules.len();
                if !(2..=MAX_ALPHABET as usize).contains(&k) {
                    return Err(Error::InvalidInput(format!(
                        "substitution must have between 2 and {MAX_ALPHABET} rules, got {k}"
                    )));
                }
                if *seed as usize >= k {
                    return Err(Error::InvalidInput(format!("seed {seed} has no rule")));
                }
                for (s, img) in rules.iter().enumerate() {
                    if img.is_empty() {
                        return Err(Error::InvalidInput(format!("rule for {s} is erasing")));
                    }
                    if img.max_symbol().unwrap() as usize >= k {
                        return Err(Error::InvalidInput(format!(
                            "rule image {img} uses a symbol outside the {k}-letter alphabet"
                        )));
                    }
                }
                if rules[*seed as usize].symbols()[0] != *seed {
                    return Err(Error::InvalidInput(format!(
                        "rule for seed {seed} must start with {seed} so iteration converges"
                    )));
                }
                Ok(())
            }
            ShiftSpaceSpec::TildeExtension { inner } => {
                inner.validate()?;
                if inner.alphabet_size() != 2 {
                    return Err(Error::InvalidInput(
                        "tilde extension requires a binary inner space".into(),
                    ));
                }
                if matches!(**inner, ShiftSpaceSpec::TildeExtension { .. }) {
                    return Err(Error::InvalidInput("tilde extension cannot nest".into()));
                }
                Ok(())
            }
        }
    }
}

fn check_k(k: u8) -> Result<()> {
    if (2..=MAX_ALPHABET).contains(&k) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("alphabet size {k} out of range 2..={MAX_ALPHABET}")))
    }
}

impl fmt::Display for ShiftSpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShiftSpaceSpec::Full { k } => write!(f, "full:k={k}"),
            ShiftSpaceSpec::FiniteType { k, forbidden } => {
                write!(f, "sft:k={k};forbid=")?;
                for (i, w) in forbidden.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{w}")?;
                }
                Ok(())
            }
            ShiftSpaceSpec::Substitution { rules, seed } => {
                write!(f, "subst:")?;
                for (s, img) in rules.iter().enumerate() {
                    write!(f, "{}->{img};", Word::new(vec![s as Symbol]))?;
                }
                write!(f, "seed={}", Word::new(vec![*seed]))
            }
            ShiftSpaceSpec::TildeExtension { inner } => write!(f, "tilde({inner})"),
        }
    }
}

struct Cursor<'a> {
    input: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.input[self.pos..]
    }

    fn eat(&mut self, lit: &str) -> Result<()> {
        if self.rest().starts_with(lit) {
            self.pos += lit.len();
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected {lit:?}")))
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let end = self
            .rest()
            .char_indices()
            .find(|&(_, c)| !pred(c))
            .map_or(self.input.len(), |(i, _)| self.pos + i);
        let s = &self.input[self.pos..end];
        self.pos = end;
        s
    }

    fn word(&mut self) -> Result<Word> {
        let at = self.pos;
        let s = self.take_while(|c| c.is_ascii_alphanumeric());
        if s.is_empty() {
            return Err(Error::parse(at, "expected a word".to_string()));
        }
        s.parse().map_err(|e| match e {
            Error::Parse { offset, msg } => Error::parse(at + offset, msg),
            other => other,
        })
    }

    fn symbol(&mut self) -> Result<Symbol> {
        let w = self.word()?;
        if w.len() != 1 {
            return Err(Error::parse(self.pos, "expected a single symbol".to_string()));
        }
        Ok(w.symbols()[0])
    }

    fn int(&mut self) -> Result<u8> {
        let at = self.pos;
        let s = self.take_while(|c| c.is_ascii_digit());
        s.parse().map_err(|_| Error::parse(at, "expected a small integer".to_string()))
    }

    fn spec(&mut self) -> Result<ShiftSpaceSpec> {
        let at = self.pos;
        if self.rest().starts_with("full:") {
            self.eat("full:k=")?;
            let k = self.int()?;
            ShiftSpaceSpec::full(k)
        } else if self.rest().starts_with("sft:") {
            self.eat("sft:k=")?;
            let k = self.int()?;
            self.eat(";forbid=")?;
            let mut forbidden = vec![self.word()?];
            while self.rest().starts_with(',') {
                self.eat(",")?;
                forbidden.push(self.word()?);
            }
            ShiftSpaceSpec::finite_type(k, forbidden)
        } else if self.rest().starts_with("subst:") {
            self.eat("subst:")?;
            let mut rules: Vec<(Symbol, Word)> = Vec::new();
            loop {
                if self.rest().starts_with("seed=") {
                    break;
                }
                let s = self.symbol()?;
                self.eat("->")?;
                let img = self.word()?;
                self.eat(";")?;
                rules.push((s, img));
            }
            self.eat("seed=")?;
            let seed = self.symbol()?;
            let k = rules.len();
            let mut images = vec![None; k];
            for (s, img) in rules {
                let slot = images
                    .get_mut(s as usize)
                    .ok_or_else(|| Error::parse(at, format!("rule symbols must be 0..{k}")))?;
                if slot.replace(img).is_some() {
                    return Err(Error::parse(at, format!("duplicate rule for symbol {s}")));
                }
            }
            let rules = images
                .into_iter()
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::parse(at, format!("missing a rule among 0..{k}")))?;
            ShiftSpaceSpec::substitution(rules, seed)
        } else if self.rest().starts_with("tilde(") {
            self.eat("tilde(")?;
            let inner = self.spec()?;
            self.eat(")")?;
            ShiftSpaceSpec::tilde(inner)
        } else {
            Err(Error::parse(at, "expected full:, sft:, subst:, or tilde(".to_string()))
        }
    }
}

impl FromStr for ShiftSpaceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut cur = Cursor { input: s, pos: 0 };
        let spec = cur.spec()?;
        if !cur.rest().is_empty() {
            return Err(Error::parse(cur.pos, "trailing input".to_string()));
        }
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round_trip(s: &str) {
        let spec: ShiftSpaceSpec = s.parse().unwrap();
        assert_eq!(spec.to_string(), s);
        assert_eq!(spec.to_string().parse::<ShiftSpaceSpec>().unwrap(), spec);
    }

    #[test]
    fn grammar_round_trips() {
        round_trip("full:k=2");
        round_trip("full:k=10");
        round_trip("sft:k=2;forbid=11");
        round_trip("sft:k=2;forbid=11,101");
        round_trip("subst:0->01;1->10;seed=0");
        round_trip("subst:0->0010;1->1;seed=0");
        round_trip("tilde(subst:0->01;1->10;seed=0)");
        round_trip("tilde(sft:k=2;forbid=11)");
    }

    #[test]
    fn named_constructors_match_grammar() {
        assert_eq!(ShiftSpaceSpec::thue_morse().to_string(), "subst:0->01;1->10;seed=0");
        assert_eq!(ShiftSpaceSpec::chacon().to_string(), "subst:0->0010;1->1;seed=0");
        ShiftSpaceSpec::thue_morse().validate().unwrap();
        ShiftSpaceSpec::chacon().validate().unwrap();
    }

    #[test]
    fn parse_errors_carry_offsets() {
        let err = "full:k=".parse::<ShiftSpaceSpec>().unwrap_err();
        match err {
            Error::Parse { offset, .. } => assert_eq!(offset, 7),
            other => panic!("{other:?}"),
        }
        let err = "sft:k=2;forbid=1x1".parse::<ShiftSpaceSpec>().unwrap_err();
        match err {
            // 'x' parses as symbol 33; validation rejects it for k=2
            Error::InvalidInput(_) => {}
            other => panic!("{other:?}"),
        }
        assert!("tilde(full:k=2".parse::<ShiftSpaceSpec>().is_err());
        assert!("full:k=2 ".parse::<ShiftSpaceSpec>().is_err());
        assert!("banana".parse::<ShiftSpaceSpec>().is_err());
    }

    #[test]
    fn validation_rejects_bad_specs() {
        assert!(ShiftSpaceSpec::full(1).is_err());
        assert!(ShiftSpaceSpec::full(37).is_err());
        assert!("sft:k=2;forbid=12".parse::<ShiftSpaceSpec>().is_err());
        // erasing rule images are not representable in the grammar, so build directly
        assert!(ShiftSpaceSpec::substitution(vec![Word::empty(), Word::new(vec![1])], 0).is_err());
        // seed rule must start with the seed
        assert!(ShiftSpaceSpec::substitution(
            vec![Word::new(vec![1, 0]), Word::new(vec![0, 1])],
            0
        )
        .is_err());
        // tilde needs a binary inner space
        assert!("tilde(full:k=3)".parse::<ShiftSpaceSpec>().is_err());
        assert!("tilde(tilde(full:k=2))".parse::<ShiftSpaceSpec>().is_err());
    }
}
