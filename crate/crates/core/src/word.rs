//! Words over named generators.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub name: String,
    pub exp: i64,
}

/// A word `x₁^{e₁} x₂^{e₂} …` with nonzero exponents and no two adjacent
/// letters sharing a name.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordParseError {
    #[error("bad token `{0}` in word")]
    BadToken(String),
    #[error("bad exponent in `{0}`")]
    BadExponent(String),
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn letter(name: &str, exp: i64) -> Self {
        let mut w = Word::empty();
        w.push(name, exp);
        w
    }

    pub fn from_letters<I, S>(letters: I) -> Self
    where
        I: IntoIterator<Item = (S, i64)>,
        S: AsRef<str>,
    {
        let mut w = Word::empty();
        for (name, exp) in letters {
            w.push(name.as_ref(), exp);
        }
        w
    }

    /// Appends `name^exp`, merging with the last letter and dropping zeros.
    pub fn push(&mut self, name: &str, exp: i64) {
        if exp == 0 {
            return;
        }
        if let Some(last) = self.letters.last_mut() {
            if last.name == name {
                last.exp += exp;
                if last.exp == 0 {
                    self.letters.pop();
                }
                return;
            }
        }
        self.letters.push(Letter {
            name: name.to_string(),
            exp,
        });
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Word length over the generators and their inverses.
    pub fn length(&self) -> u64 {
        self.letters.iter().map(|l| l.exp.unsigned_abs()).sum()
    }

    pub fn inverse(&self) -> Word {
        let mut w = Word::empty();
        for l in self.letters.iter().rev() {
            w.push(&l.name, -l.exp);
        }
        w
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for l in &other.letters {
            w.push(&l.name, l.exp);
        }
        w
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::empty();
        for _ in 0..k.unsigned_abs() {
            w = w.concat(&base);
        }
        w
    }

    /// The word as a sequence of `(name, ±1)` steps.
    pub fn unit_steps(&self) -> impl Iterator<Item = (&str, i64)> + '_ {
        self.letters
            .iter()
            .flat_map(|l| std::iter::repeat_n((l.name.as_str(), l.exp.signum()), l.exp.unsigned_abs() as usize))
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl FromStr for Word {
    type Err = WordParseError;

    /// Accepts tokens such as `h^-5 p h^5`, `h^-5*p*h^5` or `a^{2}`; `1` or the
    /// empty string is the identity.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut w = Word::empty();
        for token in s
            .split(|c: char| c.is_whitespace() || c == '*' || c == '·')
            .filter(|t| !t.is_empty())
        {
            if token == "1" {
                continue;
            }
            let (name, exp) = match token.split_once('^') {
                None => (token, 1),
                Some((name, e)) => {
                    let e = e.trim_start_matches(['{', '(']).trim_end_matches(['}', ')']);
                    let exp: i64 = e.parse().map_err(|_| WordParseError::BadExponent(token.to_string()))?;
                    (name, exp)
                }
            };
            if !is_identifier(name) {
                return Err(WordParseError::BadToken(token.to_string()));
            }
            w.push(name, exp);
        }
        Ok(w)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if l.exp == 1 {
                write!(f, "{}", l.name)?;
            } else {
                write!(f, "{}^{}", l.name, l.exp)?;
            }
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let w: Word = "h^-5 p h^5".parse().unwrap();
        assert_eq!(w.to_string(), "h^-5 p h^5");
        assert_eq!(w.length(), 11);
        let same: Word = "h^-1*h^-4*p*h^{5}".parse().unwrap();
        assert_eq!(w, same);
        assert_eq!("1".parse::<Word>().unwrap(), Word::empty());
        assert!("h^x".parse::<Word>().is_err());
        assert!("3a".parse::<Word>().is_err());
    }

    #[test]
    fn free_reduction_on_push() {
        let w: Word = "a b b^-1 a^-1".parse().unwrap();
        assert!(w.is_empty());
        let u: Word = "a b^2 h".parse().unwrap();
        assert!(u.concat(&u.inverse()).is_empty());
        assert_eq!(u.pow(2).length(), 8);
    }
}
