//! Loop braid words: parsing and evaluation against a representation.
//!
//! Grammar (whitespace separated, case sensitive):
//!
//! ```text
//! word  := token*
//! token := ("x" | "s") digits ("^-1")?
//! ```
//!
//! `x` stands for the pass-through generator σ and `s` for the exchange
//! generator. Indices are 1-based. Words act left to right: in `w_1 w_2 … w_k`
//! the letter `w_1` acts first, so the word evaluates to `M(w_k) ⋯ M(w_2) M(w_1)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::loop_rep::LBRep;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorKind {
    Sigma,
    S,
}

impl GeneratorKind {
    pub fn symbol(self) -> char {
        match self {
            GeneratorKind::Sigma => 'x',
            GeneratorKind::S => 's',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub kind: GeneratorKind,
    pub index: usize,
    /// `+1` or `-1`.
    pub exponent: i8,
}

impl Letter {
    pub fn sigma(index: usize) -> Self {
        Self {
            kind: GeneratorKind::Sigma,
            index,
            exponent: 1,
        }
    }

    pub fn s(index: usize) -> Self {
        Self {
            kind: GeneratorKind::S,
            index,
            exponent: 1,
        }
    }

    pub fn inverse(self) -> Self {
        Self {
            exponent: -self.exponent,
            ..self
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.symbol(), self.index)?;
        if self.exponent < 0 {
            f.write_str("^-1")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LoopBraidWord {
    pub letters: Vec<Letter>,
}

impl LoopBraidWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        Self { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Reversed letters with flipped exponents.
    pub fn inverse(&self) -> Self {
        Self {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Self { letters }
    }

    pub fn max_index(&self) -> usize {
        self.letters.iter().map(|l| l.index).max().unwrap_or(0)
    }
}

impl fmt::Display for LoopBraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for LoopBraidWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_word(s)
    }
}

fn parse_error(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

pub fn parse_word(text: &str) -> Result<LoopBraidWord> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut letters = Vec::new();
    loop {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos >= bytes.len() {
            break;
        }
        let start = pos;
        let kind = match bytes[pos] {
            b'x' => GeneratorKind::Sigma,
            b's' => GeneratorKind::S,
            _ => {
                let ch = text[pos..].chars().next().unwrap_or('?');
                return Err(parse_error(
                    pos,
                    format!("unknown letter `{ch}`, expected `x` or `s`"),
                ));
            }
        };
        pos += 1;
        let digits_start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if pos == digits_start {
            return Err(parse_error(pos, "missing generator index"));
        }
        let index: usize = text[digits_start..pos]
            .parse()
            .map_err(|_| parse_error(digits_start, "generator index too large"))?;
        if index == 0 {
            return Err(parse_error(digits_start, "generator indices start at 1"));
        }
        let mut exponent = 1;
        if pos < bytes.len() && bytes[pos] == b'^' {
            if text[pos..].starts_with("^-1") {
                exponent = -1;
                pos += 3;
            } else {
                return Err(parse_error(pos, "malformed exponent, expected `^-1`"));
            }
        }
        if pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            return Err(parse_error(
                pos,
                format!("unexpected character after token starting at byte {start}"),
            ));
        }
        letters.push(Letter {
            kind,
            index,
            exponent,
        });
    }
    Ok(LoopBraidWord { letters })
}

/// Matrix of `w`, first letter acting first.
///
/// Inverse letters use the cached inverse generators; an inverse `s` letter
/// uses `s̃` itself when the representation satisfies the symmetric condition.
pub fn evaluate(rep: &LBRep, w: &LoopBraidWord) -> Result<CMatrix> {
    let max = rep.n.saturating_sub(1);
    for l in &w.letters {
        if l.index == 0 || l.index > max {
            return Err(Error::IndexOutOfRange {
                kind: match l.kind {
                    GeneratorKind::Sigma => "sigma",
                    GeneratorKind::S => "s",
                },
                index: l.index,
                max,
            });
        }
    }
    Ok(rep.product(&w.letters))
}
