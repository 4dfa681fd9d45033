//! Finite automata over tree addresses and over convolutions of address
//! tuples.
//!
//! The address alphabet for `n` function symbols has the `2n + 1` letters
//! `0` (the constant successor `f_0`), `1..n` (the successors `f_i`) and
//! `b1..bn` (the successors tagged `f_i^-1`). [`RegularSet`] is a regular
//! set of addresses. [`SyncAutomaton`] recognizes relations between
//! addresses through the end-padded convolution of their tracks.

mod dfa;
pub mod regex;
mod regular;
mod sync;

use std::fmt;

use thiserror::Error;

pub(crate) use dfa::Dfa;
pub use regex::Regex;
pub use regular::RegularSet;
pub use sync::{Atomic, BoolOp, SyncAutomaton};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("expected a tuple of {expected} addresses, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("variable `{0}` is not a track of the automaton")]
    UnboundTrack(String),
    #[error("letter `{letter}` is out of range for {n} function symbols")]
    LetterOutOfRange { letter: String, n: usize },
    #[error("regular expression error at offset {offset}: {msg}")]
    Regex { offset: usize, msg: String },
    #[error("automata over different alphabets ({0} vs {1} function symbols)")]
    AlphabetMismatch(usize, usize),
}

/// One successor letter of the term universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    /// `f_0`, used to separate the components of a model.
    Zero,
    /// `f_i` for `i` in `1..=n`.
    Fwd(u16),
    /// `f_i^-1` for `i` in `1..=n`.
    Bar(u16),
}

impl Letter {
    /// Dense index in `0..2n+1`: `0`, then `1..n`, then the bars.
    pub fn index(self, n: usize) -> usize {
        match self {
            Letter::Zero => 0,
            Letter::Fwd(i) => i as usize,
            Letter::Bar(i) => n + i as usize,
        }
    }

    pub fn from_index(i: usize, n: usize) -> Letter {
        if i == 0 {
            Letter::Zero
        } else if i <= n {
            Letter::Fwd(i as u16)
        } else {
            Letter::Bar((i - n) as u16)
        }
    }

    pub fn in_range(self, n: usize) -> bool {
        match self {
            Letter::Zero => true,
            Letter::Fwd(i) | Letter::Bar(i) => i >= 1 && i as usize <= n,
        }
    }

    pub fn all(n: usize) -> impl Iterator<Item = Letter> {
        (0..2 * n + 1).map(move |i| Letter::from_index(i, n))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Zero => write!(f, "0"),
            Letter::Fwd(i) => write!(f, "{i}"),
            Letter::Bar(i) => write!(f, "b{i}"),
        }
    }
}

/// A node of the term universe, written as the word of successors applied
/// to the empty word `Lam`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Address(pub Vec<Letter>);

impl Address {
    pub fn lambda() -> Address {
        Address(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&self, l: Letter) -> Address {
        let mut out = self.clone();
        out.0.push(l);
        out
    }

    pub fn concat(&self, suffix: &[Letter]) -> Address {
        let mut out = self.clone();
        out.0.extend_from_slice(suffix);
        out
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn parent(&self) -> Option<Address> {
        (!self.0.is_empty()).then(|| Address(self.0[..self.0.len() - 1].to_vec()))
    }

    /// `0^j`, the address of the `j`-th constant.
    pub fn root(j: usize) -> Address {
        Address(vec![Letter::Zero; j])
    }

    /// Parses the compact form used in regular expressions, e.g. `"00b1b1"`;
    /// `"Lam"` or the empty string is the empty word.
    pub fn parse(text: &str, n: usize) -> Result<Address, AutomatonError> {
        let text = text.trim();
        if text == "Lam" {
            return Ok(Address::lambda());
        }
        let mut out = Vec::new();
        let mut chars = text.chars().filter(|c| !c.is_whitespace()).peekable();
        while let Some(c) = chars.next() {
            let l = match c {
                '0' => Letter::Zero,
                'b' => match chars.next().and_then(|d| d.to_digit(10)) {
                    Some(d) => Letter::Bar(d as u16),
                    None => {
                        return Err(AutomatonError::LetterOutOfRange {
                            letter: "b".into(),
                            n,
                        })
                    }
                },
                d if d.is_ascii_digit() => Letter::Fwd(d.to_digit(10).unwrap() as u16),
                other => {
                    return Err(AutomatonError::LetterOutOfRange {
                        letter: other.to_string(),
                        n,
                    })
                }
            };
            if !l.in_range(n) {
                return Err(AutomatonError::LetterOutOfRange {
                    letter: l.to_string(),
                    n,
                });
            }
            out.push(l);
        }
        Ok(Address(out))
    }

    pub fn indices(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(move |l| l.index(n))
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "Lam");
        }
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}
