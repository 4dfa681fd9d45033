//! Abstract syntax of the monadic second-order logic of `2n + 1`
//! successors, the translation of first-order formulas into it, and its
//! S-expression text form.
//!
//! Successor letters reuse [`Letter`]: `s0` is `f_0`, `s1..sn` are
//! `f_1..f_n`, and `b1..bn` are the inverse-tagged `f_1^-1..f_n^-1`.

mod build;
mod text;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::automata::Letter;
use crate::syntax::Signature;

pub use build::{assemble_sentence, build_domain, build_mod, domain_parts, subset};
pub use text::{emit, parse_sns};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SnsError {
    #[error("formula is not simple: functions must occur only as `y = f(x)`")]
    NotSimple,
    #[error("formula is not in the {{~, |, exists}} basis")]
    NotNormalized,
    #[error("formula has free variables: {}", .0.join(", "))]
    NotClosed(Vec<String>),
    #[error("S-expression error at offset {offset}: {msg}")]
    Parse { offset: usize, msg: String },
}

impl SnsError {
    pub fn code(&self) -> &'static str {
        match self {
            SnsError::NotSimple => "not-simple",
            SnsError::NotNormalized => "not-normalized",
            SnsError::NotClosed(_) => "not-closed",
            SnsError::Parse { .. } => "sns-syntax",
        }
    }
}

/// The successor letters and set variables determined by a signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnsSignature {
    pub n: usize,
    pub m: usize,
}

impl SnsSignature {
    pub fn of(sig: &Signature) -> Self {
        SnsSignature { n: sig.n(), m: sig.m() }
    }

    /// `f_0, f_1..f_n, f_1^-1..f_n^-1`.
    pub fn letters(&self) -> Vec<Letter> {
        Letter::all(self.n).collect()
    }

    pub fn domain_var(&self) -> &'static str {
        "X"
    }

    /// `Y1..Ym`, one per predicate in signature order.
    pub fn predicate_vars(&self) -> Vec<String> {
        (1..=self.m).map(pred_var).collect()
    }
}

pub(crate) fn pred_var(l: usize) -> String {
    format!("Y{l}")
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SnsTerm {
    Lambda,
    Var(String),
    Succ(Letter, Box<SnsTerm>),
}

impl SnsTerm {
    pub fn var(name: &str) -> SnsTerm {
        SnsTerm::Var(name.to_string())
    }

    pub fn succ(l: Letter, t: SnsTerm) -> SnsTerm {
        SnsTerm::Succ(l, Box::new(t))
    }

    /// `f_0^j(Λ)`.
    pub fn root(j: usize) -> SnsTerm {
        (0..j).fold(SnsTerm::Lambda, |t, _| SnsTerm::succ(Letter::Zero, t))
    }

    /// Splits into the innermost base and the letters applied to it, innermost
    /// first: `s1(s0(x))` is `(x, [0, 1])`.
    pub fn split(&self) -> (Option<&str>, Vec<Letter>) {
        match self {
            SnsTerm::Lambda => (None, Vec::new()),
            SnsTerm::Var(v) => (Some(v), Vec::new()),
            SnsTerm::Succ(l, t) => {
                let (base, mut word) = t.split();
                word.push(*l);
                (base, word)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SnsFormula {
    True,
    False,
    Eq(SnsTerm, SnsTerm),
    Member(SnsTerm, String),
    Not(Box<SnsFormula>),
    And(Vec<SnsFormula>),
    Or(Vec<SnsFormula>),
    Xor(Box<SnsFormula>, Box<SnsFormula>),
    Implies(Box<SnsFormula>, Box<SnsFormula>),
    Iff(Box<SnsFormula>, Box<SnsFormula>),
    Ex1(String, Box<SnsFormula>),
    All1(String, Box<SnsFormula>),
    Ex2(String, Box<SnsFormula>),
    All2(String, Box<SnsFormula>),
}

impl SnsFormula {
    pub fn not(f: SnsFormula) -> SnsFormula {
        SnsFormula::Not(Box::new(f))
    }

    pub fn member(t: SnsTerm, set: &str) -> SnsFormula {
        SnsFormula::Member(t, set.to_string())
    }

    pub fn xor(a: SnsFormula, b: SnsFormula) -> SnsFormula {
        SnsFormula::Xor(Box::new(a), Box::new(b))
    }

    pub fn implies(a: SnsFormula, b: SnsFormula) -> SnsFormula {
        SnsFormula::Implies(Box::new(a), Box::new(b))
    }

    pub fn ex1(v: &str, f: SnsFormula) -> SnsFormula {
        SnsFormula::Ex1(v.to_string(), Box::new(f))
    }

    pub fn all1(v: &str, f: SnsFormula) -> SnsFormula {
        SnsFormula::All1(v.to_string(), Box::new(f))
    }

    pub fn ex2(v: &str, f: SnsFormula) -> SnsFormula {
        SnsFormula::Ex2(v.to_string(), Box::new(f))
    }

    /// Big conjunction: `True` when empty, the item itself when single.
    pub fn big_and(mut items: Vec<SnsFormula>) -> SnsFormula {
        match items.len() {
            0 => SnsFormula::True,
            1 => items.pop().unwrap(),
            _ => SnsFormula::And(items),
        }
    }

    /// Big disjunction: `False` when empty, the item itself when single.
    pub fn big_or(mut items: Vec<SnsFormula>) -> SnsFormula {
        match items.len() {
            0 => SnsFormula::False,
            1 => items.pop().unwrap(),
            _ => SnsFormula::Or(items),
        }
    }

    fn collect_free(&self, bound1: &mut Vec<String>, bound2: &mut Vec<String>, obj: &mut BTreeSet<String>, set: &mut BTreeSet<String>) {
        let term = |t: &SnsTerm, bound1: &Vec<String>, obj: &mut BTreeSet<String>| {
            if let (Some(v), _) = t.split() {
                if !bound1.iter().any(|b| b == v) {
                    obj.insert(v.to_string());
                }
            }
        };
        match self {
            SnsFormula::True | SnsFormula::False => {}
            SnsFormula::Eq(a, b) => {
                term(a, bound1, obj);
                term(b, bound1, obj);
            }
            SnsFormula::Member(t, s) => {
                term(t, bound1, obj);
                if !bound2.iter().any(|b| b == s) {
                    set.insert(s.clone());
                }
            }
            SnsFormula::Not(a) => a.collect_free(bound1, bound2, obj, set),
            SnsFormula::And(xs) | SnsFormula::Or(xs) => {
                for x in xs {
                    x.collect_free(bound1, bound2, obj, set);
                }
            }
            SnsFormula::Xor(a, b) | SnsFormula::Implies(a, b) | SnsFormula::Iff(a, b) => {
                a.collect_free(bound1, bound2, obj, set);
                b.collect_free(bound1, bound2, obj, set);
            }
            SnsFormula::Ex1(v, a) | SnsFormula::All1(v, a) => {
                bound1.push(v.clone());
                a.collect_free(bound1, bound2, obj, set);
                bound1.pop();
            }
            SnsFormula::Ex2(v, a) | SnsFormula::All2(v, a) => {
                bound2.push(v.clone());
                a.collect_free(bound1, bound2, obj, set);
                bound2.pop();
            }
        }
    }

    /// Free object variables, sorted.
    pub fn free_obj_vars(&self) -> BTreeSet<String> {
        let mut obj = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut Vec::new(), &mut obj, &mut BTreeSet::new());
        obj
    }

    /// Free set variables, sorted.
    pub fn free_set_vars(&self) -> BTreeSet<String> {
        let mut set = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut Vec::new(), &mut BTreeSet::new(), &mut set);
        set
    }

    pub fn is_closed(&self) -> bool {
        self.free_obj_vars().is_empty() && self.free_set_vars().is_empty()
    }

    /// Pre-order traversal.
    pub fn visit(&self, f: &mut impl FnMut(&SnsFormula)) {
        f(self);
        match self {
            SnsFormula::Not(a)
            | SnsFormula::Ex1(_, a)
            | SnsFormula::All1(_, a)
            | SnsFormula::Ex2(_, a)
            | SnsFormula::All2(_, a) => a.visit(f),
            SnsFormula::And(xs) | SnsFormula::Or(xs) => xs.iter().for_each(|x| x.visit(f)),
            SnsFormula::Xor(a, b) | SnsFormula::Implies(a, b) | SnsFormula::Iff(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }
}

impl std::fmt::Display for SnsFormula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&emit(self))
    }
}
