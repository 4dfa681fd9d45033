use std::collections::HashMap;

use super::{CheckError, SetEnv};
use crate::automata::{Address, Atomic, BoolOp, SyncAutomaton};
use crate::sns::{SnsFormula, SnsTerm};

/// Compiles formulas bottom-up into synchronous automata. Closed
/// subformulas are evaluated directly as booleans, with short-circuiting.
pub(crate) struct Compiler<'a> {
    env: &'a SetEnv,
    automata: HashMap<SnsFormula, SyncAutomaton>,
    truths: HashMap<SnsFormula, bool>,
}

fn ground(t: &SnsTerm) -> Option<Address> {
    match t.split() {
        (None, word) => Some(Address(word)),
        _ => None,
    }
}

impl<'a> Compiler<'a> {
    pub fn new(env: &'a SetEnv) -> Self {
        Compiler {
            env,
            automata: HashMap::new(),
            truths: HashMap::new(),
        }
    }

    fn n(&self) -> usize {
        self.env.n()
    }

    fn set(&self, name: &str) -> Result<&'a crate::automata::RegularSet, CheckError> {
        self.env.get(name).ok_or_else(|| CheckError::UnboundSet(name.to_string()))
    }

    pub fn truth(&mut self, f: &SnsFormula) -> Result<bool, CheckError> {
        if let Some(&b) = self.truths.get(f) {
            return Ok(b);
        }
        let b = match f {
            SnsFormula::True => true,
            SnsFormula::False => false,
            SnsFormula::Eq(a, b) => ground(a).expect("closed") == ground(b).expect("closed"),
            SnsFormula::Member(t, s) => self.set(s)?.contains(&ground(t).expect("closed")),
            SnsFormula::Not(a) => !self.truth(a)?,
            SnsFormula::And(xs) => {
                let mut all = true;
                for x in xs {
                    if !self.truth(x)? {
                        all = false;
                        break;
                    }
                }
                all
            }
            SnsFormula::Or(xs) => {
                let mut any = false;
                for x in xs {
                    if self.truth(x)? {
                        any = true;
                        break;
                    }
                }
                any
            }
            SnsFormula::Xor(a, b) => self.truth(a)? != self.truth(b)?,
            SnsFormula::Implies(a, b) => !self.truth(a)? || self.truth(b)?,
            SnsFormula::Iff(a, b) => self.truth(a)? == self.truth(b)?,
            SnsFormula::Ex1(v, a) => self.exists(v, a)?.value(),
            SnsFormula::All1(v, a) => !self.exists(v, &SnsFormula::not(a.as_ref().clone()))?.value(),
            SnsFormula::Ex2(v, _) | SnsFormula::All2(v, _) => return Err(CheckError::SecondOrder(v.clone())),
        };
        self.truths.insert(f.clone(), b);
        Ok(b)
    }

    fn exists(&mut self, v: &str, body: &SnsFormula) -> Result<SyncAutomaton, CheckError> {
        let a = self.compile(body)?;
        // The universe of addresses is nonempty, so a body that does not
        // depend on `v` is its own projection.
        if a.vars().iter().any(|x| x == v) {
            Ok(a.project(v)?)
        } else {
            Ok(a)
        }
    }

    pub fn compile(&mut self, f: &SnsFormula) -> Result<SyncAutomaton, CheckError> {
        if f.free_obj_vars().is_empty() {
            let b = self.truth(f)?;
            return Ok(SyncAutomaton::boolean(self.n(), b));
        }
        if let Some(a) = self.automata.get(f) {
            return Ok(a.clone());
        }
        let n = self.n();
        let out = match f {
            SnsFormula::True | SnsFormula::False => unreachable!("closed"),
            SnsFormula::Eq(a, b) => SyncAutomaton::atomic(n, &equation(a, b)),
            SnsFormula::Member(t, s) => {
                let set = self.set(s)?;
                let (base, suffix) = t.split();
                SyncAutomaton::atomic(
                    n,
                    &Atomic::Member {
                        x: base.expect("open").to_string(),
                        suffix,
                        set: set.clone(),
                    },
                )
            }
            SnsFormula::Not(a) => self.compile(a)?.not(),
            SnsFormula::And(xs) | SnsFormula::Or(xs) => {
                let (op, unit) = match f {
                    SnsFormula::And(_) => (BoolOp::And, true),
                    _ => (BoolOp::Or, false),
                };
                let mut acc = SyncAutomaton::boolean(n, unit);
                for x in xs {
                    let part = self.compile(x)?;
                    acc = acc.combine(op, &part)?;
                }
                acc
            }
            SnsFormula::Xor(a, b) | SnsFormula::Implies(a, b) | SnsFormula::Iff(a, b) => {
                let op = match f {
                    SnsFormula::Xor(..) => BoolOp::Xor,
                    SnsFormula::Implies(..) => BoolOp::Implies,
                    _ => BoolOp::Iff,
                };
                let a = self.compile(a)?;
                let b = self.compile(b)?;
                a.combine(op, &b)?
            }
            SnsFormula::Ex1(v, a) => self.exists(v, a)?,
            SnsFormula::All1(v, a) => self.exists(v, &SnsFormula::not(a.as_ref().clone()))?.not(),
            SnsFormula::Ex2(v, _) | SnsFormula::All2(v, _) => return Err(CheckError::SecondOrder(v.clone())),
        };
        self.automata.insert(f.clone(), out.clone());
        Ok(out)
    }
}

/// Reduces `a = b`, with at least one side open, to an atomic relation.
fn equation(a: &SnsTerm, b: &SnsTerm) -> Atomic {
    let (ba, mut wa) = a.split();
    let (bb, mut wb) = b.split();
    match (ba, bb) {
        (Some(x), Some(y)) if x == y => {
            if wa == wb {
                Atomic::True
            } else {
                Atomic::False
            }
        }
        (Some(x), None) | (None, Some(x)) => {
            // x·u = c holds iff c ends with u.
            let (u, c) = if ba.is_some() { (wa, wb) } else { (wb, wa) };
            match c.strip_suffix(u.as_slice()) {
                Some(rest) => Atomic::Constant(x.to_string(), Address(rest.to_vec())),
                None => Atomic::False,
            }
        }
        (Some(x), Some(y)) => {
            while let (Some(p), Some(q)) = (wa.last(), wb.last()) {
                if p != q {
                    return Atomic::False;
                }
                wa.pop();
                wb.pop();
            }
            if wa.is_empty() {
                Atomic::Extend { x: y.to_string(), word: wb, y: x.to_string() }
            } else {
                Atomic::Extend { x: x.to_string(), word: wa, y: y.to_string() }
            }
        }
        (None, None) => unreachable!("closed equation"),
    }
}
