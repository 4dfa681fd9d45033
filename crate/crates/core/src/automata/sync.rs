use std::fmt;

use super::dfa::{Dfa, Nfa};
use super::{Address, AutomatonError, Letter, RegularSet};

/// Atomic relations between addresses.
#[derive(Debug, Clone)]
pub enum Atomic {
    True,
    False,
    /// `x = y`.
    Equal(String, String),
    /// `y = x·w`.
    Extend { x: String, word: Vec<Letter>, y: String },
    /// `x = c` for a fixed address.
    Constant(String, Address),
    /// `x·u ∈ S`.
    Member { x: String, suffix: Vec<Letter>, set: RegularSet },
}

impl Atomic {
    pub fn succ(x: &str, letter: Letter, y: &str) -> Atomic {
        Atomic::Extend {
            x: x.to_string(),
            word: vec![letter],
            y: y.to_string(),
        }
    }

    pub fn lambda(x: &str) -> Atomic {
        Atomic::Constant(x.to_string(), Address::lambda())
    }

    pub fn member(x: &str, set: &RegularSet) -> Atomic {
        Atomic::Member {
            x: x.to_string(),
            suffix: Vec::new(),
            set: set.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolOp {
    And,
    Or,
    Xor,
    Implies,
    Iff,
}

impl BoolOp {
    fn apply(self, a: bool, b: bool) -> bool {
        match self {
            BoolOp::And => a && b,
            BoolOp::Or => a || b,
            BoolOp::Xor => a != b,
            BoolOp::Implies => !a || b,
            BoolOp::Iff => a == b,
        }
    }
}

/// Automaton over the end-padded convolution of one address per track.
///
/// Tracks are object variables in sorted order. Symbols encode one digit
/// per track in base `2n + 2`, where the digit `2n + 1` is the padding
/// letter. Every accepted word is a valid convolution; a 0-track automaton
/// is a boolean and accepts at most the empty word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyncAutomaton {
    n: usize,
    vars: Vec<String>,
    dfa: Dfa,
}

fn pow(base: usize, k: usize) -> usize {
    base.pow(k as u32)
}

/// Accepts exactly the valid convolutions over `k` tracks.
fn validity(n: usize, k: usize) -> Dfa {
    let pad = 2 * n + 1;
    let base = pad + 1;
    let full = (1usize << k) - 1;
    Dfa::from_partial(
        pow(base, k),
        1 << k,
        0,
        |_| true,
        |mask, sym| {
            let mut ended = 0usize;
            let mut s = sym;
            for t in 0..k {
                if s % base == pad {
                    ended |= 1 << t;
                } else if mask & (1 << t) != 0 {
                    return None;
                }
                s /= base;
            }
            (ended != full).then_some(mask | ended)
        },
    )
}

impl SyncAutomaton {
    fn base(&self) -> usize {
        2 * self.n + 2
    }

    fn pad(&self) -> usize {
        2 * self.n + 1
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn states(&self) -> usize {
        self.dfa.states()
    }

    pub fn boolean(n: usize, value: bool) -> SyncAutomaton {
        SyncAutomaton {
            n,
            vars: Vec::new(),
            dfa: if value { Dfa::from_partial(1, 1, 0, |_| true, |_, _| None) } else { Dfa::empty(1) },
        }
    }

    fn from_step(
        n: usize,
        vars: Vec<String>,
        states: usize,
        accept: impl Fn(usize) -> bool,
        step: impl Fn(usize, &[usize]) -> Option<usize>,
    ) -> SyncAutomaton {
        let k = vars.len();
        let base = 2 * n + 2;
        let raw = Dfa::from_partial(pow(base, k), states, 0, accept, |q, sym| {
            let mut digits = [0usize; 2];
            let mut s = sym;
            for d in digits.iter_mut().take(k) {
                *d = s % base;
                s /= base;
            }
            step(q, &digits[..k])
        });
        let dfa = raw.product(&validity(n, k), |a, b| a && b).minimize();
        SyncAutomaton { n, vars, dfa }
    }

    pub fn atomic(n: usize, atom: &Atomic) -> SyncAutomaton {
        let pad = 2 * n + 1;
        match atom {
            Atomic::True => SyncAutomaton::boolean(n, true),
            Atomic::False => SyncAutomaton::boolean(n, false),
            Atomic::Equal(x, y) if x == y => {
                SyncAutomaton::from_step(n, vec![x.clone()], 1, |_| true, |_, _| Some(0))
            }
            Atomic::Equal(x, y) => {
                let mut vars = vec![x.clone(), y.clone()];
                vars.sort();
                SyncAutomaton::from_step(n, vars, 1, |_| true, |_, d| (d[0] == d[1]).then_some(0))
            }
            Atomic::Extend { x, word, y } if x == y => SyncAutomaton::from_step(
                n,
                vec![x.clone()],
                1,
                { let e = word.is_empty(); move |_| e },
                |_, _| Some(0),
            ),
            Atomic::Extend { x, word, y } => {
                let mut vars = vec![x.clone(), y.clone()];
                vars.sort();
                let (xi, yi) = if vars[0] == *x { (0, 1) } else { (1, 0) };
                let w: Vec<usize> = word.iter().map(|l| l.index(n)).collect();
                // State 0: tracks agree; state i > 0: i letters of w read.
                SyncAutomaton::from_step(
                    n,
                    vars,
                    w.len() + 1,
                    |q| q == w.len(),
                    |q, d| {
                        if q == 0 && d[xi] != pad && d[xi] == d[yi] {
                            Some(0)
                        } else if d[xi] == pad && q < w.len() && d[yi] == w[q] {
                            Some(q + 1)
                        } else {
                            None
                        }
                    },
                )
            }
            Atomic::Constant(x, c) => {
                let w: Vec<usize> = c.indices(n).collect();
                SyncAutomaton::from_step(
                    n,
                    vec![x.clone()],
                    w.len() + 1,
                    |q| q == w.len(),
                    |q, d| (q < w.len() && d[0] == w[q]).then_some(q + 1),
                )
            }
            Atomic::Member { x, suffix, set } => {
                assert_eq!(set.n(), n, "member set over a different alphabet");
                // Minimal DFAs start in state 0.
                let q = set.quotient(suffix);
                SyncAutomaton::from_step(
                    n,
                    vec![x.clone()],
                    q.dfa.states(),
                    |s| q.dfa.accept[s],
                    |s, d| (d[0] != pad).then(|| q.dfa.next(s as u32, d[0]) as usize),
                )
            }
        }
    }

    /// Re-expresses the automaton over the sorted track set `vars`, which
    /// must include the current tracks.
    fn cylindrify(&self, vars: &[String]) -> SyncAutomaton {
        if vars == self.vars.as_slice() {
            return self.clone();
        }
        let base = self.base();
        let pad = self.pad();
        let k = vars.len();
        let pos: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("cylindrify to a superset"))
            .collect();
        let old_states = self.dfa.states();
        let ended = old_states;
        let sink = old_states + 1;
        let alphabet = pow(base, k);
        let mut trans = Vec::with_capacity((old_states + 2) * alphabet);
        let mut proj = vec![0usize; alphabet];
        let mut proj_pad = vec![true; alphabet];
        for (sym, (p, pp)) in proj.iter_mut().zip(proj_pad.iter_mut()).enumerate() {
            let mut digits = Vec::with_capacity(k);
            let mut s = sym;
            for _ in 0..k {
                digits.push(s % base);
                s /= base;
            }
            let mut code = 0;
            for &np in pos.iter().rev() {
                code = code * base + digits[np];
            }
            *p = code;
            *pp = pos.iter().all(|&np| digits[np] == pad);
        }
        for q in 0..old_states + 2 {
            for sym in 0..alphabet {
                let t = if q == sink {
                    sink
                } else if proj_pad[sym] {
                    if q == ended || self.dfa.accept[q] { ended } else { sink }
                } else if q == ended {
                    sink
                } else {
                    self.dfa.next(q as u32, proj[sym]) as usize
                };
                trans.push(t as u32);
            }
        }
        let mut accept = self.dfa.accept.clone();
        accept.push(true);
        accept.push(false);
        let raw = Dfa {
            alphabet,
            trans,
            accept,
            start: self.dfa.start,
        };
        let dfa = raw.product(&validity(self.n, k), |a, b| a && b).minimize();
        SyncAutomaton {
            n: self.n,
            vars: vars.to_vec(),
            dfa,
        }
    }

    fn check_compatible(&self, other: &SyncAutomaton) -> Result<(), AutomatonError> {
        if self.n != other.n {
            return Err(AutomatonError::AlphabetMismatch(self.n, other.n));
        }
        Ok(())
    }

    pub fn combine(&self, op: BoolOp, other: &SyncAutomaton) -> Result<SyncAutomaton, AutomatonError> {
        self.check_compatible(other)?;
        let mut vars: Vec<String> = self.vars.iter().chain(&other.vars).cloned().collect();
        vars.sort();
        vars.dedup();
        let a = self.cylindrify(&vars);
        let b = other.cylindrify(&vars);
        let mut dfa = a.dfa.product(&b.dfa, |x, y| op.apply(x, y));
        if op.apply(false, false) {
            dfa = dfa.product(&validity(self.n, vars.len()), |x, y| x && y);
        }
        Ok(SyncAutomaton {
            n: self.n,
            vars,
            dfa: dfa.minimize(),
        })
    }

    pub fn and(&self, other: &SyncAutomaton) -> Result<SyncAutomaton, AutomatonError> {
        self.combine(BoolOp::And, other)
    }

    pub fn or(&self, other: &SyncAutomaton) -> Result<SyncAutomaton, AutomatonError> {
        self.combine(BoolOp::Or, other)
    }

    /// Complement within the valid convolutions over the same tracks.
    pub fn not(&self) -> SyncAutomaton {
        let dfa = self
            .dfa
            .complement()
            .product(&validity(self.n, self.vars.len()), |a, b| a && b)
            .minimize();
        SyncAutomaton {
            n: self.n,
            vars: self.vars.clone(),
            dfa,
        }
    }

    /// Existential projection of the track `var`.
    pub fn project(&self, var: &str) -> Result<SyncAutomaton, AutomatonError> {
        let idx = self
            .vars
            .iter()
            .position(|v| v == var)
            .ok_or_else(|| AutomatonError::UnboundTrack(var.to_string()))?;
        let base = self.base();
        let pad = self.pad();
        let k = self.vars.len();
        let new_alpha = pow(base, k - 1);
        let states = self.dfa.states();
        let mut nfa = Nfa::new(new_alpha, states);
        nfa.start = vec![self.dfa.start];
        // Symbols whose remaining tracks are all padding only occur after
        // every remaining track has ended; they are folded into acceptance.
        let mut tail_edges: Vec<Vec<u32>> = vec![Vec::new(); states];
        let low = pow(base, idx);
        for sym in 0..pow(base, k) {
            let rest = sym % low + (sym / (low * base)) * low;
            let all_pad = (0..k - 1).all(|t| (rest / pow(base, t)) % base == pad);
            for q in 0..states {
                let t = self.dfa.next(q as u32, sym);
                if all_pad {
                    tail_edges[t as usize].push(q as u32);
                } else {
                    nfa.add(q as u32, rest, t);
                }
            }
        }
        let mut good = self.dfa.accept.clone();
        let mut stack: Vec<u32> = (0..states as u32).filter(|&q| good[q as usize]).collect();
        while let Some(q) = stack.pop() {
            for &p in &tail_edges[q as usize] {
                if !good[p as usize] {
                    good[p as usize] = true;
                    stack.push(p);
                }
            }
        }
        nfa.accept = good;
        let mut vars = self.vars.clone();
        vars.remove(idx);
        let dfa = nfa
            .determinize()
            .product(&validity(self.n, k - 1), |a, b| a && b)
            .minimize();
        Ok(SyncAutomaton { n: self.n, vars, dfa })
    }

    pub fn is_empty(&self) -> bool {
        self.dfa.is_empty()
    }

    /// Truth value of a 0-track automaton; for other automata, nonemptiness.
    pub fn value(&self) -> bool {
        !self.is_empty()
    }

    /// Whether the tuple, one address per track in track order, is accepted.
    pub fn accepts(&self, tuple: &[Address]) -> Result<bool, AutomatonError> {
        if tuple.len() != self.vars.len() {
            return Err(AutomatonError::ArityMismatch {
                expected: self.vars.len(),
                got: tuple.len(),
            });
        }
        for w in tuple {
            if let Some(l) = w.0.iter().find(|l| !l.in_range(self.n)) {
                return Err(AutomatonError::LetterOutOfRange {
                    letter: l.to_string(),
                    n: self.n,
                });
            }
        }
        let len = tuple.iter().map(Address::len).max().unwrap_or(0);
        let base = self.base();
        let word = (0..len).map(|i| {
            tuple.iter().rev().fold(0, |acc, w| {
                acc * base + w.0.get(i).map_or(self.pad(), |l| l.index(self.n))
            })
        });
        Ok(self.dfa.run(word))
    }

    /// Accepts a tuple given by variable name; missing names are an error.
    pub fn accepts_named(&self, binding: &[(&str, Address)]) -> Result<bool, AutomatonError> {
        let mut tuple = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            let w = binding
                .iter()
                .find(|(name, _)| name == v)
                .ok_or_else(|| AutomatonError::UnboundTrack(v.clone()))?;
            tuple.push(w.1.clone());
        }
        self.accepts(&tuple)
    }

    /// Language equality, after aligning tracks.
    pub fn same_language(&self, other: &SyncAutomaton) -> bool {
        self.combine(BoolOp::Xor, other).map_or(false, |x| x.is_empty())
    }

    fn symbol_text(&self, sym: usize) -> String {
        let base = self.base();
        let digits: Vec<String> = (0..self.vars.len())
            .map(|t| {
                let d = (sym / pow(base, t)) % base;
                if d == self.pad() {
                    "_".to_string()
                } else {
                    Letter::from_index(d, self.n).to_string()
                }
            })
            .collect();
        format!("({})", digits.join(","))
    }
}

impl fmt::Display for SyncAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let productive = self.dfa.productive();
        writeln!(f, "tracks: [{}]", self.vars.join(", "))?;
        writeln!(f, "states: {}, start: {}", self.dfa.states(), self.dfa.start)?;
        let acc: Vec<usize> = (0..self.dfa.states()).filter(|&q| self.dfa.accept[q]).collect();
        writeln!(f, "accepting: {acc:?}")?;
        for q in 0..self.dfa.states() {
            if !productive[q] {
                continue;
            }
            for sym in 0..self.dfa.alphabet {
                let t = self.dfa.next(q as u32, sym);
                if productive[t as usize] {
                    writeln!(f, "  {q} --{}--> {t}", self.symbol_text(sym))?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(w: &str, n: usize) -> Address {
        Address::parse(w, n).unwrap()
    }

    #[test]
    fn equal_relation() {
        let e = SyncAutomaton::atomic(1, &Atomic::Equal("x".into(), "y".into()));
        assert!(e.accepts(&[a("01", 1), a("01", 1)]).unwrap());
        assert!(!e.accepts(&[a("01", 1), a("0", 1)]).unwrap());
        assert!(e.accepts(&[a("Lam", 1), a("Lam", 1)]).unwrap());
        assert!(!e.is_empty());
    }

    #[test]
    fn successor_relation() {
        let s = SyncAutomaton::atomic(1, &Atomic::succ("x", Letter::Fwd(1), "y"));
        assert!(s.accepts(&[a("0", 1), a("01", 1)]).unwrap());
        assert!(!s.accepts(&[a("01", 1), a("0", 1)]).unwrap());
        // Track order is by name, not by role.
        let r = SyncAutomaton::atomic(1, &Atomic::succ("y", Letter::Bar(1), "x"));
        assert!(r.accepts(&[a("0b1", 1), a("0", 1)]).unwrap());
    }

    #[test]
    fn membership() {
        let d = RegularSet::parse("0 1*", 1).unwrap();
        let m = SyncAutomaton::atomic(1, &Atomic::member("x", &d));
        assert!(m.accepts(&[a("011", 1)]).unwrap());
        assert!(!m.accepts(&[a("10", 1)]).unwrap());
        let both = m
            .and(&SyncAutomaton::atomic(1, &Atomic::member("x", &RegularSet::parse("0 0 1*", 1).unwrap())))
            .unwrap();
        assert!(both.is_empty());
    }

    #[test]
    fn projection_of_successor() {
        let s = SyncAutomaton::atomic(1, &Atomic::succ("x", Letter::Fwd(1), "y"));
        let p = s.project("x").unwrap();
        assert_eq!(p.vars(), ["y".to_string()]);
        assert!(p.accepts(&[a("0b11", 1)]).unwrap());
        assert!(!p.accepts(&[a("0b1", 1)]).unwrap());
        let e = SyncAutomaton::atomic(1, &Atomic::Equal("x".into(), "y".into()));
        assert!(e.project("y").unwrap().not().is_empty());
        assert!(matches!(s.project("z"), Err(AutomatonError::UnboundTrack(_))));
    }

    #[test]
    fn projection_needs_longer_witness() {
        // exists y. y = x·11: every x has a witness longer than x itself.
        let e = SyncAutomaton::atomic(
            1,
            &Atomic::Extend { x: "x".into(), word: vec![Letter::Fwd(1), Letter::Fwd(1)], y: "y".into() },
        );
        let p = e.project("y").unwrap();
        assert!(p.not().is_empty());
        let closed = p.project("x").unwrap();
        assert!(closed.vars().is_empty());
        assert!(closed.value());
    }

    #[test]
    fn double_negation() {
        let s = SyncAutomaton::atomic(2, &Atomic::succ("x", Letter::Bar(2), "y"));
        assert_eq!(s.not().not(), s);
    }

    #[test]
    fn arity_mismatch() {
        let s = SyncAutomaton::atomic(1, &Atomic::succ("x", Letter::Fwd(1), "y"));
        assert!(matches!(s.accepts(&[a("0", 1)]), Err(AutomatonError::ArityMismatch { .. })));
    }

    #[test]
    fn booleans() {
        let t = SyncAutomaton::boolean(1, true);
        let f = SyncAutomaton::boolean(1, false);
        assert!(t.value() && !f.value());
        assert!(t.not().same_language(&f));
        assert!(t.accepts(&[]).unwrap());
    }

    #[test]
    fn constant_relation() {
        let c = SyncAutomaton::atomic(1, &Atomic::Constant("x".into(), a("00", 1)));
        assert!(c.accepts(&[a("00", 1)]).unwrap());
        assert!(!c.accepts(&[a("0", 1)]).unwrap());
        let l = SyncAutomaton::atomic(1, &Atomic::lambda("x"));
        assert!(l.accepts(&[a("Lam", 1)]).unwrap());
    }
}
