//! Regular expressions over the address alphabet.
//!
//! Syntax: letters `0`, `1`..`9`, `b1`..`b9`; `.` for any letter;
//! juxtaposition for concatenation (whitespace is ignored); postfix `*`,
//! `+`, `?`; `|` for union; `( )` for grouping, with `()` the empty word.
//! `!` (or an entirely blank expression) denotes the empty set.

use std::fmt;

use super::dfa::{Dfa, Nfa};
use super::{AutomatonError, Letter};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regex {
    Empty,
    Epsilon,
    Letter(Letter),
    Any,
    Concat(Vec<Regex>),
    Alt(Vec<Regex>),
    Star(Box<Regex>),
}

impl Regex {
    pub fn parse(text: &str, n: usize) -> Result<Regex, AutomatonError> {
        let chars: Vec<(usize, char)> = text
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        if chars.is_empty() {
            return Ok(Regex::Empty);
        }
        let mut p = RegexParser { chars, pos: 0, n };
        let r = p.alt()?;
        if p.pos < p.chars.len() {
            return Err(p.error("unexpected character"));
        }
        Ok(r)
    }

    pub(crate) fn alt(a: Regex, b: Regex) -> Regex {
        let mut items = Vec::new();
        for r in [a, b] {
            match r {
                Regex::Empty => {}
                Regex::Alt(xs) => items.extend(xs),
                other => items.push(other),
            }
        }
        items.sort();
        items.dedup();
        match items.len() {
            0 => Regex::Empty,
            1 => items.pop().unwrap(),
            _ => Regex::Alt(items),
        }
    }

    pub(crate) fn concat(a: Regex, b: Regex) -> Regex {
        if a == Regex::Empty || b == Regex::Empty {
            return Regex::Empty;
        }
        let mut items = Vec::new();
        for r in [a, b] {
            match r {
                Regex::Epsilon => {}
                Regex::Concat(xs) => items.extend(xs),
                other => items.push(other),
            }
        }
        match items.len() {
            0 => Regex::Epsilon,
            1 => items.pop().unwrap(),
            _ => Regex::Concat(items),
        }
    }

    pub(crate) fn star(a: Regex) -> Regex {
        match a {
            Regex::Empty | Regex::Epsilon => Regex::Epsilon,
            s @ Regex::Star(_) => s,
            other => Regex::Star(Box::new(other)),
        }
    }

    /// Compiles to a minimal complete DFA over the `2n + 1` letters.
    pub(crate) fn to_dfa(&self, n: usize) -> Dfa {
        let alphabet = 2 * n + 1;
        let mut b = Thompson {
            alphabet,
            eps: Vec::new(),
            edges: Vec::new(),
        };
        let start = b.state();
        let end = b.state();
        b.build(self, start, end, n);
        // Epsilon-free NFA through closures.
        let states = b.eps.len();
        let closure: Vec<Vec<u32>> = (0..states as u32).map(|q| b.closure(q)).collect();
        let mut nfa = Nfa::new(alphabet, states);
        nfa.start = vec![start];
        for q in 0..states {
            nfa.accept[q] = closure[q].contains(&end);
            for &r in &closure[q] {
                for &(sym, t) in &b.edges[r as usize] {
                    nfa.add(q as u32, sym, t);
                }
            }
        }
        nfa.determinize().minimize()
    }

    /// Regular expression for the language of `dfa` by state elimination.
    pub(crate) fn from_dfa(dfa: &Dfa, n: usize) -> Regex {
        let useful: Vec<bool> = {
            let reach = dfa.reachable();
            let prod = dfa.productive();
            reach.iter().zip(&prod).map(|(&a, &b)| a && b).collect()
        };
        if !useful[dfa.start as usize] {
            return Regex::Empty;
        }
        let ids: Vec<usize> = (0..dfa.states()).filter(|&q| useful[q]).collect();
        let pos = |q: usize| ids.iter().position(|&x| x == q);
        let size = ids.len() + 2;
        let (s, f) = (ids.len(), ids.len() + 1);
        let mut r = vec![vec![Regex::Empty; size]; size];
        for (i, &q) in ids.iter().enumerate() {
            let mut by_target: Vec<Vec<usize>> = vec![Vec::new(); ids.len()];
            for sym in 0..dfa.alphabet {
                if let Some(j) = pos(dfa.next(q as u32, sym) as usize) {
                    by_target[j].push(sym);
                }
            }
            for (j, syms) in by_target.into_iter().enumerate() {
                if syms.is_empty() {
                    continue;
                }
                r[i][j] = if syms.len() == dfa.alphabet {
                    Regex::Any
                } else {
                    syms.into_iter()
                        .map(|s| Regex::Letter(Letter::from_index(s, n)))
                        .fold(Regex::Empty, Regex::alt)
                };
            }
            if dfa.accept[q] {
                r[i][f] = Regex::Epsilon;
            }
        }
        r[s][pos(dfa.start as usize).unwrap()] = Regex::Epsilon;
        let mut alive: Vec<usize> = (0..ids.len()).collect();
        while !alive.is_empty() {
            // Eliminate the state with the fewest in/out edges first.
            let cost = |q: usize| {
                let ins = (0..size).filter(|&i| i != q && r[i][q] != Regex::Empty).count();
                let outs = (0..size).filter(|&j| j != q && r[q][j] != Regex::Empty).count();
                ins * outs
            };
            let (idx, &q) = alive
                .iter()
                .enumerate()
                .min_by_key(|(_, &q)| (cost(q), q))
                .unwrap();
            alive.remove(idx);
            let loop_ = Regex::star(r[q][q].clone());
            for i in 0..size {
                if i == q || r[i][q] == Regex::Empty {
                    continue;
                }
                for j in 0..size {
                    if j == q || r[q][j] == Regex::Empty {
                        continue;
                    }
                    let path = Regex::concat(
                        Regex::concat(r[i][q].clone(), loop_.clone()),
                        r[q][j].clone(),
                    );
                    r[i][j] = Regex::alt(r[i][j].clone(), path);
                }
            }
            for i in 0..size {
                r[i][q] = Regex::Empty;
                r[q][i] = Regex::Empty;
            }
        }
        r[s][f].clone()
    }

    fn precedence(&self) -> u8 {
        match self {
            Regex::Alt(_) => 0,
            Regex::Concat(_) => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn wrap(f: &mut fmt::Formatter<'_>, r: &Regex, min: u8) -> fmt::Result {
            if r.precedence() < min {
                write!(f, "({r})")
            } else {
                write!(f, "{r}")
            }
        }
        match self {
            Regex::Empty => write!(f, "!"),
            Regex::Epsilon => write!(f, "()"),
            Regex::Letter(l) => write!(f, "{l}"),
            Regex::Any => write!(f, "."),
            Regex::Concat(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    wrap(f, x, 2)?;
                }
                Ok(())
            }
            Regex::Alt(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " | ")?;
                    }
                    wrap(f, x, 1)?;
                }
                Ok(())
            }
            Regex::Star(x) => {
                wrap(f, x, 2)?;
                write!(f, "*")
            }
        }
    }
}

struct RegexParser {
    chars: Vec<(usize, char)>,
    pos: usize,
    n: usize,
}

impl RegexParser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|&(o, _)| o)
            .unwrap_or_else(|| self.chars.last().map_or(0, |&(o, _)| o + 1))
    }

    fn error(&self, msg: &str) -> AutomatonError {
        AutomatonError::Regex {
            offset: self.offset(),
            msg: msg.to_string(),
        }
    }

    fn alt(&mut self) -> Result<Regex, AutomatonError> {
        let mut branches = vec![self.concat()?];
        while self.peek() == Some('|') {
            self.pos += 1;
            branches.push(self.concat()?);
        }
        Ok(if branches.len() == 1 {
            branches.pop().unwrap()
        } else {
            Regex::Alt(branches)
        })
    }

    fn concat(&mut self) -> Result<Regex, AutomatonError> {
        let mut items = Vec::new();
        while let Some(c) = self.peek() {
            if c == '|' || c == ')' {
                break;
            }
            items.push(self.postfix()?);
        }
        Ok(match items.len() {
            0 => Regex::Epsilon,
            1 => items.pop().unwrap(),
            _ => Regex::Concat(items),
        })
    }

    fn postfix(&mut self) -> Result<Regex, AutomatonError> {
        let mut r = self.atom()?;
        while let Some(c) = self.peek() {
            r = match c {
                '*' => Regex::Star(Box::new(r)),
                '+' => Regex::Concat(vec![r.clone(), Regex::Star(Box::new(r))]),
                '?' => Regex::Alt(vec![Regex::Epsilon, r]),
                _ => break,
            };
            self.pos += 1;
        }
        Ok(r)
    }

    fn letter(&self, l: Letter) -> Result<Regex, AutomatonError> {
        if l.in_range(self.n) {
            Ok(Regex::Letter(l))
        } else {
            Err(AutomatonError::LetterOutOfRange {
                letter: l.to_string(),
                n: self.n,
            })
        }
    }

    fn atom(&mut self) -> Result<Regex, AutomatonError> {
        let c = self.peek().ok_or_else(|| self.error("unexpected end of expression"))?;
        self.pos += 1;
        match c {
            '0' => Ok(Regex::Letter(Letter::Zero)),
            d if d.is_ascii_digit() => self.letter(Letter::Fwd(d.to_digit(10).unwrap() as u16)),
            'b' => match self.peek().and_then(|d| d.to_digit(10)) {
                Some(d) if d > 0 => {
                    self.pos += 1;
                    self.letter(Letter::Bar(d as u16))
                }
                _ => Err(self.error("expected a digit after `b`")),
            },
            '.' => Ok(Regex::Any),
            '!' => Ok(Regex::Empty),
            '(' => {
                let r = self.alt()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(r)
            }
            _ => {
                self.pos -= 1;
                Err(self.error("unexpected character"))
            }
        }
    }
}

struct Thompson {
    alphabet: usize,
    eps: Vec<Vec<u32>>,
    edges: Vec<Vec<(usize, u32)>>,
}

impl Thompson {
    fn state(&mut self) -> u32 {
        self.eps.push(Vec::new());
        self.edges.push(Vec::new());
        (self.eps.len() - 1) as u32
    }

    fn build(&mut self, r: &Regex, from: u32, to: u32, n: usize) {
        match r {
            Regex::Empty => {}
            Regex::Epsilon => self.eps[from as usize].push(to),
            Regex::Letter(l) => self.edges[from as usize].push((l.index(n), to)),
            Regex::Any => {
                for s in 0..self.alphabet {
                    self.edges[from as usize].push((s, to));
                }
            }
            Regex::Concat(xs) => {
                let mut cur = from;
                for (i, x) in xs.iter().enumerate() {
                    let next = if i + 1 == xs.len() { to } else { self.state() };
                    self.build(x, cur, next, n);
                    cur = next;
                }
                if xs.is_empty() {
                    self.eps[from as usize].push(to);
                }
            }
            Regex::Alt(xs) => {
                for x in xs {
                    self.build(x, from, to, n);
                }
            }
            Regex::Star(x) => {
                let mid = self.state();
                self.eps[from as usize].push(mid);
                self.eps[mid as usize].push(to);
                let back = self.state();
                self.build(x, mid, back, n);
                self.eps[back as usize].push(mid);
            }
        }
    }

    fn closure(&self, q: u32) -> Vec<u32> {
        let mut seen = vec![q];
        let mut stack = vec![q];
        while let Some(p) = stack.pop() {
            for &t in &self.eps[p as usize] {
                if !seen.contains(&t) {
                    seen.push(t);
                    stack.push(t);
                }
            }
        }
        seen.sort_unstable();
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Address;

    fn accepts(r: &str, n: usize, w: &str) -> bool {
        let d = Regex::parse(r, n).unwrap().to_dfa(n);
        d.run(Address::parse(w, n).unwrap().indices(n).collect::<Vec<_>>())
    }

    #[test]
    fn chain_language() {
        assert!(accepts("0 1*", 1, "011"));
        assert!(accepts("0 1*", 1, "0"));
        assert!(!accepts("0 1*", 1, "10"));
        assert!(!accepts("0 1*", 1, "Lam"));
    }

    #[test]
    fn bars_and_alternation() {
        let r = "0 | 0 1* | 0 0 b1* | 0 0 1 1*";
        assert!(accepts(r, 1, "00b1b1"));
        assert!(accepts(r, 1, "0011"));
        assert!(!accepts(r, 1, "00b11"));
    }

    #[test]
    fn empty_and_epsilon() {
        assert!(!accepts("", 1, "Lam"));
        assert!(!accepts("!", 1, "Lam"));
        assert!(accepts("()", 1, "Lam"));
        assert!(accepts("(0|1)?b1+", 1, "b1b1"));
    }

    #[test]
    fn rejects_out_of_range_letters() {
        assert!(Regex::parse("0 2", 1).is_err());
        assert!(Regex::parse("b3", 2).is_err());
        assert!(Regex::parse("(0", 1).is_err());
    }

    #[test]
    fn state_elimination_round_trip() {
        for (r, n) in [("0 (1 1)*", 1), ("0 1* | 0 0 b1* | 0 0 1 1*", 1), ("0 (1|2)* 2 b1", 2), ("!", 1), ("()", 2)] {
            let d = Regex::parse(r, n).unwrap().to_dfa(n);
            let back = Regex::from_dfa(&d, n);
            let d2 = Regex::parse(&back.to_string(), n).unwrap().to_dfa(n);
            assert_eq!(d, d2, "{r} => {back}");
        }
    }
}
