use std::fmt;

use super::dfa::Dfa;
use super::{Address, AutomatonError, Letter, Regex};

/// A regular set of addresses for a signature with `n` function symbols,
/// kept as a minimal complete DFA.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularSet {
    n: usize,
    pub(crate) dfa: Dfa,
}

impl RegularSet {
    pub(crate) fn from_dfa(n: usize, dfa: Dfa) -> RegularSet {
        debug_assert_eq!(dfa.alphabet, 2 * n + 1);
        RegularSet {
            n,
            dfa: dfa.minimize(),
        }
    }

    pub fn from_regex(r: &Regex, n: usize) -> RegularSet {
        RegularSet { n, dfa: r.to_dfa(n) }
    }

    pub fn parse(text: &str, n: usize) -> Result<RegularSet, AutomatonError> {
        Ok(RegularSet::from_regex(&Regex::parse(text, n)?, n))
    }

    pub fn empty(n: usize) -> RegularSet {
        RegularSet {
            n,
            dfa: Dfa::empty(2 * n + 1),
        }
    }

    pub fn singleton(w: &Address, n: usize) -> RegularSet {
        let letters: Vec<usize> = w.indices(n).collect();
        let dfa = Dfa::from_partial(
            2 * n + 1,
            letters.len() + 1,
            0,
            |q| q == letters.len(),
            |q, s| (q < letters.len() && letters[q] == s).then_some(q + 1),
        );
        RegularSet::from_dfa(n, dfa)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of states of the minimal acceptor.
    pub fn states(&self) -> usize {
        self.dfa.states()
    }

    pub fn contains(&self, w: &Address) -> bool {
        w.0.iter().all(|l| l.in_range(self.n)) && self.dfa.run(w.indices(self.n))
    }

    /// State of the minimal acceptor reached by `w`.
    pub fn state_of(&self, w: &Address) -> usize {
        w.indices(self.n)
            .fold(self.dfa.start, |q, s| self.dfa.next(q, s)) as usize
    }

    fn combine(&self, other: &RegularSet, op: impl Fn(bool, bool) -> bool) -> Result<RegularSet, AutomatonError> {
        if self.n != other.n {
            return Err(AutomatonError::AlphabetMismatch(self.n, other.n));
        }
        Ok(RegularSet::from_dfa(self.n, self.dfa.product(&other.dfa, op)))
    }

    pub fn union(&self, other: &RegularSet) -> Result<RegularSet, AutomatonError> {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &RegularSet) -> Result<RegularSet, AutomatonError> {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &RegularSet) -> Result<RegularSet, AutomatonError> {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> RegularSet {
        RegularSet {
            n: self.n,
            dfa: self.dfa.complement(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.dfa.is_empty()
    }

    pub fn is_subset(&self, other: &RegularSet) -> bool {
        self.difference(other).map_or(false, |d| d.is_empty())
    }

    /// `{x : x·u ∈ self}`.
    pub fn quotient(&self, u: &[Letter]) -> RegularSet {
        let mut dfa = self.dfa.clone();
        for q in 0..dfa.states() {
            let end = u.iter().fold(q as u32, |p, l| self.dfa.next(p, l.index(self.n)));
            dfa.accept[q] = self.dfa.accept[end as usize];
        }
        RegularSet::from_dfa(self.n, dfa)
    }

    /// Members of length at most `max_len`, shortlex ordered.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Address> {
        let mut out = Vec::new();
        let productive = self.dfa.productive();
        let mut layer: Vec<(Vec<Letter>, u32)> = vec![(Vec::new(), self.dfa.start)];
        for len in 0..=max_len {
            for (w, q) in &layer {
                if self.dfa.accept[*q as usize] {
                    out.push(Address(w.clone()));
                }
            }
            if len == max_len {
                break;
            }
            let mut next = Vec::new();
            for (w, q) in &layer {
                for l in Letter::all(self.n) {
                    let t = self.dfa.next(*q, l.index(self.n));
                    if productive[t as usize] {
                        let mut w2 = w.clone();
                        w2.push(l);
                        next.push((w2, t));
                    }
                }
            }
            layer = next;
        }
        out
    }

    pub fn to_regex(&self) -> Regex {
        Regex::from_dfa(&self.dfa, self.n)
    }
}

impl fmt::Display for RegularSet {
    /// Debug dump: the minimal DFA's transitions, omitting the dead state.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let productive = self.dfa.productive();
        writeln!(f, "states: {}, start: {}", self.dfa.states(), self.dfa.start)?;
        let acc: Vec<usize> = (0..self.dfa.states()).filter(|&q| self.dfa.accept[q]).collect();
        writeln!(f, "accepting: {acc:?}")?;
        for q in 0..self.dfa.states() {
            if !productive[q] {
                continue;
            }
            for l in Letter::all(self.n) {
                let t = self.dfa.next(q as u32, l.index(self.n));
                if productive[t as usize] {
                    writeln!(f, "  {q} --{l}--> {t}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(r: &str, n: usize) -> RegularSet {
        RegularSet::parse(r, n).unwrap()
    }

    fn addr(w: &str, n: usize) -> Address {
        Address::parse(w, n).unwrap()
    }

    #[test]
    fn boolean_operations() {
        let a = set("0 1*", 1);
        let b = set("0 0 1*", 1);
        assert!(a.intersect(&b).unwrap().is_empty());
        let u = a.union(&b).unwrap();
        assert!(u.contains(&addr("0011", 1)));
        assert!(a.is_subset(&u));
        assert!(!u.is_subset(&a));
        assert!(u.difference(&a).unwrap() == b);
    }

    #[test]
    fn quotient_by_suffix() {
        let a = set("0 1*", 1);
        let q = a.quotient(&[Letter::Fwd(1)]);
        assert!(q.contains(&addr("0", 1)));
        assert!(q.contains(&addr("011", 1)));
        assert!(!q.contains(&addr("Lam", 1)));
    }

    #[test]
    fn enumerate_words() {
        let a = set("0 1* | 0 0 b1*", 1);
        let words: Vec<String> = a.words_up_to(3).iter().map(|w| w.to_string()).collect();
        assert_eq!(words, vec!["0", "00", "01", "00b1", "011"]);
    }

    #[test]
    fn singleton_and_regex_round_trip() {
        let s = RegularSet::singleton(&addr("01b1", 1), 1);
        assert_eq!(s.words_up_to(5).len(), 1);
        let back = RegularSet::from_regex(&s.to_regex(), 1);
        assert_eq!(back, s);
    }

    #[test]
    fn out_of_range_address_is_not_member() {
        let a = set(".*", 1);
        assert!(!a.contains(&Address(vec![Letter::Fwd(2)])));
    }
}
