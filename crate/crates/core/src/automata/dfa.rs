use std::collections::{HashMap, VecDeque};

/// A complete deterministic automaton over the symbols `0..alphabet`.
///
/// Transitions are stored densely, row by row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Dfa {
    pub alphabet: usize,
    pub trans: Vec<u32>,
    pub accept: Vec<bool>,
    pub start: u32,
}

impl Dfa {
    pub fn states(&self) -> usize {
        self.accept.len()
    }

    #[inline]
    pub fn next(&self, q: u32, sym: usize) -> u32 {
        self.trans[q as usize * self.alphabet + sym]
    }

    /// Single rejecting state.
    pub fn empty(alphabet: usize) -> Dfa {
        Dfa {
            alphabet,
            trans: vec![0; alphabet],
            accept: vec![false],
            start: 0,
        }
    }

    /// Builds a DFA from a partial step function over `states` named states;
    /// missing transitions go to an implicit rejecting sink.
    pub fn from_partial(
        alphabet: usize,
        states: usize,
        start: usize,
        accept: impl Fn(usize) -> bool,
        step: impl Fn(usize, usize) -> Option<usize>,
    ) -> Dfa {
        let sink = states as u32;
        let mut trans = Vec::with_capacity((states + 1) * alphabet);
        for q in 0..states {
            for s in 0..alphabet {
                trans.push(step(q, s).map_or(sink, |t| t as u32));
            }
        }
        trans.extend(std::iter::repeat(sink).take(alphabet));
        let mut acc: Vec<bool> = (0..states).map(accept).collect();
        acc.push(false);
        Dfa {
            alphabet,
            trans,
            accept: acc,
            start: start as u32,
        }
    }

    pub fn run(&self, word: impl IntoIterator<Item = usize>) -> bool {
        let q = word.into_iter().fold(self.start, |q, s| self.next(q, s));
        self.accept[q as usize]
    }

    pub fn complement(&self) -> Dfa {
        let mut out = self.clone();
        out.accept.iter_mut().for_each(|a| *a = !*a);
        out
    }

    /// Reachable part of the synchronous product, accepting by `op`.
    pub fn product(&self, other: &Dfa, op: impl Fn(bool, bool) -> bool) -> Dfa {
        assert_eq!(self.alphabet, other.alphabet, "alphabet mismatch in product");
        let alphabet = self.alphabet;
        let mut index: HashMap<(u32, u32), u32> = HashMap::new();
        let mut pairs = vec![(self.start, other.start)];
        index.insert((self.start, other.start), 0);
        let mut trans = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (a, b) = pairs[i];
            for s in 0..alphabet {
                let key = (self.next(a, s), other.next(b, s));
                let id = *index.entry(key).or_insert_with(|| {
                    pairs.push(key);
                    (pairs.len() - 1) as u32
                });
                trans.push(id);
            }
            i += 1;
        }
        let accept = pairs
            .iter()
            .map(|&(a, b)| op(self.accept[a as usize], other.accept[b as usize]))
            .collect();
        Dfa {
            alphabet,
            trans,
            accept,
            start: 0,
        }
    }

    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.states()];
        let mut queue = VecDeque::from([self.start]);
        seen[self.start as usize] = true;
        while let Some(q) = queue.pop_front() {
            for s in 0..self.alphabet {
                let t = self.next(q, s);
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    pub fn is_empty(&self) -> bool {
        self.reachable()
            .iter()
            .zip(&self.accept)
            .all(|(&r, &a)| !(r && a))
    }

    /// Minimal equivalent DFA (Moore refinement on the reachable part),
    /// with states numbered in breadth-first order from the start.
    pub fn minimize(&self) -> Dfa {
        let reach = self.reachable();
        let live: Vec<u32> = (0..self.states() as u32).filter(|&q| reach[q as usize]).collect();
        let mut class = vec![0u32; self.states()];
        for &q in &live {
            class[q as usize] = self.accept[q as usize] as u32;
        }
        let mut count = {
            let mut any = [false; 2];
            for &q in &live {
                any[class[q as usize] as usize] = true;
            }
            any.iter().filter(|&&b| b).count()
        };
        loop {
            let mut sig_index: HashMap<Vec<u32>, u32> = HashMap::new();
            let mut next_class = vec![0u32; self.states()];
            for &q in &live {
                let mut sig = Vec::with_capacity(self.alphabet + 1);
                sig.push(class[q as usize]);
                for s in 0..self.alphabet {
                    sig.push(class[self.next(q, s) as usize]);
                }
                let n = sig_index.len() as u32;
                next_class[q as usize] = *sig_index.entry(sig).or_insert(n);
            }
            let new_count = sig_index.len();
            class = next_class;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        // Renumber breadth-first for a canonical layout.
        let mut order: HashMap<u32, u32> = HashMap::new();
        let mut reps: Vec<u32> = Vec::new();
        let mut queue = VecDeque::from([self.start]);
        order.insert(class[self.start as usize], 0);
        reps.push(self.start);
        while let Some(q) = queue.pop_front() {
            for s in 0..self.alphabet {
                let t = self.next(q, s);
                let c = class[t as usize];
                if let std::collections::hash_map::Entry::Vacant(e) = order.entry(c) {
                    e.insert(reps.len() as u32);
                    reps.push(t);
                    queue.push_back(t);
                }
            }
        }
        let mut trans = Vec::with_capacity(reps.len() * self.alphabet);
        for &r in &reps {
            for s in 0..self.alphabet {
                trans.push(order[&class[self.next(r, s) as usize]]);
            }
        }
        Dfa {
            alphabet: self.alphabet,
            trans,
            accept: reps.iter().map(|&r| self.accept[r as usize]).collect(),
            start: 0,
        }
    }

    /// States from which some accepting state is reachable.
    pub fn productive(&self) -> Vec<bool> {
        let n = self.states();
        let mut rev: Vec<Vec<u32>> = vec![Vec::new(); n];
        for q in 0..n as u32 {
            for s in 0..self.alphabet {
                rev[self.next(q, s) as usize].push(q);
            }
        }
        let mut good = self.accept.clone();
        let mut stack: Vec<u32> = (0..n as u32).filter(|&q| good[q as usize]).collect();
        while let Some(q) = stack.pop() {
            for &p in &rev[q as usize] {
                if !good[p as usize] {
                    good[p as usize] = true;
                    stack.push(p);
                }
            }
        }
        good
    }
}

/// Nondeterministic automaton without epsilon moves; `accept` may hold on any
/// state.
pub(crate) struct Nfa {
    pub alphabet: usize,
    pub trans: Vec<Vec<Vec<u32>>>,
    pub accept: Vec<bool>,
    pub start: Vec<u32>,
}

impl Nfa {
    pub fn new(alphabet: usize, states: usize) -> Nfa {
        Nfa {
            alphabet,
            trans: vec![vec![Vec::new(); alphabet]; states],
            accept: vec![false; states],
            start: Vec::new(),
        }
    }

    pub fn add(&mut self, from: u32, sym: usize, to: u32) {
        let row = &mut self.trans[from as usize][sym];
        if !row.contains(&to) {
            row.push(to);
        }
    }

    /// Subset construction with interned state sets.
    pub fn determinize(&self) -> Dfa {
        let mut start = self.start.clone();
        start.sort_unstable();
        start.dedup();
        let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut sets = vec![start.clone()];
        index.insert(start, 0);
        let mut trans = Vec::new();
        let mut i = 0;
        let mut scratch: Vec<u32> = Vec::new();
        while i < sets.len() {
            for s in 0..self.alphabet {
                scratch.clear();
                for &q in &sets[i] {
                    scratch.extend_from_slice(&self.trans[q as usize][s]);
                }
                scratch.sort_unstable();
                scratch.dedup();
                let id = match index.get(&scratch) {
                    Some(&id) => id,
                    None => {
                        let id = sets.len() as u32;
                        index.insert(scratch.clone(), id);
                        sets.push(scratch.clone());
                        id
                    }
                };
                trans.push(id);
            }
            i += 1;
        }
        let accept = sets
            .iter()
            .map(|set| set.iter().any(|&q| self.accept[q as usize]))
            .collect();
        Dfa {
            alphabet: self.alphabet,
            trans,
            accept,
            start: 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Words over {0,1} with an even number of 1s, built redundantly.
    fn even_ones_redundant() -> Dfa {
        Dfa::from_partial(2, 4, 0, |q| q % 2 == 0, |q, s| Some(if s == 1 { (q + 1) % 4 } else { q }))
    }

    #[test]
    fn minimize_merges_equivalent_states() {
        let d = even_ones_redundant();
        let m = d.minimize();
        assert_eq!(m.states(), 2);
        for w in [vec![], vec![1, 1], vec![0, 1, 0, 1], vec![1]] {
            assert_eq!(d.run(w.clone()), m.run(w));
        }
    }

    #[test]
    fn complement_and_product() {
        let d = even_ones_redundant();
        let both = d.product(&d.complement(), |a, b| a && b);
        assert!(both.is_empty());
        let either = d.product(&d.complement(), |a, b| a || b);
        assert!(either.complement().is_empty());
    }

    #[test]
    fn subset_construction() {
        // Words ending in 1.
        let mut n = Nfa::new(2, 2);
        n.start = vec![0];
        n.add(0, 0, 0);
        n.add(0, 1, 0);
        n.add(0, 1, 1);
        n.accept[1] = true;
        let d = n.determinize().minimize();
        assert!(d.run([0, 1]));
        assert!(!d.run([1, 0]));
        assert_eq!(d.states(), 2);
    }
}
