//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use moncomp::automata::{Address, Letter, Regex};
use moncomp::models::{Component, ModelPresentation};
use moncomp::sns::{SnsFormula, SnsTerm};
use moncomp::syntax::{Formula, Signature, Term};
use rand::rngs::StdRng;
use rand::Rng;

pub fn sig(k: usize, n: usize, m: usize) -> Signature {
    let c = ["a", "b", "c"];
    let f = ["f", "g", "h"];
    let p = ["p", "q", "r"];
    Signature::from_names(&c[..k], &f[..n], &p[..m])
}

// ---------------------------------------------------------------------------
// Finite first-order structures.

#[derive(Debug, Clone)]
pub struct Structure {
    pub size: usize,
    pub consts: Vec<usize>,
    pub funcs: Vec<Vec<usize>>,
    pub preds: Vec<Vec<bool>>,
}

pub fn random_structure(rng: &mut StdRng, s: &Signature) -> Structure {
    let size = rng.gen_range(1..=4);
    Structure {
        size,
        consts: (0..s.k()).map(|_| rng.gen_range(0..size)).collect(),
        funcs: (0..s.n()).map(|_| (0..size).map(|_| rng.gen_range(0..size)).collect()).collect(),
        preds: (0..s.m()).map(|_| (0..size).map(|_| rng.gen_bool(0.5)).collect()).collect(),
    }
}

fn term_value(t: &Term, m: &Structure, env: &HashMap<String, usize>) -> usize {
    match t {
        Term::Var(v) => env[v],
        Term::Const(c) => m.consts[*c],
        Term::Apply(f, t) => m.funcs[*f][term_value(t, m, env)],
    }
}

/// Truth by brute force over the finite universe.
pub fn holds(f: &Formula, m: &Structure, env: &mut HashMap<String, usize>) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(p, t) => m.preds[*p][term_value(t, m, env)],
        Formula::Eq(a, b) => term_value(a, m, env) == term_value(b, m, env),
        Formula::Not(a) => !holds(a, m, env),
        Formula::And(a, b) => holds(a, m, env) && holds(b, m, env),
        Formula::Or(a, b) => holds(a, m, env) || holds(b, m, env),
        Formula::Implies(a, b) => !holds(a, m, env) || holds(b, m, env),
        Formula::Iff(a, b) => holds(a, m, env) == holds(b, m, env),
        Formula::Exists(v, a) | Formula::Forall(v, a) => {
            let want = matches!(f, Formula::Exists(..));
            let saved = env.get(v).copied();
            let mut result = !want;
            for e in 0..m.size {
                env.insert(v.clone(), e);
                if holds(a, m, env) == want {
                    result = want;
                    break;
                }
            }
            match saved {
                Some(e) => env.insert(v.clone(), e),
                None => env.remove(v),
            };
            result
        }
    }
}

fn random_term(rng: &mut StdRng, s: &Signature, vars: &[String], depth: usize) -> Term {
    let leaves = vars.len() + s.k();
    let leaf = rng.gen_range(0..leaves);
    let mut t = if leaf < vars.len() {
        Term::var(&vars[leaf])
    } else {
        Term::Const(leaf - vars.len())
    };
    if s.n() > 0 {
        for _ in 0..rng.gen_range(0..=depth) {
            t = Term::apply(rng.gen_range(0..s.n()), t);
        }
    }
    t
}

fn random_atom(rng: &mut StdRng, s: &Signature, vars: &[String]) -> Formula {
    if vars.is_empty() && s.k() == 0 {
        return if rng.gen_bool(0.5) { Formula::True } else { Formula::False };
    }
    if s.m() > 0 && rng.gen_bool(0.5) {
        Formula::Atom(rng.gen_range(0..s.m()), random_term(rng, s, vars, 2))
    } else {
        Formula::Eq(random_term(rng, s, vars, 2), random_term(rng, s, vars, 2))
    }
}

/// Random closed formula with at most `qdepth` nested quantifiers.
pub fn random_formula(rng: &mut StdRng, s: &Signature, vars: &mut Vec<String>, size: usize, qdepth: usize) -> Formula {
    if size == 0 {
        return random_atom(rng, s, vars);
    }
    match rng.gen_range(0..7) {
        0 => Formula::not(random_formula(rng, s, vars, size - 1, qdepth)),
        1..=3 => {
            let l = rng.gen_range(0..size);
            let a = random_formula(rng, s, vars, l, qdepth);
            let b = random_formula(rng, s, vars, size - 1 - l, qdepth);
            match rng.gen_range(0..4) {
                0 => Formula::and(a, b),
                1 => Formula::or(a, b),
                2 => Formula::implies(a, b),
                _ => Formula::iff(a, b),
            }
        }
        _ if qdepth > 0 => {
            let v = format!("V{}", vars.len());
            vars.push(v.clone());
            let body = random_formula(rng, s, vars, size - 1, qdepth - 1);
            vars.pop();
            if rng.gen_bool(0.5) {
                Formula::exists(&v, body)
            } else {
                Formula::forall(&v, body)
            }
        }
        _ => random_atom(rng, s, vars),
    }
}

// ---------------------------------------------------------------------------
// Regular expressions, matched by backtracking over positions.

fn ends(r: &Regex, w: &[Letter], from: usize, n: usize) -> Vec<usize> {
    let mut out = match r {
        Regex::Empty => vec![],
        Regex::Epsilon => vec![from],
        Regex::Letter(l) => {
            if w.get(from) == Some(l) {
                vec![from + 1]
            } else {
                vec![]
            }
        }
        Regex::Any => {
            if from < w.len() && w[from].in_range(n) {
                vec![from + 1]
            } else {
                vec![]
            }
        }
        Regex::Concat(xs) => {
            let mut cur = vec![from];
            for x in xs {
                cur = cur.iter().flat_map(|&p| ends(x, w, p, n)).collect();
                cur.sort();
                cur.dedup();
            }
            cur
        }
        Regex::Alt(xs) => xs.iter().flat_map(|x| ends(x, w, from, n)).collect(),
        Regex::Star(x) => {
            let mut seen = vec![from];
            let mut frontier = vec![from];
            while let Some(p) = frontier.pop() {
                for q in ends(x, w, p, n) {
                    if !seen.contains(&q) {
                        seen.push(q);
                        frontier.push(q);
                    }
                }
            }
            seen
        }
    };
    out.sort();
    out.dedup();
    out
}

pub fn regex_matches(r: &Regex, w: &Address, n: usize) -> bool {
    ends(r, &w.0, 0, n).contains(&w.len())
}

/// All words over `2n+1` letters up to `max_len`, shortest first.
pub fn words(n: usize, max_len: usize) -> Vec<Address> {
    let mut out = vec![Address::lambda()];
    let mut layer = vec![Address::lambda()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| Letter::all(n).map(move |l| w.push(l)))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

pub fn random_word(rng: &mut StdRng, n: usize, max_len: usize) -> Address {
    let len = rng.gen_range(0..=max_len);
    Address((0..len).map(|_| Letter::from_index(rng.gen_range(0..2 * n + 1), n)).collect())
}

pub fn random_regex(rng: &mut StdRng, n: usize, size: usize) -> Regex {
    if size == 0 {
        return match rng.gen_range(0..6) {
            0 => Regex::Epsilon,
            1 => Regex::Any,
            _ => Regex::Letter(Letter::from_index(rng.gen_range(0..2 * n + 1), n)),
        };
    }
    match rng.gen_range(0..3) {
        0 => Regex::Star(Box::new(random_regex(rng, n, size - 1))),
        1 => {
            let l = rng.gen_range(0..size);
            Regex::Concat(vec![random_regex(rng, n, l), random_regex(rng, n, size - 1 - l)])
        }
        _ => {
            let l = rng.gen_range(0..size);
            Regex::Alt(vec![random_regex(rng, n, l), random_regex(rng, n, size - 1 - l)])
        }
    }
}

// ---------------------------------------------------------------------------
// First-order successor formulas evaluated on explicit words.

pub fn sns_term_value(t: &SnsTerm, env: &HashMap<String, Address>) -> Address {
    match t {
        SnsTerm::Lambda => Address::lambda(),
        SnsTerm::Var(v) => env[v].clone(),
        SnsTerm::Succ(l, t) => sns_term_value(t, env).push(*l),
    }
}

/// Naive truth with object quantifiers ranging over `universe`. Exact when
/// every quantifier is relativized to a set contained in `universe`.
pub fn sns_holds(
    f: &SnsFormula,
    sets: &HashMap<String, Regex>,
    n: usize,
    universe: &[Address],
    env: &mut HashMap<String, Address>,
) -> bool {
    let rec = |g: &SnsFormula, env: &mut HashMap<String, Address>| sns_holds(g, sets, n, universe, env);
    match f {
        SnsFormula::True => true,
        SnsFormula::False => false,
        SnsFormula::Eq(a, b) => sns_term_value(a, env) == sns_term_value(b, env),
        SnsFormula::Member(t, s) => regex_matches(&sets[s], &sns_term_value(t, env), n),
        SnsFormula::Not(a) => !rec(a, env),
        SnsFormula::And(xs) => xs.iter().all(|x| rec(x, env)),
        SnsFormula::Or(xs) => xs.iter().any(|x| rec(x, env)),
        SnsFormula::Xor(a, b) => rec(a, env) != rec(b, env),
        SnsFormula::Implies(a, b) => !rec(a, env) || rec(b, env),
        SnsFormula::Iff(a, b) => rec(a, env) == rec(b, env),
        SnsFormula::Ex1(v, a) | SnsFormula::All1(v, a) => {
            let want = matches!(f, SnsFormula::Ex1(..));
            let saved = env.get(v).cloned();
            let mut result = !want;
            for w in universe {
                env.insert(v.clone(), w.clone());
                if rec(a, env) == want {
                    result = want;
                    break;
                }
            }
            match saved {
                Some(w) => env.insert(v.clone(), w),
                None => env.remove(v),
            };
            result
        }
        SnsFormula::Ex2(..) | SnsFormula::All2(..) => panic!("second-order quantifier in naive evaluation"),
    }
}

fn random_letter(rng: &mut StdRng, n: usize) -> Letter {
    Letter::from_index(rng.gen_range(0..2 * n + 1), n)
}

pub fn random_sns_term(rng: &mut StdRng, n: usize, vars: &[&str], depth: usize) -> SnsTerm {
    let mut t = if vars.is_empty() || rng.gen_bool(0.2) {
        SnsTerm::Lambda
    } else {
        SnsTerm::var(vars[rng.gen_range(0..vars.len())])
    };
    for _ in 0..rng.gen_range(0..=depth) {
        t = SnsTerm::succ(random_letter(rng, n), t);
    }
    t
}

/// Random first-order formula over object variables `vars` and the given
/// set variables. Quantifiers are relativized to `guard`.
pub fn random_fo_sns(
    rng: &mut StdRng,
    n: usize,
    vars: &mut Vec<&'static str>,
    sets: &[&str],
    guard: &str,
    size: usize,
) -> SnsFormula {
    const NAMES: [&str; 4] = ["u", "v", "w", "z"];
    if size == 0 {
        return if rng.gen_bool(0.5) {
            SnsFormula::Eq(random_sns_term(rng, n, vars, 2), random_sns_term(rng, n, vars, 2))
        } else {
            SnsFormula::member(random_sns_term(rng, n, vars, 2), sets[rng.gen_range(0..sets.len())])
        };
    }
    let sub = |rng: &mut StdRng, vars: &mut Vec<&'static str>, s| random_fo_sns(rng, n, vars, sets, guard, s);
    match rng.gen_range(0..8) {
        0 => SnsFormula::not(sub(rng, vars, size - 1)),
        1..=5 => {
            let l = rng.gen_range(0..size);
            let a = sub(rng, vars, l);
            let b = sub(rng, vars, size - 1 - l);
            match rng.gen_range(0..5) {
                0 => SnsFormula::And(vec![a, b]),
                1 => SnsFormula::Or(vec![a, b]),
                2 => SnsFormula::xor(a, b),
                3 => SnsFormula::implies(a, b),
                _ => SnsFormula::Iff(Box::new(a), Box::new(b)),
            }
        }
        _ => {
            let v = NAMES[rng.gen_range(0..NAMES.len())];
            vars.push(v);
            let body = sub(rng, vars, size - 1);
            vars.pop();
            let g = SnsFormula::member(SnsTerm::var(v), guard);
            if rng.gen_bool(0.5) {
                SnsFormula::ex1(v, SnsFormula::And(vec![g, body]))
            } else {
                SnsFormula::all1(v, SnsFormula::implies(g, body))
            }
        }
    }
}

/// Random formula of the full successor language, for text round trips.
pub fn random_sns(rng: &mut StdRng, n: usize, size: usize) -> SnsFormula {
    const OBJ: [&str; 4] = ["x", "y", "_v1", "z2"];
    const SET: [&str; 4] = ["X", "Y1", "Y2", "Zs"];
    let obj = |rng: &mut StdRng| OBJ[rng.gen_range(0..OBJ.len())];
    let set = |rng: &mut StdRng| SET[rng.gen_range(0..SET.len())];
    if size == 0 {
        return match rng.gen_range(0..4) {
            0 => {
                if rng.gen_bool(0.5) {
                    SnsFormula::True
                } else {
                    SnsFormula::False
                }
            }
            1 => SnsFormula::Eq(random_sns_term(rng, n, &OBJ, 3), random_sns_term(rng, n, &OBJ, 3)),
            _ => SnsFormula::member(random_sns_term(rng, n, &OBJ, 3), set(rng)),
        };
    }
    match rng.gen_range(0..12) {
        0 => SnsFormula::not(random_sns(rng, n, size - 1)),
        1 | 2 => {
            let parts = rng.gen_range(0..=3.min(size));
            let mut xs = Vec::new();
            for _ in 0..parts {
                xs.push(random_sns(rng, n, (size - 1) / parts.max(1)));
            }
            if rng.gen_bool(0.5) {
                SnsFormula::And(xs)
            } else {
                SnsFormula::Or(xs)
            }
        }
        3..=5 => {
            let l = rng.gen_range(0..size);
            let a = Box::new(random_sns(rng, n, l));
            let b = Box::new(random_sns(rng, n, size - 1 - l));
            match rng.gen_range(0..3) {
                0 => SnsFormula::Xor(a, b),
                1 => SnsFormula::Implies(a, b),
                _ => SnsFormula::Iff(a, b),
            }
        }
        6 | 7 => SnsFormula::Ex1(obj(rng).into(), Box::new(random_sns(rng, n, size - 1))),
        8 | 9 => SnsFormula::All1(obj(rng).into(), Box::new(random_sns(rng, n, size - 1))),
        10 => SnsFormula::Ex2(set(rng).into(), Box::new(random_sns(rng, n, size - 1))),
        _ => SnsFormula::All2(set(rng).into(), Box::new(random_sns(rng, n, size - 1))),
    }
}

// ---------------------------------------------------------------------------
// Model catalog and first-order functions read off a domain set.

fn rx(text: &str, n: usize) -> Regex {
    Regex::parse(text, n).unwrap()
}

pub fn catalog() -> Vec<ModelPresentation> {
    let nr = |p: &[usize], q: &[usize]| Component::nonroot(p.to_vec(), q.to_vec());
    let entries: Vec<(usize, usize, Vec<(Component, usize)>, Vec<&str>)> = vec![
        (1, 1, vec![], vec!["0"]),
        (1, 1, vec![(Component::Root, 1)], vec!["0 1*"]),
        (1, 1, vec![(nr(&[], &[0]), 1)], vec!["0 0 .*"]),
        (1, 1, vec![(nr(&[0, 0, 0], &[0]), 1)], vec!["!"]),
        (1, 1, vec![(Component::Root, 2), (nr(&[], &[0]), 1)], vec!["0 0 0 1 1*"]),
        (1, 2, vec![], vec!["0 (1 | 2)*"]),
        (1, 2, vec![(nr(&[], &[0, 1]), 1)], vec!["0 0 b1 .*"]),
        (1, 2, vec![(nr(&[1, 1, 0], &[0, 1, 1]), 1)], vec!["0 0 b2 b2 b1"]),
        (1, 2, vec![(Component::Root, 1), (nr(&[], &[1]), 2)], vec!["0 0 0 .*"]),
        (1, 2, vec![(nr(&[0], &[1, 0]), 1), (nr(&[1], &[0, 0, 1]), 1)], vec!["0 0 (b1 | b2)*"]),
        (2, 1, vec![], vec!["0 0 1*", "0"]),
        (2, 1, vec![(nr(&[], &[0]), 1)], vec!["0 0 0 b1 b1", "0 0 0 1*"]),
        (2, 2, vec![], vec!["0 0 (1 2)*", "0 1"]),
        (2, 2, vec![(nr(&[0], &[1]), 1)], vec!["0 0 0 b1 b2*", "!"]),
        (2, 2, vec![(nr(&[0, 1, 0], &[1, 0, 0]), 1), (Component::Root, 1)], vec![".*", "0 0 0 0 2*"]),
        (0, 1, vec![(Component::Root, 1)], vec!["0 1 1"]),
        (0, 1, vec![(nr(&[], &[0]), 1)], vec!["0 b1*"]),
        (0, 1, vec![(Component::Root, 1), (nr(&[0, 0], &[0]), 1)], vec!["0 0 .*"]),
        (0, 2, vec![(nr(&[], &[0, 1]), 1)], vec!["0 (b1 b2)*"]),
        (0, 2, vec![(Component::Root, 1)], vec!["0 2 1*"]),
        (0, 2, vec![(nr(&[1], &[0, 0, 1]), 2)], vec!["0 0 b2 .*"]),
        (0, 2, vec![(nr(&[0, 1, 1], &[1, 1, 0]), 1), (nr(&[], &[1]), 1)], vec!["0 b1 b2 b2"]),
    ];
    entries
        .into_iter()
        .map(|(k, n, extra, preds)| {
            let s = sig(k, n, preds.len());
            let preds = preds.iter().map(|r| rx(r, n)).collect();
            ModelPresentation::new(s, extra, preds).unwrap()
        })
        .collect()
}

/// `f_i` (0-based) on the structure carved out by `contains`, or `None`
/// when the image is undefined.
pub fn apply_fn(contains: &dyn Fn(&Address) -> bool, i: usize, w: &Address) -> Option<Address> {
    let fwd = w.push(Letter::Fwd(i as u16 + 1));
    if contains(&fwd) {
        return Some(fwd);
    }
    match w.last() {
        Some(Letter::Bar(b)) if b as usize == i + 1 => w.parent(),
        _ => None,
    }
}

/// First-order witness search for the back-and-forth comparison of two
/// non-root components: elements are addressed by (spine depth, word of
/// forward functions), normalized so the word does not start with the
/// spine symbol that leads back up.
pub mod spine {
    use moncomp::models::Component;

    #[derive(Debug, Clone, PartialEq, Eq, Hash)]
    pub struct Elem {
        pub depth: usize,
        pub word: Vec<usize>,
    }

    pub fn apply(c: &Component, e: &Elem, f: usize) -> Elem {
        if e.word.is_empty() && e.depth >= 1 && c.signature_at(e.depth) == Some(f) {
            return Elem { depth: e.depth - 1, word: vec![] };
        }
        let mut word = e.word.clone();
        word.push(f);
        Elem { depth: e.depth, word }
    }

    /// Unique predecessor: every element of a non-root component has one.
    pub fn pred(c: &Component, e: &Elem) -> (usize, Elem) {
        match e.word.split_last() {
            Some((&f, rest)) => (f, Elem { depth: e.depth, word: rest.to_vec() }),
            None => (c.signature_at(e.depth + 1).unwrap(), Elem { depth: e.depth + 1, word: vec![] }),
        }
    }
}
