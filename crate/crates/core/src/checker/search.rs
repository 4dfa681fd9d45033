use std::collections::{BTreeSet, HashMap, VecDeque};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use super::{check_domain, eval_closed, eval_sentence, CheckError, SetEnv};
use crate::automata::{Dfa, RegularSet};
use crate::completion::completion_defs;
use crate::models::{Component, ModelError, ModelPresentation};
use crate::simpleform::prepare;
use crate::sns::build_mod;
use crate::syntax::{validate_formula, Formula, Program, Query, Signature};

/// Limits of the model search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub max_roots: usize,
    pub max_nonroots: usize,
    pub max_prefix: usize,
    pub max_period: usize,
    pub max_multiplicity: usize,
    /// Addresses shorter than this are told apart by exact length.
    pub granularity: usize,
    /// Longer addresses are told apart by length modulo this period.
    pub length_period: usize,
    #[serde(serialize_with = "secs")]
    pub budget: Duration,
}

fn secs<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_roots: 1,
            max_nonroots: 1,
            max_prefix: 2,
            max_period: 2,
            max_multiplicity: 1,
            granularity: 2,
            length_period: 2,
            budget: Duration::from_secs(60),
        }
    }
}

/// Outcome of a search. There is deliberately no variant claiming that no
/// model exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Sat {
        witness: ModelPresentation,
        /// Candidates evaluated, the witness included.
        candidates: usize,
    },
    NoModelWithinBounds {
        bounds: Bounds,
        candidates: usize,
        /// Set when the time budget ran out before the space was exhausted:
        /// the component multiset being searched at that point.
        frontier: Option<String>,
    },
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat { .. })
    }

    pub fn witness(&self) -> Option<&ModelPresentation> {
        match self {
            Verdict::Sat { witness, .. } => Some(witness),
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::Sat { .. } => "SAT",
            Verdict::NoModelWithinBounds { .. } => "NO_MODEL_WITHIN_BOUNDS",
        }
    }

    pub fn to_value(&self) -> serde_json::Value {
        match self {
            Verdict::Sat { witness, candidates } => serde_json::json!({
                "verdict": self.kind(),
                "candidates": candidates,
                "witness": crate::models::file::to_value(witness),
            }),
            Verdict::NoModelWithinBounds { bounds, candidates, frontier } => serde_json::json!({
                "verdict": self.kind(),
                "candidates": candidates,
                "bounds": bounds,
                "budget_exhausted": frontier.is_some(),
                "frontier": frontier,
            }),
        }
    }
}

/// Component multisets within the bounds, in search order.
fn multisets(sig: &Signature, b: &Bounds) -> Vec<Vec<(Component, usize)>> {
    let n = sig.n();
    let mut nonroots: BTreeSet<Component> = BTreeSet::new();
    if n > 0 {
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        let mut all = vec![vec![]];
        for _ in 0..b.max_prefix.max(b.max_period) {
            words = words
                .iter()
                .flat_map(|w| (0..n).map(move |f| [w.as_slice(), &[f]].concat()))
                .collect();
            all.extend(words.iter().cloned());
        }
        for p in all.iter().filter(|w| w.len() <= b.max_prefix) {
            for q in all.iter().filter(|w| !w.is_empty() && w.len() <= b.max_period) {
                nonroots.insert(Component::nonroot(p.clone(), q.clone()).canonical());
            }
        }
    }
    let nonroots: Vec<Component> = nonroots.into_iter().collect();

    fn pick(
        items: &[Component],
        from: usize,
        left: usize,
        mult: usize,
        cur: &mut Vec<(Component, usize)>,
        out: &mut Vec<Vec<(Component, usize)>>,
    ) {
        out.push(cur.clone());
        for i in from..items.len() {
            for c in 1..=mult.min(left) {
                cur.push((items[i].clone(), c));
                pick(items, i + 1, left - c, mult, cur, out);
                cur.pop();
            }
        }
    }
    let mut nr = Vec::new();
    pick(&nonroots, 0, b.max_nonroots, b.max_multiplicity, &mut Vec::new(), &mut nr);

    let mut out = Vec::new();
    for r in 0..=b.max_roots.min(b.max_multiplicity) {
        for set in &nr {
            let mut extra = Vec::new();
            if r > 0 {
                extra.push((Component::Root, r));
            }
            extra.extend(set.iter().cloned());
            if sig.k() == 0 && extra.is_empty() {
                continue;
            }
            out.push(extra);
        }
    }
    let key = |e: &Vec<(Component, usize)>| {
        let count: usize = e.iter().map(|(_, c)| c).sum();
        let len: usize = e
            .iter()
            .map(|(c, m)| {
                m * match c {
                    Component::Root => 0,
                    Component::NonRoot { prefix, period } => prefix.len() + period.len(),
                }
            })
            .sum();
        (count, len, e.clone())
    };
    out.sort_by_key(key);
    out
}

/// Cells of the canonical partition of `d`: triples of a component index,
/// a state of its minimal acceptor and a length class. The component index
/// keeps components apart when the minimal acceptor merges their states.
struct Cells {
    d: RegularSet,
    zeros: usize,
    classes: usize,
    granularity: usize,
    cells: Vec<(usize, u32, usize)>,
}

impl Cells {
    fn new(d: &RegularSet, components: usize, granularity: usize, period: usize) -> Cells {
        let mut cells = Cells {
            d: d.clone(),
            zeros: components + 2,
            classes: granularity + period.max(1),
            granularity,
            cells: Vec::new(),
        };
        let dfa = &d.dfa;
        let total = dfa.states() * cells.zeros * cells.classes;
        let mut seen = vec![false; total];
        let start = cells.encode(dfa.start, 0, 0);
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut found = Vec::new();
        while let Some(s) = queue.pop_front() {
            let (z, q, c) = cells.decode(s);
            if dfa.accept[q as usize] {
                found.push((z, q, c));
            }
            for sym in 0..dfa.alphabet {
                let t = cells.step(s, sym);
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        found.sort_unstable();
        cells.cells = found;
        cells
    }

    fn encode(&self, q: u32, z: usize, c: usize) -> usize {
        (q as usize * self.zeros + z) * self.classes + c
    }

    fn decode(&self, s: usize) -> (usize, u32, usize) {
        let c = s % self.classes;
        let rest = s / self.classes;
        (rest % self.zeros, (rest / self.zeros) as u32, c)
    }

    fn step(&self, s: usize, sym: usize) -> usize {
        let (z, q, c) = self.decode(s);
        // Symbol 0 is the component separator; once past the leading zeros
        // any further zero leads out of `d`.
        let z = if sym == 0 { (z + 1).min(self.zeros - 1) } else { z };
        let c = if c + 1 < self.classes { c + 1 } else { self.granularity };
        self.encode(self.d.dfa.next(q, sym), z, c)
    }

    fn len(&self) -> usize {
        self.cells.len()
    }

    /// The union of the chosen cells.
    fn union(&self, chosen: &[usize]) -> RegularSet {
        let dfa = &self.d.dfa;
        let total = dfa.states() * self.zeros * self.classes;
        let mut accept = vec![false; total];
        for &i in chosen {
            let (z, q, c) = self.cells[i];
            accept[self.encode(q, z, c)] = true;
        }
        let product = Dfa::from_partial(
            dfa.alphabet,
            total,
            self.encode(dfa.start, 0, 0),
            |s| accept[s],
            |s, sym| Some(self.step(s, sym)),
        );
        RegularSet::from_dfa(self.d.n(), product)
    }
}

/// Subsets of `0..n` of each size in turn, lexicographic within a size.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

struct Colorings {
    bits: usize,
    size: usize,
    cur: Option<Vec<usize>>,
}

impl Iterator for Colorings {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        loop {
            if self.size > self.bits {
                return None;
            }
            match &mut self.cur {
                None => {
                    self.cur = Some((0..self.size).collect());
                    return self.cur.clone();
                }
                Some(c) => {
                    if next_combination(c, self.bits) {
                        return Some(c.clone());
                    }
                    self.size += 1;
                    self.cur = None;
                }
            }
        }
    }
}

const CHUNK: usize = 64;

fn describe(extra: &[(Component, usize)], sig: &Signature) -> String {
    if extra.is_empty() {
        return "named roots only".to_string();
    }
    let names = |w: &[usize]| w.iter().map(|&f| sig.functions[f].as_str()).collect::<Vec<_>>().join(" ");
    extra
        .iter()
        .map(|(c, m)| {
            let c = match c {
                Component::Root => "root".to_string(),
                Component::NonRoot { prefix, period } => format!("nonroot [{}]({})^w", names(prefix), names(period)),
            };
            if *m > 1 {
                format!("{m} x {c}")
            } else {
                c
            }
        })
        .collect::<Vec<_>>()
        .join(", ")
}

/// Searches the presentations within `b` for a model of `f`.
pub fn solve(f: &Formula, sig: &Signature, b: &Bounds) -> Result<Verdict, CheckError> {
    validate_formula(f, sig, true)?;
    let matrix = build_mod(prepare(f).formula())?;
    let start = Instant::now();
    let m = sig.m();
    let mut candidates = 0usize;
    for extra in multisets(sig, b) {
        let base = match ModelPresentation::new(sig.clone(), extra.clone(), vec![crate::automata::Regex::Empty; m]) {
            Ok(p) => p,
            Err(ModelError::EmptyDomain) => continue,
            Err(e) => return Err(e.into()),
        };
        let d = base.embed();
        if !check_domain(&d, sig)? {
            return Err(CheckError::Internal(format!(
                "embedded domain of [{}] fails domain(X)",
                describe(&extra, sig)
            )));
        }
        let cells = Cells::new(&d, base.components().len(), b.granularity, b.length_period);
        let c = cells.len();
        let mut colorings = Colorings {
            bits: m * c,
            size: 0,
            cur: None,
        };
        let mut cache: HashMap<Vec<usize>, RegularSet> = HashMap::new();
        loop {
            if start.elapsed() >= b.budget {
                return Ok(Verdict::NoModelWithinBounds {
                    bounds: b.clone(),
                    candidates,
                    frontier: Some(describe(&extra, sig)),
                });
            }
            let chunk: Vec<Vec<usize>> = colorings.by_ref().take(CHUNK).collect();
            if chunk.is_empty() {
                break;
            }
            // Per-predicate cell lists.
            let split = |bits: &[usize]| -> Vec<Vec<usize>> {
                let mut per = vec![Vec::new(); m];
                for &x in bits {
                    per[x / c].push(x % c);
                }
                per
            };
            for bits in &chunk {
                for cellset in split(bits) {
                    cache.entry(cellset.clone()).or_insert_with(|| cells.union(&cellset));
                }
            }
            let hit = chunk
                .par_iter()
                .map(|bits| -> Result<bool, CheckError> {
                    let preds: Vec<RegularSet> = split(bits).iter().map(|s| cache[s].clone()).collect();
                    eval_closed(&matrix, &SetEnv::for_model(&d, &preds))
                })
                .enumerate()
                .find_first(|(_, r)| !matches!(r, Ok(false)));
            match hit {
                Some((_, Err(e))) => return Err(e),
                Some((i, Ok(_))) => {
                    candidates += i + 1;
                    let preds = split(&chunk[i])
                        .iter()
                        .map(|s| cache[s].to_regex())
                        .collect();
                    let witness = base.with_predicates(preds)?;
                    if !eval_sentence(&witness, f)? {
                        return Err(CheckError::Internal("witness failed re-verification".into()));
                    }
                    return Ok(Verdict::Sat { witness, candidates });
                }
                None => candidates += chunk.len(),
            }
        }
    }
    Ok(Verdict::NoModelWithinBounds {
        bounds: b.clone(),
        candidates,
        frontier: None,
    })
}

/// Search outcome for one direction of an entailment question.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Direction {
    /// The sentence a countermodel must satisfy.
    pub sentence: Formula,
    pub verdict: Verdict,
}

impl Direction {
    pub fn countermodel(&self) -> Option<&ModelPresentation> {
        self.verdict.witness()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntailReport {
    pub query: Formula,
    /// Countermodels to `comp(P) ⊨ Q`: models of `defs & ~Q`.
    pub positive: Direction,
    /// Countermodels to `comp(P) ⊨ ~Q`: models of `defs & Q`.
    pub negative: Direction,
}

/// Looks for countermodels to both `comp(P) ⊨ Q` and `comp(P) ⊨ ~Q`.
pub fn entail(p: &Program, q: &Query, sig: &Signature, b: &Bounds) -> Result<EntailReport, CheckError> {
    let defs = completion_defs(p, sig).conjunction();
    let query = q.to_formula();
    let run = |sentence: Formula| -> Result<Direction, CheckError> {
        let verdict = solve(&sentence, sig, b)?;
        Ok(Direction { sentence, verdict })
    };
    let positive = run(Formula::and(defs.clone(), Formula::not(query.clone())))?;
    let negative = run(Formula::and(defs, query.clone()))?;
    Ok(EntailReport {
        query,
        positive,
        negative,
    })
}
