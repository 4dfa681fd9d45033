//! Finite presentations of countable models of Clark's equational theory
//! and their embedding into the tree of addresses.
//!
//! A model is a disjoint union of components. A root component is a copy of
//! the term structure over one constant. A non-root component has an
//! infinite descending spine `d_0, d_1, ...` with `h_i(d_i) = d_(i-1)`; the
//! sequence `h_1 h_2 ...` is its signature, here always a finite prefix
//! followed by a repeated period.

pub(crate) mod file;

use thiserror::Error;

use crate::automata::{Address, AutomatonError, Dfa, Letter, Regex, RegularSet};
use crate::syntax::{Signature, SyntaxError};

pub use file::{from_json, to_json};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("non-root components need at least one function symbol")]
    NonRootWithoutFunctions,
    #[error("non-root component has an empty period")]
    EmptyPeriod,
    #[error("function index {0} is out of range")]
    FunctionOutOfRange(usize),
    #[error("unknown function symbol `{0}`")]
    UnknownFunction(String),
    #[error("no coloring given for predicate `{0}`")]
    MissingPredicate(String),
    #[error("coloring given for undeclared predicate `{0}`")]
    UnknownPredicate(String),
    #[error("component count must be at least 1")]
    ZeroCount,
    #[error("model has an empty domain")]
    EmptyDomain,
    #[error("predicate `{name}`: {source}")]
    Regex { name: String, source: AutomatonError },
    #[error("malformed model file: {0}")]
    Format(String),
    #[error(transparent)]
    Signature(#[from] SyntaxError),
    #[error("address {0} is not in the domain")]
    NotInDomain(String),
    #[error("f{func}({addr}) is undefined: the set violates the domain conditions")]
    UndefinedImage { func: usize, addr: String },
}

impl ModelError {
    pub fn is_parse_error(&self) -> bool {
        match self {
            ModelError::Format(_) => true,
            ModelError::Regex { source, .. } => matches!(source, AutomatonError::Regex { .. }),
            ModelError::Signature(e) => e.is_parse_error(),
            _ => false,
        }
    }
}

/// One component of a model. Function indices are 0-based positions in the
/// signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    Root,
    NonRoot { prefix: Vec<usize>, period: Vec<usize> },
}

fn primitive_root(w: &[usize]) -> &[usize] {
    let n = w.len();
    (1..=n)
        .find(|&d| n % d == 0 && (d..n).all(|i| w[i] == w[i - d]))
        .map_or(w, |d| &w[..d])
}

impl Component {
    pub fn nonroot(prefix: Vec<usize>, period: Vec<usize>) -> Component {
        Component::NonRoot { prefix, period }
    }

    /// `h_i` for `i >= 1`.
    pub fn signature_at(&self, i: usize) -> Option<usize> {
        match self {
            Component::Root => None,
            Component::NonRoot { prefix, period } => {
                assert!(i >= 1);
                Some(if i <= prefix.len() {
                    prefix[i - 1]
                } else {
                    period[(i - prefix.len() - 1) % period.len()]
                })
            }
        }
    }

    pub fn validate(&self, n: usize) -> Result<(), ModelError> {
        if let Component::NonRoot { prefix, period } = self {
            if n == 0 {
                return Err(ModelError::NonRootWithoutFunctions);
            }
            if period.is_empty() {
                return Err(ModelError::EmptyPeriod);
            }
            if let Some(&f) = prefix.iter().chain(period).find(|&&f| f >= n) {
                return Err(ModelError::FunctionOutOfRange(f));
            }
        }
        Ok(())
    }

    /// Shortest prefix and primitive period describing the same signature.
    pub fn canonical(&self) -> Component {
        match self {
            Component::Root => Component::Root,
            Component::NonRoot { prefix, period } => {
                let mut prefix = prefix.clone();
                let mut period = primitive_root(period).to_vec();
                while prefix.last().is_some_and(|&f| Some(&f) == period.last()) {
                    prefix.pop();
                    period.rotate_right(1);
                }
                Component::NonRoot { prefix, period }
            }
        }
    }

    fn size(&self) -> usize {
        match self {
            Component::Root => 0,
            Component::NonRoot { prefix, period } => prefix.len() + period.len(),
        }
    }
}

/// Whether two components are isomorphic, via tail equivalence of
/// signatures: some shifts of the two sequences agree from then on.
///
/// For non-root components this is decided by comparing primitive periods
/// up to rotation. The criterion is validated against a bounded
/// back-and-forth search in the test suite, not proved.
pub fn iso_nonroot(a: &Component, b: &Component) -> bool {
    match (a.canonical(), b.canonical()) {
        (Component::Root, Component::Root) => true,
        (Component::NonRoot { period: p, .. }, Component::NonRoot { period: q, .. }) => {
            p.len() == q.len() && {
                let doubled: Vec<usize> = p.iter().chain(&p).copied().collect();
                doubled.windows(q.len()).any(|w| w == q.as_slice())
            }
        }
        _ => false,
    }
}

/// Signature, the unnamed components with multiplicities, and one coloring
/// expression per predicate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelPresentation {
    sig: Signature,
    extra: Vec<(Component, usize)>,
    predicates: Vec<Regex>,
}

impl ModelPresentation {
    /// Validates and puts the extra components into canonical order (roots
    /// first, then non-roots by prefix and period), merging repeats.
    pub fn new(sig: Signature, extra: Vec<(Component, usize)>, predicates: Vec<Regex>) -> Result<Self, ModelError> {
        sig.check()?;
        if predicates.len() != sig.m() {
            let name = sig.predicates.get(predicates.len()).cloned().unwrap_or_default();
            return Err(if predicates.len() < sig.m() {
                ModelError::MissingPredicate(name)
            } else {
                ModelError::UnknownPredicate(format!("#{}", predicates.len()))
            });
        }
        let mut sorted: Vec<(Component, usize)> = Vec::new();
        for (c, count) in extra {
            c.validate(sig.n())?;
            if count == 0 {
                return Err(ModelError::ZeroCount);
            }
            sorted.push((c, count));
        }
        sorted.sort();
        let mut merged: Vec<(Component, usize)> = Vec::new();
        for (c, count) in sorted {
            match merged.last_mut() {
                Some((last, total)) if *last == c => *total += count,
                _ => merged.push((c, count)),
            }
        }
        if sig.k() == 0 && merged.is_empty() {
            return Err(ModelError::EmptyDomain);
        }
        Ok(ModelPresentation {
            sig,
            extra: merged,
            predicates,
        })
    }

    /// Only the named roots, every predicate empty.
    pub fn standard(sig: Signature) -> Result<Self, ModelError> {
        let m = sig.m();
        ModelPresentation::new(sig, Vec::new(), vec![Regex::Empty; m])
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn extra(&self) -> &[(Component, usize)] {
        &self.extra
    }

    pub fn predicates(&self) -> &[Regex] {
        &self.predicates
    }

    pub fn with_predicates(&self, predicates: Vec<Regex>) -> Result<Self, ModelError> {
        ModelPresentation::new(self.sig.clone(), self.extra.clone(), predicates)
    }

    /// All components in address order: `k` named roots, then the extras.
    pub fn components(&self) -> Vec<Component> {
        let mut out = vec![Component::Root; self.sig.k()];
        for (c, count) in &self.extra {
            out.extend(std::iter::repeat(c.clone()).take(*count));
        }
        out
    }

    /// Size used to order the search: component count, then signature
    /// lengths.
    pub fn size(&self) -> (usize, usize) {
        self.extra
            .iter()
            .fold((0, 0), |(c, s), (comp, count)| (c + count, s + count * comp.size()))
    }

    pub fn embed(&self) -> RegularSet {
        embed_components(&self.components(), self.sig.n())
    }

    /// `P_l = L(regex_l) ∩ D` for each predicate.
    pub fn colorings(&self, d: &RegularSet) -> Vec<RegularSet> {
        let n = self.sig.n();
        self.predicates
            .iter()
            .map(|r| RegularSet::from_regex(r, n).intersect(d).expect("same alphabet"))
            .collect()
    }
}

/// The regular set of addresses presenting the given components.
///
/// Component `j` (1-based) lives under `0^j`. A root component is
/// `0^j {1..n}*`; a non-root component is its spine `0^j h̄_1..h̄_i` plus
/// forward trees branching off the spine at every letter except the one
/// leading back down.
pub fn embed_components(components: &[Component], n: usize) -> RegularSet {
    // States: 0 start, 1..=J zeros read, J+1 forward tree, then one block of
    // spine states per non-root component.
    let big_j = components.len();
    let tree = big_j + 1;
    let mut spine_base = vec![0usize; big_j + 1];
    let mut next_free = big_j + 2;
    for (j, c) in components.iter().enumerate() {
        if let Component::NonRoot { prefix, period } = c {
            spine_base[j + 1] = next_free;
            next_free += prefix.len() + period.len();
        }
    }
    let states = next_free;
    let bar_of = |s: usize| s.checked_sub(n).filter(|&i| i >= 1);
    let step = |q: usize, s: usize| -> Option<usize> {
        let fwd = (1..=n).contains(&s);
        if q == 0 {
            return (s == 0 && big_j >= 1).then_some(1);
        }
        if q == tree {
            return fwd.then_some(tree);
        }
        // Locate the component and spine depth of q.
        let (j, depth) = if q <= big_j {
            (q, 0)
        } else {
            let j = (1..=big_j)
                .rev()
                .find(|&j| spine_base[j] != 0 && spine_base[j] <= q)
                .expect("spine state");
            (j, q - spine_base[j] + 1)
        };
        if s == 0 {
            return (depth == 0 && j < big_j).then_some(j + 1);
        }
        let c = &components[j - 1];
        match c {
            Component::Root => fwd.then_some(tree),
            Component::NonRoot { prefix, period } => {
                let (a, b) = (prefix.len(), period.len());
                if fwd {
                    let back = (depth >= 1).then(|| c.signature_at(depth).unwrap() + 1);
                    return (back != Some(s)).then_some(tree);
                }
                let i = bar_of(s)?;
                (i == c.signature_at(depth + 1).unwrap() + 1).then(|| {
                    let next = if depth < a + b { depth + 1 } else { a + 1 };
                    spine_base[j] + next - 1
                })
            }
        }
    };
    let dfa = Dfa::from_partial(2 * n + 1, states, 0, |q| q != 0, step);
    RegularSet::from_dfa(n, dfa)
}

/// `f_i` (0-based) on the structure presented by `d`.
pub fn induced_fn(d: &RegularSet, i: usize, w: &Address) -> Result<Address, ModelError> {
    if !d.contains(w) {
        return Err(ModelError::NotInDomain(w.to_string()));
    }
    let fwd = w.push(Letter::Fwd(i as u16 + 1));
    if d.contains(&fwd) {
        return Ok(fwd);
    }
    match w.last() {
        Some(Letter::Bar(b)) if b as usize == i + 1 => Ok(w.parent().unwrap()),
        _ => Err(ModelError::UndefinedImage {
            func: i + 1,
            addr: w.to_string(),
        }),
    }
}

/// The unique `(i, z)` with `f_i(z) = w` in the structure presented by `d`,
/// if `w` has a predecessor.
pub fn predecessor(d: &RegularSet, w: &Address) -> Option<(usize, Address)> {
    if !d.contains(w) {
        return None;
    }
    if let Some(Letter::Fwd(i)) = w.last() {
        let parent = w.parent().unwrap();
        if d.contains(&parent) {
            return Some((i as usize - 1, parent));
        }
    }
    (1..=d.n())
        .map(|g| (g - 1, w.push(Letter::Bar(g as u16))))
        .find(|(_, z)| d.contains(z))
}

/// Index (1-based) of the component holding `w`: its number of leading
/// zeros.
pub fn component_of(w: &Address) -> usize {
    w.0.iter().take_while(|&&l| l == Letter::Zero).count()
}
