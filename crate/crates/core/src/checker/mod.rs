//! Evaluation of first-order successor formulas over regular set
//! assignments, the `domain(X)` check, and a bounded search for models.
//!
//! The search is one-sided: it can only ever report a model it has found and
//! re-verified, or that no model exists within the given bounds.

mod compile;
mod search;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::automata::{AutomatonError, RegularSet, SyncAutomaton};
use crate::models::{ModelError, ModelPresentation};
use crate::simpleform::prepare;
use crate::sns::{build_domain, build_mod, pred_var, SnsError, SnsFormula};
use crate::syntax::{validate_formula, Formula, Signature, SyntaxError};

pub use search::{entail, solve, Bounds, Direction, EntailReport, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("set variable `{0}` is not bound")]
    UnboundSet(String),
    #[error("second-order quantifier over `{0}` cannot be evaluated directly")]
    SecondOrder(String),
    #[error(transparent)]
    Sns(#[from] SnsError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("internal check failed: {0}")]
    Internal(String),
}

/// Assignment of regular sets to set variables.
#[derive(Debug, Clone, Default)]
pub struct SetEnv {
    n: usize,
    sets: BTreeMap<String, RegularSet>,
}

impl SetEnv {
    pub fn new(n: usize) -> Self {
        SetEnv { n, sets: BTreeMap::new() }
    }

    /// `X ↦ d` and `Y_l ↦ p_l ∩ d`.
    pub fn for_model(d: &RegularSet, preds: &[RegularSet]) -> Self {
        let mut env = SetEnv::new(d.n());
        env.bind("X", d.clone());
        for (l, p) in preds.iter().enumerate() {
            env.bind(&pred_var(l + 1), p.intersect(d).expect("same alphabet"));
        }
        env
    }

    pub fn bind(&mut self, name: &str, set: RegularSet) {
        assert_eq!(set.n(), self.n, "set over a different alphabet");
        self.sets.insert(name.to_string(), set);
    }

    pub fn get(&self, name: &str) -> Option<&RegularSet> {
        self.sets.get(name)
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Automaton of the relation defined by `phi` over its free object
/// variables. Its tracks are a subset of the free variables: variables the
/// relation does not depend on may be dropped.
pub fn eval_fo(phi: &SnsFormula, env: &SetEnv) -> Result<SyncAutomaton, CheckError> {
    compile::Compiler::new(env).compile(phi)
}

/// Truth of a closed first-order formula under `env`.
pub fn eval_closed(phi: &SnsFormula, env: &SetEnv) -> Result<bool, CheckError> {
    let free = phi.free_obj_vars();
    if !free.is_empty() {
        return Err(SnsError::NotClosed(free.into_iter().collect()).into());
    }
    compile::Compiler::new(env).truth(phi)
}

/// Whether `d` satisfies `domain(X)` for `sig`.
pub fn check_domain(d: &RegularSet, sig: &Signature) -> Result<bool, CheckError> {
    let mut env = SetEnv::new(d.n());
    env.bind("X", d.clone());
    eval_closed(&build_domain(sig), &env)
}

/// Truth of a closed formula in the model presented by `m`.
pub fn eval_sentence(m: &ModelPresentation, f: &Formula) -> Result<bool, CheckError> {
    validate_formula(f, m.sig(), true)?;
    let d = m.embed();
    let env = SetEnv::for_model(&d, &m.colorings(&d));
    let matrix = build_mod(prepare(f).formula())?;
    eval_closed(&matrix, &env)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Regex;
    use crate::models::Component;
    use crate::sns::{domain_parts, parse_sns};
    use crate::syntax::parse_formula;

    fn set(r: &str, n: usize) -> RegularSet {
        RegularSet::parse(r, n).unwrap()
    }

    fn sig() -> Signature {
        Signature::from_names(&["a"], &["f"], &["p"])
    }

    fn closed(text: &str, d: &RegularSet) -> bool {
        let mut env = SetEnv::new(d.n());
        env.bind("X", d.clone());
        eval_closed(&parse_sns(text).unwrap(), &env).unwrap()
    }

    #[test]
    fn ground_membership() {
        let d = set("0 1*", 1);
        assert!(closed("(in (s0 Lam) X)", &d));
        assert!(!closed("(ex1 y (and (in y X) (= y (s1 (s1 Lam)))))", &d));
    }

    #[test]
    fn domain_total_clause_on_chain() {
        let d = set("0 1*", 1);
        let mut env = SetEnv::new(1);
        env.bind("X", d);
        assert!(eval_closed(&domain_parts(&sig())[1], &env).unwrap());
    }

    #[test]
    fn domain_checks() {
        assert!(check_domain(&set("0 1*", 1), &sig()).unwrap());
        assert!(!check_domain(&set("0 1* | 0 b1", 1), &sig()).unwrap());
        assert!(check_domain(&set("0 1* | 0 0 b1* | 0 0 1 1*", 1), &sig()).unwrap());
        assert!(!check_domain(&set("0", 1), &sig()).unwrap());
    }

    #[test]
    fn open_formula_relation() {
        let d = set("0 1*", 1);
        let mut env = SetEnv::new(1);
        env.bind("X", d);
        let a = eval_fo(&parse_sns("(and (in x X) (= y (s1 x)))").unwrap(), &env).unwrap();
        let addr = |w: &str| crate::automata::Address::parse(w, 1).unwrap();
        assert!(a.accepts_named(&[("x", addr("01")), ("y", addr("011"))]).unwrap());
        assert!(!a.accepts_named(&[("x", addr("1")), ("y", addr("11"))]).unwrap());
    }

    #[test]
    fn errors() {
        let env = SetEnv::new(1);
        assert_eq!(
            eval_closed(&parse_sns("(in Lam Y1)").unwrap(), &env),
            Err(CheckError::UnboundSet("Y1".into()))
        );
        assert!(matches!(
            eval_closed(&parse_sns("(ex2 Z (in Lam Z))").unwrap(), &env),
            Err(CheckError::SecondOrder(_))
        ));
    }

    #[test]
    fn sentences_on_standard_model() {
        let s = sig();
        let m = ModelPresentation::new(s.clone(), vec![], vec![Regex::parse("0", 1).unwrap()]).unwrap();
        let ev = |t: &str| eval_sentence(&m, &parse_formula(t, &s).unwrap()).unwrap();
        assert!(ev("p(a)"));
        assert!(!ev("exists X. exists Y. X = a & Y = f(X) & p(Y)"));
        assert!(!ev("p(f(a))"));
        assert!(ev("forall X. p(X) -> X = a"));
    }

    #[test]
    fn sentence_on_z_chain() {
        let s = sig();
        let m = ModelPresentation::new(
            s.clone(),
            vec![(Component::nonroot(vec![], vec![0]), 1)],
            vec![Regex::parse("0 0 (b1* | 1 1*)", 1).unwrap()],
        )
        .unwrap();
        let ev = |t: &str| eval_sentence(&m, &parse_formula(t, &s).unwrap()).unwrap();
        assert!(ev("exists X. p(X)"));
        assert!(ev("forall X. p(X) -> exists Y. p(Y) & X = f(Y)"));
        assert!(!ev("p(a)"));
    }
}
