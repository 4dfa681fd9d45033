//! Predicate definitions `c_L(P)` of a program and finite instances of
//! Clark's equational theory.
//!
//! Definitions are built literally from the general forms of the clauses:
//! no simplification is applied, and disjuncts follow program order.

use crate::syntax::{Clause, Formula, Program, Signature, Term};

/// `p(x1) <- exists y1..yk (x1 = t & L1 & ... & Lm)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralForm {
    pub pred: usize,
    pub head_var: String,
    pub body: Formula,
}

/// The definition `forall x1 (p(x1) <-> E1 | ... | Ek)` of one predicate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Definition {
    pub pred: usize,
    pub formula: Formula,
}

/// `c_L(P)`: exactly one definition per predicate of the signature, in
/// signature order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletionSet {
    pub defs: Vec<Definition>,
}

impl CompletionSet {
    /// Conjunction of all definitions (`True` for a signature without
    /// predicates).
    pub fn conjunction(&self) -> Formula {
        Formula::conj(self.defs.iter().map(|d| d.formula.clone()))
    }
}

/// Picks the first of `X1, X2, ...` that occurs in none of `clauses`.
pub fn fresh_head_var<'a>(clauses: impl IntoIterator<Item = &'a Clause>) -> String {
    let used: Vec<String> = clauses.into_iter().flat_map(Clause::vars).collect();
    (1..)
        .map(|i| format!("X{i}"))
        .find(|v| !used.contains(v))
        .unwrap()
}

/// Rewrites `c` into its general form using `head_var` as the new head
/// variable, which must not occur in `c`.
pub fn general_form(c: &Clause, head_var: &str) -> GeneralForm {
    debug_assert!(!c.vars().iter().any(|v| v == head_var));
    let equation = Formula::Eq(Term::var(head_var), c.head.arg.clone());
    let matrix = Formula::conj(std::iter::once(equation).chain(c.body.iter().map(|l| l.to_formula())));
    let body = c
        .vars()
        .iter()
        .rev()
        .fold(matrix, |acc, v| Formula::exists(v, acc));
    GeneralForm {
        pred: c.head.pred,
        head_var: head_var.to_string(),
        body,
    }
}

pub fn completion_defs(p: &Program, sig: &Signature) -> CompletionSet {
    let defs = (0..sig.m())
        .map(|pred| {
            let clauses: Vec<&Clause> = p.clauses.iter().filter(|c| c.head.pred == pred).collect();
            let x = fresh_head_var(clauses.iter().copied());
            let rhs = Formula::disj(clauses.iter().map(|c| general_form(c, &x).body));
            Definition {
                pred,
                formula: Formula::forall(&x, Formula::iff(Formula::Atom(pred, Term::var(&x)), rhs)),
            }
        })
        .collect();
    CompletionSet { defs }
}

/// Finite instantiation of the freeness axioms of CET over `sig`.
///
/// Equality axioms are not emitted: all downstream semantics interpret `=`
/// as identity. The acyclicity schema `forall x t(x) != x` is instantiated
/// for every nonempty function word of length at most `depth`.
pub fn cet_axioms(sig: &Signature, depth: usize) -> Vec<Formula> {
    let x = || Term::var("X");
    let y = || Term::var("Y");
    let neq = |a: Term, b: Term| Formula::not(Formula::Eq(a, b));
    let mut out = Vec::new();
    for f in 0..sig.n() {
        for g in (f + 1)..sig.n() {
            out.push(Formula::forall(
                "X",
                Formula::forall("Y", neq(Term::apply(f, x()), Term::apply(g, y()))),
            ));
        }
    }
    for f in 0..sig.n() {
        for c in 0..sig.k() {
            out.push(Formula::forall("X", neq(Term::apply(f, x()), Term::Const(c))));
        }
    }
    for a in 0..sig.k() {
        for b in (a + 1)..sig.k() {
            out.push(neq(Term::Const(a), Term::Const(b)));
        }
    }
    for f in 0..sig.n() {
        out.push(Formula::forall(
            "X",
            Formula::forall(
                "Y",
                Formula::implies(
                    Formula::Eq(Term::apply(f, x()), Term::apply(f, y())),
                    Formula::Eq(x(), y()),
                ),
            ),
        ));
    }
    if sig.n() > 0 {
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..depth {
            words = words
                .iter()
                .flat_map(|w| {
                    (0..sig.n()).map(move |f| {
                        let mut w = w.clone();
                        w.push(f);
                        w
                    })
                })
                .collect();
            for w in &words {
                let t = w.iter().rev().fold(x(), |acc, &f| Term::apply(f, acc));
                out.push(Formula::forall("X", neq(t, x())));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_program};

    fn text(f: &Formula, sig: &Signature) -> String {
        f.display(sig).to_string()
    }

    #[test]
    fn general_form_of_negated_clause() {
        let (p, sig) = parse_program("p(f(X)) :- not p(X).", None).unwrap();
        let g = general_form(&p.clauses[0], "X1");
        assert_eq!(text(&g.body, &sig), "exists X. X1 = f(X) & ~p(X)");
    }

    #[test]
    fn general_form_of_fact_has_no_quantifier() {
        let (p, sig) = parse_program("p(a).", None).unwrap();
        let g = general_form(&p.clauses[0], "X1");
        assert_eq!(text(&g.body, &sig), "X1 = a");
    }

    #[test]
    fn general_form_is_not_simplified() {
        let (p, sig) = parse_program("p(X) :- q(X).", None).unwrap();
        let g = general_form(&p.clauses[0], "X1");
        assert_eq!(text(&g.body, &sig), "exists X. X1 = X & q(X)");
    }

    #[test]
    fn definition_of_two_clause_program() {
        let (p, sig) = parse_program("p(a).\np(f(X)) :- not p(X).", None).unwrap();
        let defs = completion_defs(&p, &sig);
        assert_eq!(defs.defs.len(), 1);
        assert_eq!(
            text(&defs.defs[0].formula, &sig),
            "forall X1. p(X1) <-> X1 = a | (exists X. X1 = f(X) & ~p(X))"
        );
    }

    #[test]
    fn undefined_predicate_is_false() {
        let sig = Signature::from_names(&[], &[], &["q"]);
        let defs = completion_defs(&Program::default(), &sig);
        assert_eq!(text(&defs.defs[0].formula, &sig), "forall X1. q(X1) <-> false");
    }

    #[test]
    fn recursive_definition_literal() {
        let (p, sig) = parse_program("p(X) :- p(X).", None).unwrap();
        let defs = completion_defs(&p, &sig);
        assert_eq!(
            text(&defs.defs[0].formula, &sig),
            "forall X1. p(X1) <-> exists X. X1 = X & p(X)"
        );
    }

    #[test]
    fn head_variable_avoids_clause_variables() {
        let (p, sig) = parse_program("p(f(X1)) :- q(X1).", None).unwrap();
        let defs = completion_defs(&p, &sig);
        let d = text(&defs.defs[0].formula, &sig);
        assert!(d.starts_with("forall X2."), "{d}");
    }

    #[test]
    fn cet_one_constant_one_function() {
        let sig = Signature::from_names(&["a"], &["f"], &["p"]);
        let got: Vec<String> = cet_axioms(&sig, 2).iter().map(|f| text(f, &sig)).collect();
        let want: Vec<Formula> = [
            "forall X. f(X) != a",
            "forall X. forall Y. f(X) = f(Y) -> X = Y",
            "forall X. f(X) != X",
            "forall X. f(f(X)) != X",
        ]
        .iter()
        .map(|s| parse_formula(s, &sig).unwrap())
        .collect();
        let want: Vec<String> = want.iter().map(|f| text(f, &sig)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn cet_distinct_functions_clash() {
        let sig = Signature::from_names(&[], &["f", "g"], &[]);
        let got: Vec<String> = cet_axioms(&sig, 1).iter().map(|f| text(f, &sig)).collect();
        assert!(got.contains(&"forall X. forall Y. f(X) != g(Y)".to_string()));
    }

    #[test]
    fn cet_without_functions() {
        let sig = Signature::from_names(&["a", "b", "c"], &[], &[]);
        for d in 1..4 {
            let got: Vec<String> = cet_axioms(&sig, d).iter().map(|f| text(f, &sig)).collect();
            assert_eq!(got, vec!["a != b", "a != c", "b != c"]);
        }
    }

    #[test]
    fn cet_depth_monotone() {
        let sig = Signature::from_names(&["a", "b"], &["f", "g"], &[]);
        for d in 1..4 {
            let small = cet_axioms(&sig, d);
            let big = cet_axioms(&sig, d + 1);
            assert!(small.iter().all(|f| big.contains(f)));
        }
    }
}
