//! Simple form and the `{~, |, exists}` connective basis.
//!
//! A formula is *simple* when every function symbol occurs only in an
//! equation `y = f(x)` between variables. [`flatten`] reaches simple form by
//! repeatedly replacing an atom `A(f(t))` with
//! `exists x, y (x = t & y = f(x) & A(y))`, always picking the
//! leftmost-innermost offending occurrence. Bare constants are allowed as
//! arguments.

use crate::syntax::{Formula, Term};

/// Supply of fresh variable names `_v0, _v1, ...`.
#[derive(Debug, Clone, Default)]
pub struct FreshNames {
    next: usize,
}

impl FreshNames {
    pub fn new() -> Self {
        Self::default()
    }

    /// Starts past every `_vN` already used in `f`.
    pub fn avoiding(f: &Formula) -> Self {
        let next = f
            .all_vars()
            .iter()
            .filter_map(|v| v.strip_prefix("_v").and_then(|n| n.parse::<usize>().ok()))
            .map(|n| n + 1)
            .max()
            .unwrap_or(0);
        FreshNames { next }
    }

    pub fn fresh(&mut self) -> String {
        let name = format!("_v{}", self.next);
        self.next += 1;
        name
    }
}

/// A formula checked to be simple.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimpleFormula(Formula);

impl SimpleFormula {
    pub fn new(f: Formula) -> Option<Self> {
        is_simple(&f).then_some(SimpleFormula(f))
    }

    pub fn formula(&self) -> &Formula {
        &self.0
    }

    pub fn into_formula(self) -> Formula {
        self.0
    }
}

fn is_simple_atom(f: &Formula) -> bool {
    match f {
        Formula::Atom(_, t) => !t.has_function(),
        Formula::Eq(Term::Var(_), Term::Apply(_, arg)) => matches!(arg.as_ref(), Term::Var(_)),
        Formula::Eq(a, b) => !a.has_function() && !b.has_function(),
        _ => true,
    }
}

pub fn is_simple(f: &Formula) -> bool {
    let mut ok = true;
    f.visit(&mut |g| ok &= is_simple_atom(g));
    ok
}

/// Rewrites `f` into an equivalent simple formula.
pub fn flatten(f: &Formula, fresh: &mut FreshNames) -> SimpleFormula {
    flatten_counting(f, fresh).0
}

/// As [`flatten`], also returning the number of rewrite steps applied.
pub fn flatten_counting(f: &Formula, fresh: &mut FreshNames) -> (SimpleFormula, usize) {
    let mut steps = 0;
    let out = flatten_rec(f, fresh, &mut steps);
    debug_assert!(is_simple(&out));
    (SimpleFormula(out), steps)
}

fn flatten_rec(f: &Formula, fresh: &mut FreshNames, steps: &mut usize) -> Formula {
    let mut go = |g: &Formula| Box::new(flatten_rec(g, fresh, steps));
    match f {
        Formula::Atom(..) | Formula::Eq(..) => flatten_atom(f.clone(), fresh, steps),
        Formula::True | Formula::False => f.clone(),
        Formula::Not(a) => Formula::Not(go(a)),
        Formula::And(a, b) => {
            let a = go(a);
            Formula::And(a, go(b))
        }
        Formula::Or(a, b) => {
            let a = go(a);
            Formula::Or(a, go(b))
        }
        Formula::Implies(a, b) => {
            let a = go(a);
            Formula::Implies(a, go(b))
        }
        Formula::Iff(a, b) => {
            let a = go(a);
            Formula::Iff(a, go(b))
        }
        Formula::Exists(v, a) => Formula::Exists(v.clone(), go(a)),
        Formula::Forall(v, a) => Formula::Forall(v.clone(), go(a)),
    }
}

/// Replaces the innermost application in `t` by `z`, returning the
/// replaced `(function, argument)` pair.
fn take_innermost(t: &Term, z: &str) -> Option<(Term, (usize, Term))> {
    match t {
        Term::Apply(f, arg) if !arg.has_function() => Some((Term::var(z), (*f, (**arg).clone()))),
        Term::Apply(f, arg) => {
            take_innermost(arg, z).map(|(inner, occ)| (Term::apply(*f, inner), occ))
        }
        _ => None,
    }
}

fn flatten_atom(atom: Formula, fresh: &mut FreshNames, steps: &mut usize) -> Formula {
    if is_simple_atom(&atom) {
        return atom;
    }
    let x = fresh.fresh();
    let y = fresh.fresh();
    let (context, (f, arg)) = match &atom {
        Formula::Atom(p, t) => {
            let (t, occ) = take_innermost(t, &y).expect("offending atom has an application");
            (Formula::Atom(*p, t), occ)
        }
        Formula::Eq(a, b) => {
            if a.has_function() {
                let (a, occ) = take_innermost(a, &y).unwrap();
                (Formula::Eq(a, b.clone()), occ)
            } else {
                let (b, occ) = take_innermost(b, &y).unwrap();
                (Formula::Eq(a.clone(), b), occ)
            }
        }
        _ => unreachable!(),
    };
    *steps += 1;
    let rest = flatten_atom(context, fresh, steps);
    let body = Formula::conj([
        Formula::Eq(Term::var(&x), arg),
        Formula::Eq(Term::var(&y), Term::apply(f, Term::var(&x))),
        rest,
    ]);
    Formula::exists(&x, Formula::exists(&y, body))
}

/// Whether `f` uses only atoms, `True`/`False`, negation, disjunction and
/// existential quantification.
pub fn is_normalized(f: &Formula) -> bool {
    let mut ok = true;
    f.visit(&mut |g| {
        ok &= matches!(
            g,
            Formula::True
                | Formula::False
                | Formula::Atom(..)
                | Formula::Eq(..)
                | Formula::Not(_)
                | Formula::Or(..)
                | Formula::Exists(..)
        )
    });
    ok
}

/// Eliminates `&`, `->`, `<->` and `forall` by the standard dualities.
pub fn normalize(f: &Formula) -> Formula {
    let not = Formula::not;
    match f {
        Formula::True | Formula::False | Formula::Atom(..) | Formula::Eq(..) => f.clone(),
        Formula::Not(a) => not(normalize(a)),
        Formula::Or(a, b) => Formula::or(normalize(a), normalize(b)),
        Formula::Exists(v, a) => Formula::exists(v, normalize(a)),
        Formula::And(a, b) => not(Formula::or(not(normalize(a)), not(normalize(b)))),
        Formula::Implies(a, b) => Formula::or(not(normalize(a)), normalize(b)),
        Formula::Iff(a, b) => {
            let (a, b) = (normalize(a), normalize(b));
            let forward = Formula::or(not(a.clone()), b.clone());
            let backward = Formula::or(not(b), a);
            not(Formula::or(not(forward), not(backward)))
        }
        Formula::Forall(v, a) => not(Formula::exists(v, not(normalize(a)))),
    }
}

/// `normalize(flatten(f))`, the input expected by the `Mod` translation.
pub fn prepare(f: &Formula) -> SimpleFormula {
    let mut fresh = FreshNames::avoiding(f);
    let flat = flatten(f, &mut fresh);
    SimpleFormula(normalize(flat.formula()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, Signature};

    fn sig() -> Signature {
        Signature::from_names(&["a", "b"], &["f", "g"], &["p", "q"])
    }

    fn flat(text: &str) -> String {
        let s = sig();
        let f = parse_formula(text, &s).unwrap();
        flatten(&f, &mut FreshNames::new()).formula().display(&s).to_string()
    }

    #[test]
    fn one_rewrite_for_constant_argument() {
        assert_eq!(flat("p(f(a))"), "exists _v0. exists _v1. _v0 = a & _v1 = f(_v0) & p(_v1)");
    }

    #[test]
    fn simple_formula_unchanged() {
        assert_eq!(flat("exists X. p(X)"), "exists X. p(X)");
        assert_eq!(flat("exists X. exists Y. Y = f(X) & p(a)"), "exists X. exists Y. Y = f(X) & p(a)");
    }

    #[test]
    fn equation_between_applications() {
        // The left occurrence is rewritten first; `_v1 = f(Y)` is then
        // already simple.
        assert_eq!(
            flat("forall X. forall Y. f(X) = f(Y)"),
            "forall X. forall Y. exists _v0. exists _v1. _v0 = X & _v1 = f(_v0) & _v1 = f(Y)"
        );
    }

    #[test]
    fn application_to_constant_is_rewritten() {
        assert_eq!(
            flat("forall Y. Y = f(a)"),
            "forall Y. exists _v0. exists _v1. _v0 = a & _v1 = f(_v0) & Y = _v1"
        );
    }

    #[test]
    fn nested_application_innermost_first() {
        assert_eq!(
            flat("p(f(g(a)))"),
            "exists _v0. exists _v1. _v0 = a & _v1 = g(_v0) & \
             (exists _v2. exists _v3. _v2 = _v1 & _v3 = f(_v2) & p(_v3))"
        );
    }

    #[test]
    fn step_count_bounded_by_occurrences() {
        let s = sig();
        let f = parse_formula("p(f(g(a))) | f(a) = g(f(b)) & q(g(X))", &s).unwrap();
        let (out, steps) = flatten_counting(&f, &mut FreshNames::new());
        assert!(is_simple(out.formula()));
        assert_eq!(steps, 5);
    }

    #[test]
    fn fresh_names_avoid_existing() {
        let s = sig();
        let f = parse_formula("exists _v3. p(f(_v3))", &s).unwrap();
        let out = flatten(&f, &mut FreshNames::avoiding(&f));
        assert!(out.formula().display(&s).to_string().contains("_v4"));
    }

    #[test]
    fn normalize_forms() {
        let s = sig();
        let n = |t: &str| normalize(&parse_formula(t, &s).unwrap()).display(&s).to_string();
        assert_eq!(n("forall X. p(X)"), "~(exists X. ~p(X))");
        assert_eq!(n("p(a) -> q(a)"), "~p(a) | q(a)");
        assert_eq!(n("p(a) <-> q(a)"), "~(~(~p(a) | q(a)) | ~(~q(a) | p(a)))");
        assert_eq!(n("p(a) & q(a)"), "~(~p(a) | ~q(a))");
    }

    #[test]
    fn iff_expansion_truth_table() {
        let s = Signature::from_names(&["a"], &[], &["p", "q"]);
        let f = parse_formula("p(a) <-> q(a)", &s).unwrap();
        let g = normalize(&f);
        fn eval(f: &Formula, v: [bool; 2]) -> bool {
            match f {
                Formula::Atom(p, _) => v[*p],
                Formula::Not(a) => !eval(a, v),
                Formula::Or(a, b) => eval(a, v) || eval(b, v),
                Formula::Iff(a, b) => eval(a, v) == eval(b, v),
                _ => unreachable!(),
            }
        }
        for v in [[false, false], [false, true], [true, false], [true, true]] {
            assert_eq!(eval(&f, v), eval(&g, v));
        }
    }

    #[test]
    fn normalize_preserves_simplicity() {
        let s = sig();
        let f = parse_formula("forall X. p(f(X)) <-> (exists Y. f(Y) = X & q(b))", &s).unwrap();
        let out = prepare(&f);
        assert!(is_simple(out.formula()));
        assert!(is_normalized(out.formula()));
    }
}
