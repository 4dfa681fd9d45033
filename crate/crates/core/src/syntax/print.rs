use std::fmt;

use super::{Formula, Signature, Term};

pub struct TermDisplay<'a> {
    pub(crate) term: &'a Term,
    pub(crate) sig: &'a Signature,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self.term, self.sig)
    }
}

fn symbol(names: &[String], i: usize, kind: &str) -> String {
    names
        .get(i)
        .cloned()
        .unwrap_or_else(|| format!("<{kind}#{i}>"))
}

fn write_term(f: &mut fmt::Formatter<'_>, t: &Term, sig: &Signature) -> fmt::Result {
    match t {
        Term::Var(v) => write!(f, "{v}"),
        Term::Const(c) => write!(f, "{}", symbol(&sig.constants, *c, "constant")),
        Term::Apply(g, arg) => {
            write!(f, "{}(", symbol(&sig.functions, *g, "function"))?;
            write_term(f, arg, sig)?;
            write!(f, ")")
        }
    }
}

/// Prints a formula in the surface grammar, inserting only the parentheses
/// needed for the text to parse back to the same tree.
pub struct FormulaDisplay<'a> {
    pub(crate) formula: &'a Formula,
    pub(crate) sig: &'a Signature,
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self.formula, self.sig, 0)
    }
}

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Exists(..) | Formula::Forall(..) | Formula::Implies(..) | Formula::Iff(..) => 0,
        Formula::Or(..) => 1,
        Formula::And(..) => 2,
        _ => 3,
    }
}

fn write_formula(f: &mut fmt::Formatter<'_>, g: &Formula, sig: &Signature, min: u8) -> fmt::Result {
    if precedence(g) < min {
        write!(f, "(")?;
        write_formula(f, g, sig, 0)?;
        return write!(f, ")");
    }
    match g {
        Formula::True => write!(f, "true"),
        Formula::False => write!(f, "false"),
        Formula::Atom(p, t) => {
            write!(f, "{}(", symbol(&sig.predicates, *p, "predicate"))?;
            write_term(f, t, sig)?;
            write!(f, ")")
        }
        Formula::Eq(a, b) => {
            write_term(f, a, sig)?;
            write!(f, " = ")?;
            write_term(f, b, sig)
        }
        Formula::Not(inner) => {
            if let Formula::Eq(a, b) = inner.as_ref() {
                write_term(f, a, sig)?;
                write!(f, " != ")?;
                return write_term(f, b, sig);
            }
            write!(f, "~")?;
            write_formula(f, inner, sig, 3)
        }
        Formula::And(a, b) => {
            write_formula(f, a, sig, 2)?;
            write!(f, " & ")?;
            write_formula(f, b, sig, 3)
        }
        Formula::Or(a, b) => {
            write_formula(f, a, sig, 1)?;
            write!(f, " | ")?;
            write_formula(f, b, sig, 2)
        }
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            let op = if matches!(g, Formula::Implies(..)) { "->" } else { "<->" };
            write_formula(f, a, sig, 1)?;
            write!(f, " {op} ")?;
            write_formula(f, b, sig, 0)
        }
        Formula::Exists(v, body) | Formula::Forall(v, body) => {
            let q = if matches!(g, Formula::Exists(..)) { "exists" } else { "forall" };
            write!(f, "{q} {v}. ")?;
            write_formula(f, body, sig, 0)
        }
    }
}
