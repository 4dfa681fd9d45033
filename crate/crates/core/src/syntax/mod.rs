//! The monadic first-order language: signatures, terms, formulas, clauses,
//! programs and queries, together with their parser and printer.
//!
//! Symbols are referenced by their index in a [`Signature`]; variables by
//! name. Every function and predicate symbol is unary, which the AST
//! enforces by construction.

mod lexer;
mod parser;
mod print;

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

pub use parser::{parse_formula, parse_formula_infer, parse_program, parse_query};
pub use print::{FormulaDisplay, TermDisplay};

/// Errors produced while reading or validating the first-order syntax.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: symbol `{symbol}` used with arity {arity}, expected 1")]
    Arity {
        line: usize,
        col: usize,
        symbol: String,
        arity: usize,
    },
    #[error("{line}:{col}: unknown symbol `{symbol}`")]
    UnknownSymbol {
        line: usize,
        col: usize,
        symbol: String,
    },
    #[error("{line}:{col}: symbol `{symbol}` is a {declared}, used as a {used}")]
    KindClash {
        line: usize,
        col: usize,
        symbol: String,
        declared: &'static str,
        used: &'static str,
    },
    #[error("invalid signature: {0}")]
    BadSignature(String),
    #[error("formula is not closed; free variables: {}", .0.join(", "))]
    OpenFormula(Vec<String>),
    #[error("{kind} index {index} is not part of the signature")]
    ForeignSymbol { kind: &'static str, index: usize },
}

impl SyntaxError {
    /// Stable short code, used by the CLI and by tests to tell errors apart.
    pub fn code(&self) -> &'static str {
        match self {
            SyntaxError::Syntax { .. } => "syntax",
            SyntaxError::Arity { .. } => "arity",
            SyntaxError::UnknownSymbol { .. } => "unknown-symbol",
            SyntaxError::KindClash { .. } => "kind-clash",
            SyntaxError::BadSignature(_) => "bad-signature",
            SyntaxError::OpenFormula(_) => "open-formula",
            SyntaxError::ForeignSymbol { .. } => "foreign-symbol",
        }
    }

    /// Whether the error was raised while reading text (as opposed to
    /// checking an already built value).
    pub fn is_parse_error(&self) -> bool {
        matches!(
            self,
            SyntaxError::Syntax { .. }
                | SyntaxError::Arity { .. }
                | SyntaxError::UnknownSymbol { .. }
                | SyntaxError::KindClash { .. }
        )
    }
}

/// A finite monadic language: constants `c_1..c_k`, unary functions
/// `f_1..f_n` and unary predicates `p_1..p_m`.
///
/// The order of each list is significant: the index of a constant fixes
/// its root address and the index of a function fixes its successor letters.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Signature {
    pub constants: Vec<String>,
    pub functions: Vec<String>,
    pub predicates: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    Constant,
    Function,
    Predicate,
}

impl SymbolKind {
    pub fn name(self) -> &'static str {
        match self {
            SymbolKind::Constant => "constant",
            SymbolKind::Function => "function",
            SymbolKind::Predicate => "predicate",
        }
    }
}

impl Signature {
    pub fn new(
        constants: Vec<String>,
        functions: Vec<String>,
        predicates: Vec<String>,
    ) -> Result<Self, SyntaxError> {
        let sig = Signature {
            constants,
            functions,
            predicates,
        };
        sig.check()?;
        Ok(sig)
    }

    /// Convenience constructor from string slices; panics on invalid input.
    pub fn from_names(constants: &[&str], functions: &[&str], predicates: &[&str]) -> Self {
        let own = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect();
        Signature::new(own(constants), own(functions), own(predicates))
            .expect("invalid signature")
    }

    pub fn check(&self) -> Result<(), SyntaxError> {
        let mut seen = HashSet::new();
        for name in self.all_names() {
            if !is_symbol_name(name) {
                return Err(SyntaxError::BadSignature(format!(
                    "`{name}` is not a lowercase identifier"
                )));
            }
            if !seen.insert(name) {
                return Err(SyntaxError::BadSignature(format!(
                    "`{name}` is declared more than once"
                )));
            }
        }
        Ok(())
    }

    fn all_names(&self) -> impl Iterator<Item = &str> {
        self.constants
            .iter()
            .chain(&self.functions)
            .chain(&self.predicates)
            .map(String::as_str)
    }

    /// Number of constants.
    pub fn k(&self) -> usize {
        self.constants.len()
    }

    /// Number of function symbols.
    pub fn n(&self) -> usize {
        self.functions.len()
    }

    /// Number of predicate symbols.
    pub fn m(&self) -> usize {
        self.predicates.len()
    }

    pub fn lookup(&self, name: &str) -> Option<(SymbolKind, usize)> {
        let find = |xs: &[String]| xs.iter().position(|x| x == name);
        if let Some(i) = find(&self.constants) {
            Some((SymbolKind::Constant, i))
        } else if let Some(i) = find(&self.functions) {
            Some((SymbolKind::Function, i))
        } else {
            find(&self.predicates).map(|i| (SymbolKind::Predicate, i))
        }
    }

    pub fn function_index(&self, name: &str) -> Option<usize> {
        self.functions.iter().position(|f| f == name)
    }

    pub fn predicate_index(&self, name: &str) -> Option<usize> {
        self.predicates.iter().position(|p| p == name)
    }

    /// Renders the signature as directives in the program file syntax.
    pub fn to_directives(&self) -> String {
        let mut out = String::new();
        for (kw, names) in [
            ("constant", &self.constants),
            ("function", &self.functions),
            ("predicate", &self.predicates),
        ] {
            if !names.is_empty() {
                out.push_str(&format!("#{kw} {}.\n", names.join(", ")));
            }
        }
        out
    }
}

pub(crate) fn is_symbol_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !lexer::is_keyword(name)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    /// Index into [`Signature::constants`].
    Const(usize),
    /// Index into [`Signature::functions`] applied to its single argument.
    Apply(usize, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn apply(f: usize, arg: Term) -> Term {
        Term::Apply(f, Box::new(arg))
    }

    pub fn has_function(&self) -> bool {
        matches!(self, Term::Apply(..))
    }

    pub fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Term::Var(v) => {
                if !out.contains(&v.as_str()) {
                    out.push(v)
                }
            }
            Term::Const(_) => {}
            Term::Apply(_, t) => t.collect_vars(out),
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> TermDisplay<'a> {
        TermDisplay { term: self, sig }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    /// Index into [`Signature::predicates`] applied to its single argument.
    Atom(usize, Term),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn exists(v: &str, body: Formula) -> Formula {
        Formula::Exists(v.to_string(), Box::new(body))
    }

    pub fn forall(v: &str, body: Formula) -> Formula {
        Formula::Forall(v.to_string(), Box::new(body))
    }

    /// Left-nested conjunction; `True` when empty.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Left-nested disjunction; `False` when empty.
    pub fn disj(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::False)
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.free_vars_into(&mut Vec::new(), &mut out);
        out
    }

    fn free_vars_into(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        let push_term = |t: &Term, bound: &Vec<String>, out: &mut Vec<String>| {
            let mut vs = Vec::new();
            t.collect_vars(&mut vs);
            for v in vs {
                if !bound.iter().any(|b| b == v) && !out.iter().any(|o| o == v) {
                    out.push(v.to_string());
                }
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(_, t) => push_term(t, bound, out),
            Formula::Eq(a, b) => {
                push_term(a, bound, out);
                push_term(b, bound, out);
            }
            Formula::Not(f) => f.free_vars_into(bound, out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.free_vars_into(bound, out);
                b.free_vars_into(bound, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(v.clone());
                f.free_vars_into(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// All variable names occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom(_, t) => add_term_vars(t, &mut out),
            Formula::Eq(a, b) => {
                add_term_vars(a, &mut out);
                add_term_vars(b, &mut out);
            }
            Formula::Exists(v, _) | Formula::Forall(v, _) => {
                out.insert(v.clone());
            }
            _ => {}
        });
        out
    }

    /// Pre-order traversal of all subformulas.
    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Not(a) | Formula::Exists(_, a) | Formula::Forall(_, a) => a.visit(f),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> FormulaDisplay<'a> {
        FormulaDisplay { formula: self, sig }
    }
}

fn add_term_vars(t: &Term, out: &mut BTreeSet<String>) {
    let mut vs = Vec::new();
    t.collect_vars(&mut vs);
    out.extend(vs.into_iter().map(str::to_string));
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub pred: usize,
    pub arg: Term,
}

impl Atom {
    pub fn to_formula(&self) -> Formula {
        Formula::Atom(self.pred, self.arg.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn to_formula(&self) -> Formula {
        let a = self.atom.to_formula();
        if self.positive {
            a
        } else {
            Formula::not(a)
        }
    }
}

/// A program clause `A <- L_1, ..., L_m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    pub head: Atom,
    pub body: Vec<Literal>,
}

impl Clause {
    /// Variables of the clause in order of first occurrence, head first.
    pub fn vars(&self) -> Vec<String> {
        let mut vs = Vec::new();
        self.head.arg.collect_vars(&mut vs);
        for lit in &self.body {
            lit.atom.arg.collect_vars(&mut vs);
        }
        vs.into_iter().map(str::to_string).collect()
    }

    pub fn is_definite(&self) -> bool {
        self.body.iter().all(|l| l.positive)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Program {
    pub clauses: Vec<Clause>,
}

impl Program {
    pub fn is_definite(&self) -> bool {
        self.clauses.iter().all(Clause::is_definite)
    }
}

/// A query `?- L_1, ..., L_k.`, read as the existential closure of the
/// conjunction of its literals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Query {
    pub literals: Vec<Literal>,
}

impl Query {
    pub fn is_definite(&self) -> bool {
        self.literals.iter().all(|l| l.positive)
    }

    pub fn to_formula(&self) -> Formula {
        let body = Formula::conj(self.literals.iter().map(Literal::to_formula));
        let vars = body.free_vars();
        vars.iter()
            .rev()
            .fold(body, |acc, v| Formula::exists(v, acc))
    }
}

fn check_term(t: &Term, sig: &Signature) -> Result<(), SyntaxError> {
    match t {
        Term::Var(_) => Ok(()),
        Term::Const(c) if *c < sig.k() => Ok(()),
        Term::Const(c) => Err(SyntaxError::ForeignSymbol {
            kind: "constant",
            index: *c,
        }),
        Term::Apply(f, _) if *f >= sig.n() => Err(SyntaxError::ForeignSymbol {
            kind: "function",
            index: *f,
        }),
        Term::Apply(_, arg) => check_term(arg, sig),
    }
}

fn check_atom(pred: usize, arg: &Term, sig: &Signature) -> Result<(), SyntaxError> {
    if pred >= sig.m() {
        return Err(SyntaxError::ForeignSymbol {
            kind: "predicate",
            index: pred,
        });
    }
    check_term(arg, sig)
}

/// Checks that every symbol of `f` belongs to `sig` and, when
/// `require_closed`, that `f` has no free variables.
pub fn validate_formula(f: &Formula, sig: &Signature, require_closed: bool) -> Result<(), SyntaxError> {
    let mut result = Ok(());
    f.visit(&mut |g| {
        if result.is_err() {
            return;
        }
        result = match g {
            Formula::Atom(p, t) => check_atom(*p, t, sig),
            Formula::Eq(a, b) => check_term(a, sig).and_then(|_| check_term(b, sig)),
            _ => Ok(()),
        };
    });
    result?;
    if require_closed {
        let free = f.free_vars();
        if !free.is_empty() {
            return Err(SyntaxError::OpenFormula(free));
        }
    }
    Ok(())
}

pub fn validate_program(p: &Program, sig: &Signature) -> Result<(), SyntaxError> {
    for c in &p.clauses {
        check_atom(c.head.pred, &c.head.arg, sig)?;
        for l in &c.body {
            check_atom(l.atom.pred, &l.atom.arg, sig)?;
        }
    }
    Ok(())
}

pub fn validate_query(q: &Query, sig: &Signature) -> Result<(), SyntaxError> {
    if q.literals.is_empty() {
        return Err(SyntaxError::Syntax {
            line: 0,
            col: 0,
            msg: "a query needs at least one literal".into(),
        });
    }
    for l in &q.literals {
        check_atom(l.atom.pred, &l.atom.arg, sig)?;
    }
    Ok(())
}
