use super::lexer::{tokenize, Tok, Token};
use super::{Atom, Clause, Formula, Literal, Program, Query, Signature, SymbolKind, SyntaxError, Term};

/// Parses a program file.
///
/// With `sig` given, every symbol must already belong to it. Otherwise the
/// signature is taken from the file's `#constant/#function/#predicate`
/// directives when present, or inferred from the symbols in order of first
/// occurrence.
pub fn parse_program(text: &str, sig: Option<&Signature>) -> Result<(Program, Signature), SyntaxError> {
    let mut p = Parser::new(text, sig.cloned().unwrap_or_default(), sig.is_some())?;
    p.directives()?;
    let mut clauses = Vec::new();
    while !p.at(&Tok::Eof) {
        if p.at(&Tok::QueryStart) {
            return Err(p.error("queries belong in a separate query file"));
        }
        clauses.push(p.clause()?);
    }
    Ok((Program { clauses }, p.symbols.sig))
}

/// Parses a query file `?- L1, ..., Lk.`.
///
/// When `fixed` is false, unknown symbols extend `sig` and the extended
/// signature is returned.
pub fn parse_query(text: &str, sig: &Signature, fixed: bool) -> Result<(Query, Signature), SyntaxError> {
    let mut p = Parser::new(text, sig.clone(), fixed)?;
    p.directives()?;
    p.expect(Tok::QueryStart)?;
    let mut literals = vec![p.literal()?];
    while p.eat(&Tok::Comma) {
        literals.push(p.literal()?);
    }
    p.expect(Tok::Dot)?;
    p.expect(Tok::Eof)?;
    Ok((Query { literals }, p.symbols.sig))
}

/// Parses one formula over a fixed signature.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, SyntaxError> {
    let mut p = Parser::new(text, sig.clone(), true)?;
    p.formula_file()
}

/// Parses one formula, extending `base` with any symbols it introduces
/// (leading directives fix the signature instead).
pub fn parse_formula_infer(text: &str, base: &Signature) -> Result<(Formula, Signature), SyntaxError> {
    let mut p = Parser::new(text, base.clone(), false)?;
    let f = p.formula_file()?;
    Ok((f, p.symbols.sig))
}

struct Symbols {
    sig: Signature,
    fixed: bool,
}

impl Symbols {
    fn list(&mut self, kind: SymbolKind) -> &mut Vec<String> {
        match kind {
            SymbolKind::Constant => &mut self.sig.constants,
            SymbolKind::Function => &mut self.sig.functions,
            SymbolKind::Predicate => &mut self.sig.predicates,
        }
    }

    fn resolve(&mut self, name: &str, kind: SymbolKind, line: usize, col: usize) -> Result<usize, SyntaxError> {
        match self.sig.lookup(name) {
            Some((k, i)) if k == kind => Ok(i),
            Some((k, _)) => Err(SyntaxError::KindClash {
                line,
                col,
                symbol: name.to_string(),
                declared: k.name(),
                used: kind.name(),
            }),
            None if self.fixed => Err(SyntaxError::UnknownSymbol {
                line,
                col,
                symbol: name.to_string(),
            }),
            None => {
                let list = self.list(kind);
                list.push(name.to_string());
                Ok(list.len() - 1)
            }
        }
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    symbols: Symbols,
}

impl Parser {
    fn new(text: &str, sig: Signature, fixed: bool) -> Result<Self, SyntaxError> {
        Ok(Parser {
            toks: tokenize(text)?,
            pos: 0,
            symbols: Symbols { sig, fixed },
        })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn at(&self, t: &Tok) -> bool {
        &self.peek().tok == t
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.at(t) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error(&self, msg: impl Into<String>) -> SyntaxError {
        let t = self.peek();
        SyntaxError::Syntax {
            line: t.line,
            col: t.col,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, t: Tok) -> Result<Token, SyntaxError> {
        if self.at(&t) {
            Ok(self.bump())
        } else {
            Err(self.error(format!(
                "expected {}, found {}",
                t.describe(),
                self.peek().tok.describe()
            )))
        }
    }

    fn ident(&mut self) -> Result<(String, usize, usize), SyntaxError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Ident(ref s) if !super::lexer::is_keyword(s) => {
                self.bump();
                Ok((s.clone(), t.line, t.col))
            }
            other => Err(self.error(format!("expected a symbol, found {}", other.describe()))),
        }
    }

    fn directives(&mut self) -> Result<(), SyntaxError> {
        let mut any = false;
        while let Tok::Directive(d) = self.peek().tok.clone() {
            let kind = match d.as_str() {
                "constant" => SymbolKind::Constant,
                "function" => SymbolKind::Function,
                "predicate" => SymbolKind::Predicate,
                other => return Err(self.error(format!("unknown directive `#{other}`"))),
            };
            self.bump();
            loop {
                let (name, line, col) = self.ident()?;
                self.symbols.resolve(&name, kind, line, col)?;
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::Dot)?;
            any = true;
        }
        if any {
            self.symbols.fixed = true;
        }
        Ok(())
    }

    /// Parses `name ( t1, ..., tr )` after the name, returning the single
    /// argument or an arity error.
    fn single_arg(&mut self, name: &str, line: usize, col: usize) -> Result<Term, SyntaxError> {
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        if !self.at(&Tok::RParen) {
            args.push(self.term()?);
            while self.eat(&Tok::Comma) {
                args.push(self.term()?);
            }
        }
        self.expect(Tok::RParen)?;
        if args.len() != 1 {
            return Err(SyntaxError::Arity {
                line,
                col,
                symbol: name.to_string(),
                arity: args.len(),
            });
        }
        Ok(args.pop().unwrap())
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Var(v) => {
                self.bump();
                Ok(Term::Var(v))
            }
            Tok::Ident(_) => {
                let (name, line, col) = self.ident()?;
                if self.at(&Tok::LParen) {
                    let arg = self.single_arg(&name, line, col)?;
                    let f = self.symbols.resolve(&name, SymbolKind::Function, line, col)?;
                    Ok(Term::apply(f, arg))
                } else {
                    let c = self.symbols.resolve(&name, SymbolKind::Constant, line, col)?;
                    Ok(Term::Const(c))
                }
            }
            other => Err(self.error(format!("expected a term, found {}", other.describe()))),
        }
    }

    fn atom(&mut self) -> Result<Atom, SyntaxError> {
        let (name, line, col) = self.ident()?;
        if !self.at(&Tok::LParen) {
            return Err(SyntaxError::Arity {
                line,
                col,
                symbol: name,
                arity: 0,
            });
        }
        let arg = self.single_arg(&name, line, col)?;
        let pred = self.symbols.resolve(&name, SymbolKind::Predicate, line, col)?;
        Ok(Atom { pred, arg })
    }

    fn literal(&mut self) -> Result<Literal, SyntaxError> {
        let positive = !matches!(&self.peek().tok, Tok::Ident(s) if s == "not");
        if !positive {
            self.bump();
        }
        Ok(Literal {
            positive,
            atom: self.atom()?,
        })
    }

    fn clause(&mut self) -> Result<Clause, SyntaxError> {
        let head = self.atom()?;
        let mut body = Vec::new();
        if self.eat(&Tok::If) {
            body.push(self.literal()?);
            while self.eat(&Tok::Comma) {
                body.push(self.literal()?);
            }
        }
        self.expect(Tok::Dot)?;
        Ok(Clause { head, body })
    }

    fn formula_file(&mut self) -> Result<Formula, SyntaxError> {
        self.directives()?;
        let f = self.formula()?;
        self.eat(&Tok::Dot);
        self.expect(Tok::Eof)?;
        Ok(f)
    }

    fn keyword(&self) -> Option<&str> {
        match &self.peek().tok {
            Tok::Ident(s) if super::lexer::is_keyword(s) => Some(s.as_str()),
            _ => None,
        }
    }

    fn formula(&mut self) -> Result<Formula, SyntaxError> {
        if matches!(self.keyword(), Some("exists" | "forall")) {
            return self.quantified();
        }
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Implies) {
            Ok(Formula::implies(lhs, self.formula()?))
        } else if self.eat(&Tok::Iff) {
            Ok(Formula::iff(lhs, self.formula()?))
        } else {
            Ok(lhs)
        }
    }

    fn quantified(&mut self) -> Result<Formula, SyntaxError> {
        let universal = self.keyword() == Some("forall");
        self.bump();
        let mut vars = Vec::new();
        loop {
            match self.peek().tok.clone() {
                Tok::Var(v) => {
                    self.bump();
                    vars.push(v);
                }
                other => {
                    return Err(self.error(format!("expected a variable, found {}", other.describe())))
                }
            }
            self.eat(&Tok::Comma);
            if self.at(&Tok::Dot) {
                break;
            }
        }
        self.expect(Tok::Dot)?;
        let body = self.formula()?;
        Ok(vars.iter().rev().fold(body, |acc, v| {
            if universal {
                Formula::forall(v, acc)
            } else {
                Formula::exists(v, acc)
            }
        }))
    }

    fn disjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut f = self.conjunction()?;
        while self.eat(&Tok::Or) {
            f = Formula::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut f = self.unary()?;
        while self.eat(&Tok::And) {
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        if self.eat(&Tok::Neg) {
            return Ok(Formula::not(self.unary()?));
        }
        match self.keyword() {
            Some("exists" | "forall") => return self.quantified(),
            Some("true") => {
                self.bump();
                return Ok(Formula::True);
            }
            Some("false") => {
                self.bump();
                return Ok(Formula::False);
            }
            _ => {}
        }
        if self.eat(&Tok::LParen) {
            let f = self.formula()?;
            self.expect(Tok::RParen)?;
            return Ok(f);
        }
        self.atom_or_equation()
    }

    fn atom_or_equation(&mut self) -> Result<Formula, SyntaxError> {
        let is_application = matches!(self.peek().tok, Tok::Ident(_)) && self.peek_at(1) == &Tok::LParen;
        if is_application {
            // An application followed by `=` is a function term, otherwise a
            // predicate atom.
            let save = self.pos;
            let (name, line, col) = self.ident()?;
            let arg = self.single_arg(&name, line, col)?;
            if !matches!(self.peek().tok, Tok::Eq | Tok::Neq) {
                let pred = self.symbols.resolve(&name, SymbolKind::Predicate, line, col)?;
                return Ok(Formula::Atom(pred, arg));
            }
            self.pos = save;
        }
        let lhs = self.term()?;
        let negated = match self.peek().tok {
            Tok::Eq => false,
            Tok::Neq => true,
            ref other => {
                return Err(self.error(format!("expected `=` or `!=`, found {}", other.describe())))
            }
        };
        self.bump();
        let rhs = self.term()?;
        let eq = Formula::Eq(lhs, rhs);
        Ok(if negated { Formula::not(eq) } else { eq })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_program() {
        let (p, sig) = parse_program("p(a).", None).unwrap();
        assert_eq!(p.clauses.len(), 1);
        assert!(p.clauses[0].body.is_empty());
        assert_eq!(sig, Signature::from_names(&["a"], &[], &["p"]));
    }

    #[test]
    fn negated_body() {
        let (p, sig) = parse_program("p(f(X)) :- not p(X).", None).unwrap();
        let c = &p.clauses[0];
        assert_eq!(c.head.arg, Term::apply(0, Term::var("X")));
        assert_eq!(c.body.len(), 1);
        assert!(!c.body[0].positive);
        assert_eq!(c.body[0].atom.arg, Term::var("X"));
        assert_eq!(sig.functions, vec!["f".to_string()]);
    }

    #[test]
    fn binary_predicate_is_arity_error() {
        let err = parse_program("p(X,Y).", None).unwrap_err();
        assert_eq!(err.code(), "arity");
        let err = parse_program("p(g(a, b)).", None).unwrap_err();
        assert_eq!(err.code(), "arity");
    }

    #[test]
    fn explicit_signature_rejects_unknown() {
        let sig = Signature::from_names(&["a"], &[], &["p"]);
        let err = parse_program("q(a).", Some(&sig)).unwrap_err();
        assert_eq!(err.code(), "unknown-symbol");
    }

    #[test]
    fn directives_fix_signature_and_order() {
        let text = "#constant b, a.\n#function f.\n#predicate p.\np(a).\n";
        let (_, sig) = parse_program(text, None).unwrap();
        assert_eq!(sig.constants, vec!["b".to_string(), "a".to_string()]);
        let err = parse_program("#predicate p.\np(c).", None).unwrap_err();
        assert_eq!(err.code(), "unknown-symbol");
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_program("p(a)\nq(b).", None).unwrap_err();
        match err {
            SyntaxError::Syntax { line, col, .. } => assert_eq!((line, col), (2, 1)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn formula_forms() {
        let sig = Signature::from_names(&["a", "b"], &["f"], &["p", "q"]);
        let f = parse_formula("exists X. p(X)", &sig).unwrap();
        assert_eq!(f, Formula::exists("X", Formula::Atom(0, Term::var("X"))));
        let f = parse_formula("forall X. (p(X) -> ~q(X))", &sig).unwrap();
        assert_eq!(
            f,
            Formula::forall(
                "X",
                Formula::implies(
                    Formula::Atom(0, Term::var("X")),
                    Formula::not(Formula::Atom(1, Term::var("X")))
                )
            )
        );
        let f = parse_formula("p(f(a)) & a = b", &sig).unwrap();
        assert_eq!(
            f,
            Formula::and(
                Formula::Atom(0, Term::apply(0, Term::Const(0))),
                Formula::Eq(Term::Const(0), Term::Const(1))
            )
        );
    }

    #[test]
    fn neq_desugars() {
        let sig = Signature::from_names(&["a"], &["f"], &[]);
        let f = parse_formula("f(a) != a", &sig).unwrap();
        assert_eq!(
            f,
            Formula::not(Formula::Eq(Term::apply(0, Term::Const(0)), Term::Const(0)))
        );
    }

    #[test]
    fn precedence_and_scope() {
        let sig = Signature::from_names(&["a"], &[], &["p", "q", "r"]);
        let f = parse_formula("~p(a) & q(a) | r(a) -> p(a)", &sig).unwrap();
        let (p, q, r) = (
            Formula::Atom(0, Term::Const(0)),
            Formula::Atom(1, Term::Const(0)),
            Formula::Atom(2, Term::Const(0)),
        );
        assert_eq!(
            f,
            Formula::implies(
                Formula::or(Formula::and(Formula::not(p.clone()), q.clone()), r.clone()),
                p.clone()
            )
        );
        let g = parse_formula("p(a) & exists X. q(X) | r(X)", &sig).unwrap();
        assert_eq!(
            g,
            Formula::and(
                p,
                Formula::exists(
                    "X",
                    Formula::or(Formula::Atom(1, Term::var("X")), Formula::Atom(2, Term::var("X")))
                )
            )
        );
    }

    #[test]
    fn infer_formula_signature() {
        let (f, sig) = parse_formula_infer("exists X. p(f(X)) & X = c", &Signature::default()).unwrap();
        assert!(f.is_closed());
        assert_eq!(sig, Signature::from_names(&["c"], &["f"], &["p"]));
    }

    #[test]
    fn kind_clash_reported() {
        let err = parse_formula_infer("p(a) & a(b)", &Signature::default()).unwrap_err();
        assert_eq!(err.code(), "kind-clash");
    }

    #[test]
    fn query_parse() {
        let sig = Signature::from_names(&["a"], &["f"], &["p"]);
        let (q, _) = parse_query("?- p(f(a)), not p(X).", &sig, true).unwrap();
        assert_eq!(q.literals.len(), 2);
        assert!(!q.literals[1].positive);
        assert!(parse_query("?- .", &sig, true).is_err());
    }
}
