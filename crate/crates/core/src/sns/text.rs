use super::{SnsError, SnsFormula, SnsTerm};
use crate::automata::Letter;

fn letter_name(l: Letter) -> String {
    match l {
        Letter::Zero => "s0".to_string(),
        Letter::Fwd(i) => format!("s{i}"),
        Letter::Bar(i) => format!("b{i}"),
    }
}

fn emit_term(t: &SnsTerm, out: &mut String) {
    match t {
        SnsTerm::Lambda => out.push_str("Lam"),
        SnsTerm::Var(v) => out.push_str(v),
        SnsTerm::Succ(l, inner) => {
            out.push('(');
            out.push_str(&letter_name(*l));
            out.push(' ');
            emit_term(inner, out);
            out.push(')');
        }
    }
}

fn emit_into(f: &SnsFormula, out: &mut String) {
    let node = |head: &str, out: &mut String, body: &mut dyn FnMut(&mut String)| {
        out.push('(');
        out.push_str(head);
        body(out);
        out.push(')');
    };
    match f {
        SnsFormula::True => out.push_str("true"),
        SnsFormula::False => out.push_str("false"),
        SnsFormula::Eq(a, b) => node("=", out, &mut |o| {
            o.push(' ');
            emit_term(a, o);
            o.push(' ');
            emit_term(b, o);
        }),
        SnsFormula::Member(t, s) => node("in", out, &mut |o| {
            o.push(' ');
            emit_term(t, o);
            o.push(' ');
            o.push_str(s);
        }),
        SnsFormula::Not(a) => node("not", out, &mut |o| {
            o.push(' ');
            emit_into(a, o);
        }),
        SnsFormula::And(xs) | SnsFormula::Or(xs) => {
            let head = if matches!(f, SnsFormula::And(_)) { "and" } else { "or" };
            node(head, out, &mut |o| {
                for x in xs {
                    o.push(' ');
                    emit_into(x, o);
                }
            })
        }
        SnsFormula::Xor(a, b) | SnsFormula::Implies(a, b) | SnsFormula::Iff(a, b) => {
            let head = match f {
                SnsFormula::Xor(..) => "xor",
                SnsFormula::Implies(..) => "->",
                _ => "<->",
            };
            node(head, out, &mut |o| {
                o.push(' ');
                emit_into(a, o);
                o.push(' ');
                emit_into(b, o);
            })
        }
        SnsFormula::Ex1(v, a) | SnsFormula::All1(v, a) | SnsFormula::Ex2(v, a) | SnsFormula::All2(v, a) => {
            let head = match f {
                SnsFormula::Ex1(..) => "ex1",
                SnsFormula::All1(..) => "all1",
                SnsFormula::Ex2(..) => "ex2",
                _ => "all2",
            };
            node(head, out, &mut |o| {
                o.push(' ');
                o.push_str(v);
                o.push(' ');
                emit_into(a, o);
            })
        }
    }
}

/// Canonical single-line S-expression text.
pub fn emit(f: &SnsFormula) -> String {
    let mut out = String::new();
    emit_into(f, &mut out);
    out
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Atom(String),
}

fn tokenize(text: &str) -> Vec<(usize, Tok)> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        match c {
            '(' => {
                out.push((i, Tok::Open));
                chars.next();
            }
            ')' => {
                out.push((i, Tok::Close));
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            _ => {
                let mut s = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c == '(' || c == ')' || c.is_whitespace() {
                        break;
                    }
                    s.push(c);
                    chars.next();
                }
                out.push((i, Tok::Atom(s)));
            }
        }
    }
    out
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

fn is_obj_var(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_lowercase() || c == '_')
        && s.chars().all(|c| c.is_alphanumeric() || c == '_')
}

fn is_set_var(s: &str) -> bool {
    s != "Lam"
        && s.chars().next().is_some_and(|c| c.is_uppercase())
        && s.chars().all(|c| c.is_alphanumeric() || c == '_')
}

fn parse_letter(s: &str) -> Option<Letter> {
    let (kind, digits) = s.split_at(1.min(s.len()));
    let i: u16 = digits.parse().ok()?;
    if digits.starts_with('+') || (digits.len() > 1 && digits.starts_with('0')) {
        return None;
    }
    match (kind, i) {
        ("s", 0) => Some(Letter::Zero),
        ("s", i) => Some(Letter::Fwd(i)),
        ("b", i) if i > 0 => Some(Letter::Bar(i)),
        _ => None,
    }
}

impl Parser {
    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len, |t| t.0)
    }

    fn error(&self, msg: impl Into<String>) -> SnsError {
        SnsError::Parse {
            offset: self.offset(),
            msg: msg.into(),
        }
    }

    fn next(&mut self) -> Result<Tok, SnsError> {
        let t = self
            .toks
            .get(self.pos)
            .map(|t| t.1.clone())
            .ok_or_else(|| self.error("unexpected end of input"))?;
        self.pos += 1;
        Ok(t)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn expect_close(&mut self) -> Result<(), SnsError> {
        match self.next()? {
            Tok::Close => Ok(()),
            _ => {
                self.pos -= 1;
                Err(self.error("expected `)`"))
            }
        }
    }

    fn atom(&mut self) -> Result<String, SnsError> {
        match self.next()? {
            Tok::Atom(s) => Ok(s),
            _ => {
                self.pos -= 1;
                Err(self.error("expected a name"))
            }
        }
    }

    fn term(&mut self) -> Result<SnsTerm, SnsError> {
        match self.next()? {
            Tok::Atom(s) if s == "Lam" => Ok(SnsTerm::Lambda),
            Tok::Atom(s) if is_obj_var(&s) => Ok(SnsTerm::Var(s)),
            Tok::Open => {
                let head = self.atom()?;
                let l = parse_letter(&head).ok_or_else(|| {
                    self.pos -= 1;
                    self.error(format!("unknown successor `{head}`"))
                })?;
                let inner = self.term()?;
                self.expect_close()?;
                Ok(SnsTerm::succ(l, inner))
            }
            _ => {
                self.pos -= 1;
                Err(self.error("expected a term"))
            }
        }
    }

    fn set_var(&mut self) -> Result<String, SnsError> {
        let s = self.atom()?;
        if is_set_var(&s) {
            Ok(s)
        } else {
            self.pos -= 1;
            Err(self.error(format!("expected a set variable, found `{s}`")))
        }
    }

    fn obj_var(&mut self) -> Result<String, SnsError> {
        let s = self.atom()?;
        if is_obj_var(&s) {
            Ok(s)
        } else {
            self.pos -= 1;
            Err(self.error(format!("expected an object variable, found `{s}`")))
        }
    }

    fn formula(&mut self) -> Result<SnsFormula, SnsError> {
        match self.next()? {
            Tok::Atom(s) if s == "true" => Ok(SnsFormula::True),
            Tok::Atom(s) if s == "false" => Ok(SnsFormula::False),
            Tok::Open => {
                let head = self.atom()?;
                let f = match head.as_str() {
                    "=" => {
                        let a = self.term()?;
                        SnsFormula::Eq(a, self.term()?)
                    }
                    "in" => {
                        let t = self.term()?;
                        SnsFormula::Member(t, self.set_var()?)
                    }
                    "not" => SnsFormula::not(self.formula()?),
                    "and" | "or" => {
                        let mut xs = Vec::new();
                        while self.peek().is_some_and(|t| *t != Tok::Close) {
                            xs.push(self.formula()?);
                        }
                        if head == "and" {
                            SnsFormula::And(xs)
                        } else {
                            SnsFormula::Or(xs)
                        }
                    }
                    "xor" | "->" | "<->" => {
                        let a = Box::new(self.formula()?);
                        let b = Box::new(self.formula()?);
                        match head.as_str() {
                            "xor" => SnsFormula::Xor(a, b),
                            "->" => SnsFormula::Implies(a, b),
                            _ => SnsFormula::Iff(a, b),
                        }
                    }
                    "ex1" | "all1" => {
                        let v = self.obj_var()?;
                        let body = Box::new(self.formula()?);
                        if head == "ex1" {
                            SnsFormula::Ex1(v, body)
                        } else {
                            SnsFormula::All1(v, body)
                        }
                    }
                    "ex2" | "all2" => {
                        let v = self.set_var()?;
                        let body = Box::new(self.formula()?);
                        if head == "ex2" {
                            SnsFormula::Ex2(v, body)
                        } else {
                            SnsFormula::All2(v, body)
                        }
                    }
                    other => {
                        self.pos -= 1;
                        return Err(self.error(format!("unknown operator `{other}`")));
                    }
                };
                self.expect_close()?;
                Ok(f)
            }
            _ => {
                self.pos -= 1;
                Err(self.error("expected a formula"))
            }
        }
    }
}

pub fn parse_sns(text: &str) -> Result<SnsFormula, SnsError> {
    let mut p = Parser {
        toks: tokenize(text),
        pos: 0,
        len: text.len(),
    };
    let f = p.formula()?;
    if p.pos < p.toks.len() {
        return Err(p.error("trailing input"));
    }
    Ok(f)
}
