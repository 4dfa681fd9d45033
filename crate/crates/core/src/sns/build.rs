use super::{pred_var, SnsError, SnsFormula, SnsSignature, SnsTerm};
use crate::automata::Letter;
use crate::simpleform::{is_normalized, is_simple, prepare};
use crate::syntax::{Formula, Signature, Term};

const DOMAIN: &str = "X";

fn in_x(t: SnsTerm) -> SnsFormula {
    SnsFormula::member(t, DOMAIN)
}

fn x() -> SnsTerm {
    SnsTerm::var("x")
}

/// The five clause groups of `domain(X)`, in order.
pub fn domain_parts(sig: &Signature) -> [SnsFormula; 5] {
    let (k, n) = (sig.k(), sig.n());
    let fwd = |i: usize| Letter::Fwd(i as u16);
    let bar = |i: usize| Letter::Bar(i as u16);

    let roots = SnsFormula::big_and((1..=k).map(|j| in_x(SnsTerm::root(j))).collect());

    let total = if n == 0 {
        SnsFormula::True
    } else {
        let each = (1..=n)
            .map(|i| {
                SnsFormula::xor(
                    in_x(SnsTerm::succ(fwd(i), x())),
                    SnsFormula::ex1(
                        "y",
                        SnsFormula::And(vec![
                            in_x(SnsTerm::var("y")),
                            SnsFormula::Eq(x(), SnsTerm::succ(bar(i), SnsTerm::var("y"))),
                        ]),
                    ),
                )
            })
            .collect();
        SnsFormula::all1("x", SnsFormula::implies(in_x(x()), SnsFormula::big_and(each)))
    };

    let no_root_pred = SnsFormula::big_and(
        (1..=k)
            .flat_map(|j| (1..=n).map(move |i| SnsFormula::not(in_x(SnsTerm::succ(bar(i), SnsTerm::root(j))))))
            .collect(),
    );

    let one_way = SnsFormula::big_and(
        (1..=n)
            .map(|i| {
                let fx = || SnsTerm::succ(fwd(i), x());
                SnsFormula::all1(
                    "x",
                    SnsFormula::implies(
                        SnsFormula::And(vec![in_x(x()), in_x(fx())]),
                        SnsFormula::big_and(
                            (1..=n).map(|i2| SnsFormula::not(in_x(SnsTerm::succ(bar(i2), fx())))).collect(),
                        ),
                    ),
                )
            })
            .collect(),
    );

    let single_pred = if n == 0 {
        SnsFormula::True
    } else {
        let pairs = (1..=n)
            .flat_map(|i| ((i + 1)..=n).map(move |i2| (i, i2)))
            .map(|(i, i2)| {
                SnsFormula::And(vec![in_x(SnsTerm::succ(bar(i), x())), in_x(SnsTerm::succ(bar(i2), x()))])
            })
            .collect();
        SnsFormula::all1("x", SnsFormula::not(SnsFormula::big_or(pairs)))
    };

    [roots, total, no_root_pred, one_way, single_pred]
}

/// `domain(X)`: the conjunction of the five clause groups.
pub fn build_domain(sig: &Signature) -> SnsFormula {
    SnsFormula::And(domain_parts(sig).into())
}

/// `Y ⊆ X` as `forall x (x in Y -> x in X)`.
pub fn subset(y: &str) -> SnsFormula {
    SnsFormula::all1("x", SnsFormula::implies(SnsFormula::member(x(), y), in_x(x())))
}

/// Object variable for a first-order variable: its first letter lowercased.
fn obj(v: &str) -> String {
    let mut chars = v.chars();
    match chars.next() {
        Some(c) => c.to_lowercase().chain(chars).collect(),
        None => String::new(),
    }
}

fn term(t: &Term) -> SnsTerm {
    match t {
        Term::Var(v) => SnsTerm::Var(obj(v)),
        Term::Const(j) => SnsTerm::root(j + 1),
        Term::Apply(..) => unreachable!("applications are rewritten before translation"),
    }
}

fn translate(f: &Formula) -> SnsFormula {
    match f {
        Formula::True => SnsFormula::True,
        Formula::False => SnsFormula::False,
        Formula::Atom(p, t) => SnsFormula::member(term(t), &pred_var(p + 1)),
        Formula::Eq(y, Term::Apply(i, arg)) => {
            let (y, x) = (term(y), term(arg));
            SnsFormula::Or(vec![
                SnsFormula::Eq(y.clone(), SnsTerm::succ(Letter::Fwd(*i as u16 + 1), x.clone())),
                SnsFormula::Eq(x, SnsTerm::succ(Letter::Bar(*i as u16 + 1), y)),
            ])
        }
        Formula::Eq(a, b) => SnsFormula::Eq(term(a), term(b)),
        Formula::Not(a) => SnsFormula::not(translate(a)),
        Formula::Or(a, b) => SnsFormula::Or(vec![translate(a), translate(b)]),
        Formula::Exists(v, a) => {
            let v = obj(v);
            SnsFormula::ex1(&v, SnsFormula::And(vec![in_x(SnsTerm::var(&v)), translate(a)]))
        }
        _ => unreachable!("checked to be normalized"),
    }
}

/// `Mod_F(X, Y1..Ym)` for a closed, simple, normalized formula.
pub fn build_mod(f: &Formula) -> Result<SnsFormula, SnsError> {
    if !is_simple(f) {
        return Err(SnsError::NotSimple);
    }
    if !is_normalized(f) {
        return Err(SnsError::NotNormalized);
    }
    let free = f.free_vars();
    if !free.is_empty() {
        return Err(SnsError::NotClosed(free));
    }
    Ok(translate(f))
}

/// `exists X exists Y1..Ym (domain(X) & Y1 ⊆ X & ... & Ym ⊆ X & Mod_F')`
/// with `F' = normalize(flatten(F))`.
pub fn assemble_sentence(f: &Formula, sig: &Signature) -> Result<SnsFormula, SnsError> {
    let free = f.free_vars();
    if !free.is_empty() {
        return Err(SnsError::NotClosed(free));
    }
    let matrix = build_mod(prepare(f).formula())?;
    let ys = SnsSignature::of(sig).predicate_vars();
    let mut body = vec![build_domain(sig)];
    body.extend(ys.iter().map(|y| subset(y)));
    body.push(matrix);
    let inner = ys
        .iter()
        .rev()
        .fold(SnsFormula::And(body), |acc, y| SnsFormula::ex2(y, acc));
    Ok(SnsFormula::ex2(DOMAIN, inner))
}
