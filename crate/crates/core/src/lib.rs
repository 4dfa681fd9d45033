//! Clark's completion for monadic general logic programs, its reduction to
//! the monadic second-order logic of successors, and a bounded, one-sided
//! decision engine over regular presentations of models of Clark's
//! equational theory.
//!
//! The pipeline is:
//!
//! 1. [`syntax`] reads programs, queries and formulas over a monadic
//!    [`syntax::Signature`].
//! 2. [`completion`] builds the predicate definitions of a program and
//!    finite instances of the freeness axioms.
//! 3. [`simpleform`] flattens nested function applications and rewrites to
//!    the `{~, |, exists}` basis.
//! 4. [`sns`] builds the successor-logic formulas `domain(X)`, `Mod_F` and
//!    the final satisfiability sentence.
//! 5. [`models`] and [`automata`] present countable models as regular sets
//!    of tree addresses; [`checker`] evaluates the translated formulas over
//!    those sets and searches for models within explicit bounds.
//!
//! The search never certifies unsatisfiability: a negative outcome is
//! always reported as "no model within bounds".

pub mod automata;
pub mod checker;
pub mod cli;
pub mod completion;
pub mod models;
pub mod simpleform;
pub mod sns;
pub mod syntax;
