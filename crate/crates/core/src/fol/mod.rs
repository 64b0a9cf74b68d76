//! First-order syntax over ordered signatures: terms, formulas, a parser for
//! the text form, a Tarskian evaluator over finite [`Structure`]s, and the
//! formulas that transfer a supremum argument between a structure and its
//! factors.
//!
//! Text form:
//!
//! ```text
//! formula := 'forall' ident '.' formula | 'exists' ident '.' formula | imp
//! imp     := disj ('->' imp)?
//! disj    := conj ('|' conj)*
//! conj    := neg ('&' neg)*
//! neg     := '!' neg | atom
//! atom    := term '<=' term | term '=' term | R '(' term, .. ')' | '(' formula ')'
//! term    := ident | ident '(' term (',' term)* ')'
//! ```
//!
//! A quantifier's body extends as far right as possible.
//!
//! [`Structure`]: crate::structure::Structure

mod corpus;
mod eval;
mod parser;
mod transfer;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::structure::LEQ;

pub use corpus::formula_corpus;
pub use eval::{evaluate, Assignment};
pub use parser::parse_formula;
pub use transfer::{
    build_transfer_formulas, replay_proof, Precondition, ProofReport, ReplayError, Replayer,
    TransferFormulas,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FolError {
    #[error("syntax error at {pos}: expected {}, found {found}", .expected.join(" or "))]
    Syntax {
        pos: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("unknown symbol `{name}` at {pos}")]
    UnknownSymbol { name: String, pos: usize },
    #[error("`{name}` takes {expected} argument(s), found {found} at {pos}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
        pos: usize,
    },
    #[error("unbound name `{0}`")]
    UnboundName(String),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("symbol `{0}` declared twice")]
    DuplicateSymbol(String),
    #[error("symbol `{0}` needs arity at least 1")]
    ZeroArity(String),
    #[error("`{name}` is assigned element {id}, outside the carrier")]
    UnknownElement { name: String, id: usize },
}

/// Relation and operation symbols with their arities. Always contains `leq/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    relations: BTreeMap<String, usize>,
    operations: BTreeMap<String, usize>,
}

impl Signature {
    /// The signature of posets: just `leq/2`.
    pub fn order() -> Signature {
        Signature {
            relations: BTreeMap::from([(LEQ.to_string(), 2)]),
            operations: BTreeMap::new(),
        }
    }

    fn check_fresh(&self, name: &str, arity: usize) -> Result<(), FolError> {
        if self.relations.contains_key(name) || self.operations.contains_key(name) {
            return Err(FolError::DuplicateSymbol(name.to_string()));
        }
        if arity == 0 {
            return Err(FolError::ZeroArity(name.to_string()));
        }
        Ok(())
    }

    pub fn with_relation(mut self, name: &str, arity: usize) -> Result<Signature, FolError> {
        self.check_fresh(name, arity)?;
        self.relations.insert(name.to_string(), arity);
        Ok(self)
    }

    pub fn with_operation(mut self, name: &str, arity: usize) -> Result<Signature, FolError> {
        self.check_fresh(name, arity)?;
        self.operations.insert(name.to_string(), arity);
        Ok(self)
    }

    pub fn relation_arity(&self, name: &str) -> Option<usize> {
        self.relations.get(name).copied()
    }

    pub fn operation_arity(&self, name: &str) -> Option<usize> {
        self.operations.get(name).copied()
    }

    pub fn relations(&self) -> &BTreeMap<String, usize> {
        &self.relations
    }

    pub fn operations(&self) -> &BTreeMap<String, usize> {
        &self.operations
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn app(op: &str, args: Vec<Term>) -> Term {
        Term::App(op.to_string(), args)
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    fn collect_ops(&self, out: &mut BTreeMap<String, usize>) {
        if let Term::App(op, args) = self {
            out.insert(op.clone(), args.len());
            args.iter().for_each(|a| a.collect_ops(out));
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::App(op, args) => {
                write!(f, "{op}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Rel(String, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn leq(a: Term, b: Term) -> Formula {
        Formula::Rel(LEQ.to_string(), vec![a, b])
    }

    pub fn negation(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
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

    pub fn forall(var: &str, body: Formula) -> Formula {
        Formula::Forall(var.to_string(), Box::new(body))
    }

    pub fn exists(var: &str, body: Formula) -> Formula {
        Formula::Exists(var.to_string(), Box::new(body))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        let mut add_terms = |terms: &[&Term], bound: &Vec<&str>| {
            let mut vars = BTreeSet::new();
            terms.iter().for_each(|t| t.collect_vars(&mut vars));
            out.extend(vars.into_iter().filter(|v| !bound.contains(&v.as_str())));
        };
        match self {
            Formula::Rel(_, args) => add_terms(&args.iter().collect::<Vec<_>>(), bound),
            Formula::Eq(a, b) => add_terms(&[a, b], bound),
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                bound.push(v);
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Relation symbols (with arities) and operation symbols (with arities)
    /// used anywhere in the formula.
    pub fn symbols(&self) -> (BTreeMap<String, usize>, BTreeMap<String, usize>) {
        let mut rels = BTreeMap::new();
        let mut ops = BTreeMap::new();
        self.collect_symbols(&mut rels, &mut ops);
        (rels, ops)
    }

    fn collect_symbols(&self, rels: &mut BTreeMap<String, usize>, ops: &mut BTreeMap<String, usize>) {
        match self {
            Formula::Rel(r, args) => {
                rels.insert(r.clone(), args.len());
                args.iter().for_each(|t| t.collect_ops(ops));
            }
            Formula::Eq(a, b) => {
                a.collect_ops(ops);
                b.collect_ops(ops);
            }
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => {
                a.collect_symbols(rels, ops)
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_symbols(rels, ops);
                b.collect_symbols(rels, ops);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Forall(..) | Formula::Exists(..) => 0,
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Not(..) => 4,
            Formula::Rel(..) | Formula::Eq(..) => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Formula::Rel(r, args) if r == LEQ && args.len() == 2 => {
                write!(f, "{} <= {}", args[0], args[1])
            }
            Formula::Rel(r, args) => write!(f, "{}", Term::App(r.clone(), args.clone())),
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Not(a) => {
                f.write_str("!")?;
                a.write_at(f, 4)
            }
            Formula::And(a, b) => {
                a.write_at(f, 3)?;
                f.write_str(" & ")?;
                b.write_at(f, 4)
            }
            Formula::Or(a, b) => {
                a.write_at(f, 2)?;
                f.write_str(" | ")?;
                b.write_at(f, 3)
            }
            Formula::Implies(a, b) => {
                a.write_at(f, 2)?;
                f.write_str(" -> ")?;
                b.write_at(f, 1)
            }
            Formula::Forall(v, body) => {
                write!(f, "forall {v}. ")?;
                body.write_at(f, 0)
            }
            Formula::Exists(v, body) => {
                write!(f, "exists {v}. ")?;
                body.write_at(f, 0)
            }
        }
    }
}

/// Prints with the fewest parentheses that reparse to the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_vars_respect_binding() {
        let x = || Term::var("x");
        let phi = Formula::forall(
            "x",
            Formula::implies(
                Formula::leq(x(), Term::var("s")),
                Formula::exists("s", Formula::leq(Term::var("s"), x())),
            ),
        );
        assert_eq!(phi.free_vars(), BTreeSet::from(["s".to_string()]));
    }

    #[test]
    fn printer_parenthesizes_only_where_needed() {
        let a = || Formula::leq(Term::var("a"), Term::var("b"));
        let phi = Formula::implies(Formula::forall("x", a()), Formula::and(a(), Formula::negation(a())));
        assert_eq!(phi.to_string(), "(forall x. a <= b) -> a <= b & !a <= b");
        let nested = Formula::and(a(), Formula::or(a(), a()));
        assert_eq!(nested.to_string(), "a <= b & (a <= b | a <= b)");
    }

    #[test]
    fn signature_rejects_duplicates() {
        let sig = Signature::order().with_operation("f", 1).unwrap();
        assert_eq!(
            sig.clone().with_relation("f", 2).unwrap_err(),
            FolError::DuplicateSymbol("f".into())
        );
        assert_eq!(
            sig.with_operation("c", 0).unwrap_err(),
            FolError::ZeroArity("c".into())
        );
    }
}
