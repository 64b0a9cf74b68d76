use std::collections::BTreeMap;

use crate::order::ElemId;
use crate::structure::Structure;

use super::{FolError, Formula, Term};

/// Values for the free names of a formula.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<String, ElemId>);

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn with(mut self, name: &str, value: ElemId) -> Assignment {
        self.0.insert(name.to_string(), value);
        self
    }

    pub fn insert(&mut self, name: &str, value: ElemId) {
        self.0.insert(name.to_string(), value);
    }

    pub fn get(&self, name: &str) -> Option<ElemId> {
        self.0.get(name).copied()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, ElemId)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }
}

impl<S: AsRef<str>> FromIterator<(S, ElemId)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (S, ElemId)>>(iter: I) -> Self {
        Assignment(
            iter.into_iter()
                .map(|(k, v)| (k.as_ref().to_string(), v))
                .collect(),
        )
    }
}

/// Tarskian truth of `phi` in `m` under `a`; quantifiers range over the whole
/// carrier.
pub fn evaluate(m: &Structure, phi: &Formula, a: &Assignment) -> Result<bool, FolError> {
    let sig = m.signature();
    let (rels, ops) = phi.symbols();
    for (name, arity) in &rels {
        if sig.relation_arity(name) != Some(*arity) {
            return Err(FolError::SignatureMismatch(format!(
                "relation `{name}/{arity}` is not interpreted in `{}`",
                m.name()
            )));
        }
    }
    for (name, arity) in &ops {
        if sig.operation_arity(name) != Some(*arity) {
            return Err(FolError::SignatureMismatch(format!(
                "operation `{name}/{arity}` is not interpreted in `{}`",
                m.name()
            )));
        }
    }
    for name in phi.free_vars() {
        match a.get(&name) {
            None => return Err(FolError::UnboundName(name)),
            Some(id) if id >= m.len() => return Err(FolError::UnknownElement { name, id }),
            Some(_) => {}
        }
    }
    Ok(Evaluator { m, a, env: Vec::new() }.formula(phi))
}

struct Evaluator<'a> {
    m: &'a Structure,
    a: &'a Assignment,
    env: Vec<(&'a str, ElemId)>,
}

impl<'a> Evaluator<'a> {
    fn lookup(&self, name: &str) -> ElemId {
        self.env
            .iter()
            .rev()
            .find(|(n, _)| *n == name)
            .map(|&(_, v)| v)
            .or_else(|| self.a.get(name))
            .expect("free names checked before evaluation")
    }

    fn term(&self, t: &Term) -> ElemId {
        match t {
            Term::Var(v) => self.lookup(v),
            Term::App(op, args) => {
                let args: Vec<ElemId> = args.iter().map(|t| self.term(t)).collect();
                self.m.operation(op).expect("signature checked").apply(&args)
            }
        }
    }

    fn formula(&mut self, phi: &'a Formula) -> bool {
        match phi {
            Formula::Rel(r, args) => {
                let args: Vec<ElemId> = args.iter().map(|t| self.term(t)).collect();
                self.m.holds(r, &args).expect("signature checked")
            }
            Formula::Eq(a, b) => self.term(a) == self.term(b),
            Formula::Not(a) => !self.formula(a),
            Formula::And(a, b) => self.formula(a) && self.formula(b),
            Formula::Or(a, b) => self.formula(a) || self.formula(b),
            Formula::Implies(a, b) => !self.formula(a) || self.formula(b),
            Formula::Forall(v, body) => self.quantify(v, body, true),
            Formula::Exists(v, body) => self.quantify(v, body, false),
        }
    }

    fn quantify(&mut self, var: &'a str, body: &'a Formula, universal: bool) -> bool {
        for x in 0..self.m.len() {
            self.env.push((var, x));
            let value = self.formula(body);
            self.env.pop();
            if value != universal {
                return value;
            }
        }
        universal
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::fol::{parse_formula, Signature};
    use crate::order::OperationTable;

    fn order_sentence(text: &str) -> Formula {
        parse_formula(text, &Signature::order()).unwrap()
    }

    #[test]
    fn chain_has_a_top() {
        let m = Structure::new("c2", fixtures::two_chain());
        let phi = order_sentence("forall x. exists y. x <= y");
        assert!(evaluate(&m, &phi, &Assignment::new()).unwrap());
        let top = order_sentence("exists y. forall x. x <= y");
        assert!(evaluate(&m, &top, &Assignment::new()).unwrap());
    }

    #[test]
    fn antichain_has_no_top() {
        let m = Structure::new("a2", fixtures::antichain(2));
        let phi = order_sentence("exists y. forall x. x <= y");
        assert!(!evaluate(&m, &phi, &Assignment::new()).unwrap());
    }

    #[test]
    fn equality_and_shadowing() {
        let m = Structure::new("c3", fixtures::three_chain());
        let phi = order_sentence("exists x. x = y & (forall y. y <= y)");
        assert!(evaluate(&m, &phi, &Assignment::new().with("y", 2)).unwrap());
    }

    #[test]
    fn errors() {
        let m = Structure::new("c2", fixtures::two_chain());
        let phi = order_sentence("x <= y");
        assert_eq!(
            evaluate(&m, &phi, &Assignment::new().with("x", 0)),
            Err(FolError::UnboundName("y".into()))
        );
        assert!(matches!(
            evaluate(&m, &phi, &Assignment::new().with("x", 0).with("y", 7)),
            Err(FolError::UnknownElement { id: 7, .. })
        ));
        let sig = Signature::order().with_operation("f", 1).unwrap();
        let with_f = parse_formula("f(x) <= x", &sig).unwrap();
        assert!(matches!(
            evaluate(&m, &with_f, &Assignment::new().with("x", 0)),
            Err(FolError::SignatureMismatch(_))
        ));
    }

    #[test]
    fn operations_are_applied() {
        let m = Structure::new("c2", fixtures::two_chain())
            .with_operation("f", OperationTable::constant(1, 2, 1).unwrap())
            .unwrap();
        let sig = m.signature();
        let phi = parse_formula("forall x. x <= f(x)", &sig).unwrap();
        assert!(evaluate(&m, &phi, &Assignment::new()).unwrap());
    }
}
