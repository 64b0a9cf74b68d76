//! Finite first-order structures: an order, named relations and named
//! operations over one carrier.
//!
//! Every structure interprets `leq`. Purely relational structures use the
//! discrete order.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::fol::Signature;
use crate::order::{ElemId, OperationTable, OrderError, Poset};

/// Name of the order relation in every signature.
pub const LEQ: &str = "leq";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("symbol `{0}` is declared twice")]
    DuplicateSymbol(String),
    #[error("`{0}` is reserved for the order")]
    ReservedSymbol(String),
    #[error("relation `{name}`: {reason}")]
    BadRelation { name: String, reason: String },
    #[error("operation `{name}`: {source}")]
    BadOperation { name: String, source: OrderError },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    arity: usize,
    tuples: BTreeSet<Vec<ElemId>>,
}

impl Relation {
    pub fn new(arity: usize, tuples: impl IntoIterator<Item = Vec<ElemId>>) -> Relation {
        Relation {
            arity,
            tuples: tuples.into_iter().collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn tuples(&self) -> &BTreeSet<Vec<ElemId>> {
        &self.tuples
    }

    pub fn contains(&self, args: &[ElemId]) -> bool {
        self.tuples.contains(args)
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    name: String,
    order: Poset,
    relations: BTreeMap<String, Relation>,
    operations: BTreeMap<String, OperationTable>,
}

impl Structure {
    pub fn new(name: impl Into<String>, order: Poset) -> Structure {
        Structure {
            name: name.into(),
            order,
            relations: BTreeMap::new(),
            operations: BTreeMap::new(),
        }
    }

    /// A purely relational structure: discrete order on `labels`.
    pub fn relational(name: impl Into<String>, labels: Vec<String>) -> Result<Structure, OrderError> {
        Ok(Structure::new(name, Poset::discrete(labels)?))
    }

    fn check_fresh(&self, name: &str) -> Result<(), StructureError> {
        if name == LEQ {
            return Err(StructureError::ReservedSymbol(name.to_string()));
        }
        if self.relations.contains_key(name) || self.operations.contains_key(name) {
            return Err(StructureError::DuplicateSymbol(name.to_string()));
        }
        Ok(())
    }

    pub fn with_relation(mut self, name: &str, relation: Relation) -> Result<Structure, StructureError> {
        self.check_fresh(name)?;
        let bad = |reason: String| StructureError::BadRelation {
            name: name.to_string(),
            reason,
        };
        if relation.arity == 0 {
            return Err(bad("arity must be at least 1".into()));
        }
        for t in &relation.tuples {
            if t.len() != relation.arity {
                return Err(bad(format!("tuple of length {} for arity {}", t.len(), relation.arity)));
            }
            if let Some(&x) = t.iter().find(|&&x| x >= self.len()) {
                return Err(bad(format!("element id {x} outside carrier")));
            }
        }
        self.relations.insert(name.to_string(), relation);
        Ok(self)
    }

    pub fn with_operation(
        mut self,
        name: &str,
        table: OperationTable,
    ) -> Result<Structure, StructureError> {
        self.check_fresh(name)?;
        if table.size() != self.len() {
            return Err(StructureError::BadOperation {
                name: name.to_string(),
                source: OrderError::ArityCarrierMismatch {
                    table: table.size(),
                    poset: self.len(),
                },
            });
        }
        self.operations.insert(name.to_string(), table);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Structure {
        self.name = name.into();
        self
    }

    pub fn order(&self) -> &Poset {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        self.order.labels()
    }

    pub fn label(&self, id: ElemId) -> &str {
        self.order.label(id)
    }

    pub fn index_of(&self, label: &str) -> Option<ElemId> {
        self.order.index_of(label)
    }

    pub fn relations(&self) -> &BTreeMap<String, Relation> {
        &self.relations
    }

    pub fn operations(&self) -> &BTreeMap<String, OperationTable> {
        &self.operations
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.get(name)
    }

    pub fn operation(&self, name: &str) -> Option<&OperationTable> {
        self.operations.get(name)
    }

    /// Truth of `name(args)`; `leq` is the order. `None` for unknown names.
    pub fn holds(&self, name: &str, args: &[ElemId]) -> Option<bool> {
        if name == LEQ {
            return match args {
                [a, b] => Some(self.order.leq(*a, *b)),
                _ => None,
            };
        }
        self.relations.get(name).map(|r| r.contains(args))
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::order();
        for (name, r) in &self.relations {
            sig = sig
                .with_relation(name, r.arity())
                .expect("structure symbols are distinct");
        }
        for (name, op) in &self.operations {
            sig = sig
                .with_operation(name, op.arity())
                .expect("structure symbols are distinct");
        }
        sig
    }
}
