//! Complex algebras of relational structures, their atom structures, and the
//! canonical map comparing complex algebras with ultraproducts.

mod bao;
mod givant;

use thiserror::Error;

use crate::order::OrderError;
use crate::product::ProductError;
use crate::structure::StructureError;

pub use bao::{
    atom_structure, check_complete_operators, check_quasi_complete_operators, complex_algebra,
    Bao, JOIN, MEET, NEG,
};
pub use givant::{canonical_image, givant_check, GivantReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("{what} of size {size} exceeds the cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("`{0}` is reserved for the Boolean operations")]
    ReservedName(String),
    #[error("operator `{0}` declared twice")]
    DuplicateOperator(String),
    #[error("operator `{name}`: {reason}")]
    BadOperator { name: String, reason: String },
    #[error("relation `{0}` is unary; complex algebras need arity at least 2")]
    UnaryRelation(String),
    #[error("not a finite Boolean lattice: {0}")]
    NotBoolean(String),
    #[error("completion added elements that no class accounts for")]
    IncompleteAtFiniteScale,
    #[error(transparent)]
    Product(#[from] ProductError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}
