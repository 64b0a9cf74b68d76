//! Filters on finite index sets, direct and reduced products, the Łoś
//! equivalence check, isomorphism search and the preservation check for
//! sup-preserving operations in ultraproducts.
//!
//! Every filter on a finite index set is principal, generated by the
//! intersection `J` of its members, so a filter is stored as `J` alone and
//! the ultrafilters are exactly those with `|J| = 1`. Nonprincipal
//! ultrafilters live on infinite index sets and have no finite witness; the
//! constructions here are the finite shadows of the general ones.

mod filter;
mod iso;
mod los;
mod preservation;
mod reduced;

use thiserror::Error;

use crate::fol::FolError;
use crate::order::OrderError;
use crate::structure::StructureError;

pub use filter::{make_filter, FilterSpec, IndexSet};
pub use iso::{is_isomorphism, iso_search};
pub use los::{los_check, LosChecker, LosReport};
pub use preservation::{
    preservation_check, quasi_preservation_check, theorem1_check, CaseOneTrace, OpVerdict,
    Theorem1Report,
};
pub use reduced::{direct_product, reduced_product, DirectProduct, Family, ReducedProduct};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProductError {
    #[error("filter generator is empty")]
    EmptyGenerator,
    #[error("index {index} is outside the index set of size {size}")]
    OutOfRangeIndex { index: usize, size: usize },
    #[error("index set must be nonempty")]
    EmptyIndexSet,
    #[error("filter is over {filter} indices but the family has {family} members")]
    IndexMismatch { filter: usize, family: usize },
    #[error("members do not share a signature: {0}")]
    SignatureMismatch(String),
    #[error("{what} of size {size} exceeds the cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("filter generated by {0:?} is not an ultrafilter")]
    NotUltra(Vec<usize>),
    #[error("operation `{op}` of member {member} fails the precondition: {detail}")]
    PreconditionFailed {
        member: usize,
        op: String,
        detail: String,
    },
    #[error("expected {expected} assignments, one per index, got {found}")]
    AssignmentCount { expected: usize, found: usize },
    #[error(transparent)]
    Fol(#[from] FolError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}
