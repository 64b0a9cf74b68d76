//! Finite order structures: posets with operations, sup preservation,
//! first-order formulas and their evaluation, reduced products and
//! ultraproducts over filters on finite index sets, Dedekind–MacNeille
//! completions, and complex algebras of relational structures.
//!
//! Every filter on a finite index set is principal, so every ultraproduct
//! built here is isomorphic to one of its factors. The library checks the
//! constructions and the first-order machinery at this finite scale; the
//! nonprincipal case on infinite index sets is out of computational reach.

pub mod caps;
pub mod complex;
pub mod fixtures;
pub mod fol;
pub mod format;
pub mod gen;
pub mod order;
pub mod product;
pub mod structure;

pub use caps::Caps;
pub use order::{ElemId, OperationTable, Poset};
pub use structure::{Relation, Structure};
