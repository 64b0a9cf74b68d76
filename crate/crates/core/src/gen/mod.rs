//! Seeded random generators and the randomized test campaign.

mod campaign;
mod random;

use thiserror::Error;

use crate::order::OrderError;
use crate::structure::StructureError;

pub use campaign::{
    parse_properties, preservation_family, run_campaign, trial_rng, CampaignConfig, CampaignReport,
    Failure, Property, PropertyReport,
};
pub use random::{
    all_labeled_posets, downset_lattice, extend_by_joins, gen_additive_op, gen_downset_lattice,
    gen_monotone_op, gen_poset, gen_quasi_op, gen_relational_structure, is_distributive_lattice,
    rng,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("{what} size {size} is outside 1..={max}")]
    SizeOutOfRange {
        what: &'static str,
        size: usize,
        max: usize,
    },
    #[error("the carrier is not a distributive lattice")]
    NotDownsetLattice,
    #[error("{what} of size {size} exceeds the cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("campaign configuration out of range: {0}")]
    ConfigOutOfRange(String),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}
