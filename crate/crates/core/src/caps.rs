//! Enumeration limits shared by every exhaustive check.
//!
//! The defaults keep each check at desk scale (a few million subset tuples at
//! worst). A process may install raised limits once, before the first check
//! runs; the CLI does this from the `ULTRAPOSET_CAPS` environment variable.

use std::sync::OnceLock;

use thiserror::Error;

static INSTALLED: OnceLock<Caps> = OnceLock::new();

/// Hard ceiling for subset enumeration: masks are `u64` and the sup table has
/// `2^n` entries.
pub const MAX_ENUMERATION_CARRIER: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest carrier for exhaustive additivity checks of a unary operation.
    pub additive1: usize,
    pub additive2: usize,
    pub additive3: usize,
    /// Largest number of cuts `dm_completion` will materialize.
    pub completion: usize,
    /// Largest direct-product carrier before quotienting.
    pub product: usize,
    /// Largest carrier accepted by isomorphism search.
    pub iso: usize,
    /// Largest atom count for a powerset (complex) algebra.
    pub powerset: usize,
    /// Largest operation table materialized for a constructed structure.
    pub table: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            additive1: 12,
            additive2: 8,
            additive3: 5,
            completion: 4096,
            product: 4096,
            iso: 64,
            powerset: 6,
            table: 1 << 22,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CapsError {
    #[error("malformed cap entry `{0}` (expected key=value)")]
    Malformed(String),
    #[error("unknown cap key `{0}`")]
    UnknownKey(String),
    #[error("caps were already installed for this process")]
    AlreadyInstalled,
}

impl Caps {
    /// The caps in force: the installed ones, or the defaults.
    pub fn current() -> Caps {
        INSTALLED.get().copied().unwrap_or_default()
    }

    /// Installs process-wide caps. Only the first call succeeds.
    pub fn install(self) -> Result<(), CapsError> {
        INSTALLED.set(self).map_err(|_| CapsError::AlreadyInstalled)
    }

    /// Parses `key=value,key=value` on top of the defaults.
    pub fn parse(text: &str) -> Result<Caps, CapsError> {
        let mut caps = Caps::default();
        for entry in text.split(',').map(str::trim).filter(|e| !e.is_empty()) {
            let (key, value) = entry
                .split_once('=')
                .ok_or_else(|| CapsError::Malformed(entry.to_string()))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| CapsError::Malformed(entry.to_string()))?;
            let slot = match key.trim() {
                "additive1" => &mut caps.additive1,
                "additive2" => &mut caps.additive2,
                "additive3" => &mut caps.additive3,
                "completion" => &mut caps.completion,
                "product" => &mut caps.product,
                "iso" => &mut caps.iso,
                "powerset" => &mut caps.powerset,
                "table" => &mut caps.table,
                other => return Err(CapsError::UnknownKey(other.to_string())),
            };
            *slot = value;
        }
        Ok(caps)
    }

    /// Largest carrier for which sup preservation of an `arity`-ary operation
    /// is checked by exhaustive subset enumeration.
    pub fn additive_carrier(&self, arity: usize) -> usize {
        let cap = match arity {
            0 | 1 => self.additive1,
            2 => self.additive2,
            3 => self.additive3,
            n => 16 / n,
        };
        cap.min(MAX_ENUMERATION_CARRIER)
    }
}
