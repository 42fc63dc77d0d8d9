//! The ordinal notation system `OT` for Π_N-reflection.
//!
//! Terms are built with the builders in [`arith`] or parsed with
//! [`syntax::parse_ord`]; every operation that needs the term order runs
//! through a [`Notation`], which fixes `N` and owns the memo tables.

pub mod arith;
pub mod cnf;
pub mod error;
pub mod oracle;
pub mod order;
pub mod sd;
pub mod syntax;
pub mod term;
pub mod validate;

use std::sync::Arc;

use dashmap::DashMap;

pub use error::{OtError, Result};
pub use sd::SdDerivation;
pub use term::{CoeffSeq, ExponentTerm, KSet, LamTerm, OrdKind, OrdinalTerm, SystemParams};
pub use validate::{Rule, ValidationReport};

const MEMO_LIMIT: usize = 1 << 21;

/// A term universe for one value of `N`, with shared memo tables.
///
/// The caches only ever hold results of pure functions, so sharing a
/// `Notation` between threads gives the same answers as using it alone.
pub struct Notation {
    params: SystemParams,
    psi_lt: DashMap<(OrdinalTerm, OrdinalTerm), bool>,
    reports: DashMap<OrdinalTerm, Arc<ValidationReport>>,
    sd: DashMap<Vec<ExponentTerm>, Option<Arc<SdDerivation>>>,
}

impl Notation {
    pub fn new(params: SystemParams) -> Self {
        Self {
            params,
            psi_lt: DashMap::new(),
            reports: DashMap::new(),
            sd: DashMap::new(),
        }
    }

    pub fn with_n(n: usize) -> Result<Self> {
        Ok(Self::new(SystemParams::new(n)?))
    }

    pub fn params(&self) -> SystemParams {
        self.params
    }

    pub fn n(&self) -> usize {
        self.params.n()
    }

    /// Drops all memoized results.
    pub fn clear_caches(&self) {
        self.psi_lt.clear();
        self.reports.clear();
        self.sd.clear();
    }

    fn trim_memo(&self) {
        if self.psi_lt.len() > MEMO_LIMIT {
            self.psi_lt.clear();
        }
    }
}

impl std::fmt::Debug for Notation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Notation").field("params", &self.params).finish()
    }
}
