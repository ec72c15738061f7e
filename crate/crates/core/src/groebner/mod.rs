//! Gröbner bases for ideals and submodules of free modules over `Q[x]`.
//!
//! The [`Engine`] bundles a monomial-order choice with resource limits and
//! exposes the derived operations: normal forms, membership with
//! coefficients, intersection, syzygies and elimination. Every result that
//! carries a witness is re-expanded before it is returned.

mod buchberger;
mod element;
mod engine;
mod order;

use std::time::{Duration, Instant};

use serde::Serialize;

pub use buchberger::{is_groebner_basis, GroebnerBasis};
pub use element::{ModuleElement, Submodule};
pub use engine::{Engine, Membership, OrderChoice};
pub use order::{Extension, ModuleOrder};

/// Caps on a single Gröbner basis computation.
#[derive(Clone, Debug)]
pub struct Limits {
    pub max_basis_size: usize,
    pub max_reductions: u64,
    pub deadline: Option<Instant>,
}

impl Limits {
    pub fn unbounded() -> Self {
        Limits {
            max_basis_size: usize::MAX,
            max_reductions: u64::MAX,
            deadline: None,
        }
    }

    pub fn with_timeout(mut self, budget: Duration) -> Self {
        self.deadline = Some(Instant::now() + budget);
        self
    }
}

impl Default for Limits {
    /// Generous enough for every bundled fixture.
    fn default() -> Self {
        Limits {
            max_basis_size: 20_000,
            max_reductions: 50_000_000,
            deadline: None,
        }
    }
}

/// Counters reported by Gröbner basis runs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GbStats {
    pub s_pairs: u64,
    pub reductions: u64,
    pub zero_reductions: u64,
    pub basis_size: usize,
}

impl GbStats {
    pub fn absorb(&mut self, other: &GbStats) {
        self.s_pairs += other.s_pairs;
        self.reductions += other.reductions;
        self.zero_reductions += other.zero_reductions;
        self.basis_size = self.basis_size.max(other.basis_size);
    }
}
