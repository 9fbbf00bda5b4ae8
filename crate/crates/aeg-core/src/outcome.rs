//! The common result shape returned by every solver entry point.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::bounded::MooreStrategy;
use crate::mp::MemorylessStrategy;
use crate::payoff::Lasso;
use crate::value::ExtRational;
use crate::Player;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Win,
    Lose,
    Unknown,
}

impl core::fmt::Display for Status {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Status::Win => f.write_str("WIN"),
            Status::Lose => f.write_str("LOSE"),
            Status::Unknown => f.write_str("UNKNOWN"),
        }
    }
}

/// Strategy or play certifying a verdict.
#[derive(Clone, Debug)]
pub enum Witness {
    /// A positional strategy on the solved arena, for the given player.
    Positional {
        player: Player,
        strategy: MemorylessStrategy,
    },
    /// A finite-memory strategy, reported as a Moore machine.
    Moore(MooreStrategy),
    /// An optimal ultimately-periodic play (one-player solvers).
    Lasso(Lasso),
}

/// Machine-readable provenance attached to every outcome.
#[derive(Clone, Debug, Default)]
pub struct Diagnostics {
    /// Which solving route produced the verdict.
    pub route: String,
    /// Largest energy cap tried by an incremental solver.
    pub largest_u_tried: Option<BigUint>,
    /// Cap at which a win was found, when applicable.
    pub winning_u: Option<BigUint>,
    /// Free-form notes (guarantees, fallbacks taken).
    pub notes: Vec<String>,
}

/// Decision status, optimal value when one was computed, witness, and
/// diagnostics.
#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub status: Status,
    pub value: Option<ExtRational>,
    pub witness: Option<Witness>,
    pub diagnostics: Diagnostics,
}

impl SolveOutcome {
    pub fn new(status: Status, route: &str) -> SolveOutcome {
        SolveOutcome {
            status,
            value: None,
            witness: None,
            diagnostics: Diagnostics {
                route: String::from(route),
                ..Diagnostics::default()
            },
        }
    }

    pub fn with_value(mut self, v: ExtRational) -> Self {
        self.value = Some(v);
        self
    }

    pub fn with_witness(mut self, w: Witness) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn witness_lasso(&self) -> Option<&Lasso> {
        match &self.witness {
            Some(Witness::Lasso(l)) => Some(l),
            _ => None,
        }
    }
}
