//! Exact solvers for quantitative two-player games on finite weighted arenas,
//! centered on the average-energy payoff: the long-run average of the running
//! sum of edge weights.
//!
//! The crate provides:
//!
//! * an arena model ([`game::GameGraph`]) with owner-partitioned states and
//!   arbitrary-precision integer weights,
//! * closed-form payoff evaluation of ultimately-periodic plays
//!   ([`payoff::lasso_payoffs`]),
//! * a mean-payoff / energy backend ([`mp`]) that every other solver reduces
//!   to,
//! * average-energy solvers for the unconstrained, lower-bounded, and
//!   lower+upper-bounded variants ([`ae`], [`ael`], [`bounded`]),
//! * generators for the hardness constructions used as test fixtures
//!   ([`reduce`]),
//! * brute-force oracles ([`oracle`]) that ground-truth every solver at desk
//!   scale.
//!
//! All arithmetic is exact: weights are big integers, payoff values are big
//! rationals extended with the two infinities. There is no floating point
//! anywhere in the solving paths.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the `std` feature
//! (default) only relaxes dependency builds and adds `std::error::Error`
//! impls.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod ae;
pub mod ael;
pub mod bounded;
pub mod game;
mod intern;
pub mod mp;
pub mod oracle;
mod outcome;
pub mod payoff;
pub mod reduce;
pub mod simplex;
pub mod value;

pub use game::{GameGraph, Player, StateId, Weight};
pub use outcome::{Diagnostics, SolveOutcome, Status, Witness};
pub use payoff::{Lasso, Objective};
pub use value::{ExtRational, Rational};

use alloc::string::String;
use core::fmt;

/// Errors shared by the solver entry points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveError {
    /// An operation restricted to one-player games was called on a game where
    /// both players own states.
    TwoPlayerInput,
    /// An operation expected the sole owner to be the given player.
    WrongSoleOwner(Player),
    /// An enumeration exceeded its configured budget.
    BudgetExceeded(String),
    /// A pseudo-polynomial expansion would not fit in memory.
    ExpansionTooLarge(String),
    /// A caller-side precondition was detected to be violated.
    PreconditionViolated(String),
    /// A parameter combination is invalid or infeasible.
    InvalidParameter(String),
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::TwoPlayerInput => write!(f, "operation requires a one-player game"),
            SolveError::WrongSoleOwner(p) => {
                write!(f, "operation requires all states to belong to {p}")
            }
            SolveError::BudgetExceeded(what) => write!(f, "budget exceeded: {what}"),
            SolveError::ExpansionTooLarge(what) => write!(f, "expansion too large: {what}"),
            SolveError::PreconditionViolated(what) => write!(f, "precondition violated: {what}"),
            SolveError::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SolveError {}
