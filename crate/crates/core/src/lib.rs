//! Constrained zero-sum jamming games: a transmitter picks a rate, a jammer
//! picks a power under an average-power budget, and a packet survives when
//! the jamming power is within the rate's tolerance.
//!
//! [`analytic::solve`] gives the closed-form equilibrium, [`lp::solve_ne_lp`]
//! an independent LP solution, and [`awgn`] builds games from AWGN capacity.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analytic;
pub mod awgn;
pub mod doc;
pub mod error;
pub mod game;
pub mod jammers;
pub mod lp;
pub mod sim;
pub mod tol;

pub use analytic::{breakpoints, solve, BreakpointTable, NESolution};
pub use error::{Error, Result};
pub use game::{
    best_response_jammer, best_response_transmitter, epsilon_ne_check, expected_payoff,
    ConstrainedGame, JammerActionSet, MatrixGame, MixedStrategy, NeCheck, PayoffMatrix, RectGame,
    TransmitterActionSet, TxAction,
};
pub use lp::solve_ne_lp;
pub use sim::{simulate, simulate_parallel, SimReport};
