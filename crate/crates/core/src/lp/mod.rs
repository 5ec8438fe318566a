//! Equilibria by linear programming, independent of the closed forms.

mod game_lp;
mod simplex;

pub use game_lp::{build_dual, build_primal, solve_lp_equilibrium, solve_ne_lp, LpEquilibrium};
pub use simplex::{simplex_solve, Direction, LinearProgram, LpOutcome, Sense};
