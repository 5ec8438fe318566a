//! The transmitter's max-min program and the jammer's min-max program.
//!
//! With strategies as row vectors, the transmitter's feasible set is
//! `x B <= c` (`B = [1 | -1]`, `c = [1, -1]`, i.e. `sum x = 1`) and the
//! jammer's is `y E^T >= f` (`E^T = [1 | -1 | -J]`, `f = [1, -1, -J_ave]`).
//! Dualizing the inner minimization turns the transmitter's problem into
//!
//! ```text
//! max  z1 - z2 - J_ave z3   s.t.  z E - x Z <= 0,  x B <= c,  x, z >= 0
//! ```
//!
//! and the jammer's into
//!
//! ```text
//! min  s1 - s2              s.t.  s B^T - y Z^T >= 0,  y E^T >= f,  y, s >= 0
//! ```
//!
//! The two are LP duals of each other, so their optima coincide.

use crate::analytic::{breakpoints, NESolution};
use crate::error::{Error, Result};
use crate::game::{ConstrainedGame, MatrixGame, MixedStrategy};
use crate::lp::simplex::{simplex_solve, Direction, LinearProgram, LpOutcome, Sense};

/// Variables `(x_0..x_{rows-1}, z1, z2, z3)`.
pub fn build_primal<G: MatrixGame + ?Sized>(game: &G) -> LinearProgram {
    let rows = game.num_rows();
    let cols = game.num_cols();
    let powers = game.powers().powers();
    let width = rows + 3;

    let mut objective = vec![0.0; width];
    objective[rows] = 1.0;
    objective[rows + 1] = -1.0;
    objective[rows + 2] = -game.budget();
    let mut names: Vec<String> = (0..rows).map(|i| format!("x{i}")).collect();
    names.extend(["z1", "z2", "z3"].map(String::from));
    let mut lp = LinearProgram::new(Direction::Maximize, objective).with_names(names);

    // One row per jammer column: z1 - z2 - J_j z3 - sum_i x_i Z_ij <= 0.
    for j in 0..cols {
        let mut row = vec![0.0; width];
        for (i, v) in row.iter_mut().enumerate().take(rows) {
            *v = -game.payoff(i, j);
        }
        row[rows] = 1.0;
        row[rows + 1] = -1.0;
        row[rows + 2] = -powers[j];
        lp.add_constraint(row, Sense::Le, 0.0);
    }
    let mut sum = vec![0.0; width];
    sum[..rows].fill(1.0);
    lp.add_constraint(sum.clone(), Sense::Le, 1.0);
    lp.add_constraint(sum.iter().map(|v| -v).collect(), Sense::Le, -1.0);
    lp
}

/// Variables `(y_0..y_{cols-1}, s1, s2)`.
pub fn build_dual<G: MatrixGame + ?Sized>(game: &G) -> LinearProgram {
    let rows = game.num_rows();
    let cols = game.num_cols();
    let powers = game.powers().powers();
    let width = cols + 2;

    let mut objective = vec![0.0; width];
    objective[cols] = 1.0;
    objective[cols + 1] = -1.0;
    let mut names: Vec<String> = (0..cols).map(|j| format!("y{j}")).collect();
    names.extend(["s1", "s2"].map(String::from));
    let mut lp = LinearProgram::new(Direction::Minimize, objective).with_names(names);

    // One row per transmitter action: s1 - s2 - sum_j Z_ij y_j >= 0.
    for i in 0..rows {
        let mut row = vec![0.0; width];
        for (j, v) in row.iter_mut().enumerate().take(cols) {
            *v = -game.payoff(i, j);
        }
        row[cols] = 1.0;
        row[cols + 1] = -1.0;
        lp.add_constraint(row, Sense::Ge, 0.0);
    }
    let mut sum = vec![0.0; width];
    sum[..cols].fill(1.0);
    lp.add_constraint(sum.clone(), Sense::Ge, 1.0);
    lp.add_constraint(sum.iter().map(|v| -v).collect(), Sense::Ge, -1.0);
    let mut power = vec![0.0; width];
    for (v, &p) in power.iter_mut().zip(powers) {
        *v = -p;
    }
    lp.add_constraint(power, Sense::Ge, -game.budget());
    lp
}

/// Both programs solved, with strategies read off their optimal points.
#[derive(Debug, Clone, PartialEq)]
pub struct LpEquilibrium {
    /// Primal (transmitter) optimum.
    pub value: f64,
    /// Dual (jammer) optimum.
    pub dual_value: f64,
    pub x: MixedStrategy,
    pub y: MixedStrategy,
}

fn expect_optimum(outcome: LpOutcome, which: &str) -> Result<(f64, Vec<f64>)> {
    match outcome {
        LpOutcome::Optimal { value, point } => Ok((value, point)),
        // The program always has a feasible point (z3 = 0, z1 <= z2) and is
        // bounded by max Z_ij, so neither branch can happen for a valid game.
        LpOutcome::Infeasible => Err(Error::ContractViolation(format!(
            "{which} program reported infeasible"
        ))),
        LpOutcome::Unbounded => Err(Error::ContractViolation(format!(
            "{which} program reported unbounded"
        ))),
    }
}

pub fn solve_lp_equilibrium<G: MatrixGame + ?Sized>(game: &G) -> Result<LpEquilibrium> {
    let (value, primal_point) = expect_optimum(simplex_solve(&build_primal(game)), "transmitter")?;
    let (dual_value, dual_point) = expect_optimum(simplex_solve(&build_dual(game)), "jammer")?;
    let x = MixedStrategy::from_solver(primal_point[..game.num_rows()].to_vec())?;
    let y = MixedStrategy::from_solver(dual_point[..game.num_cols()].to_vec())?
        .with_powers(game.powers())?;
    Ok(LpEquilibrium {
        value,
        dual_value,
        x,
        y,
    })
}

/// LP counterpart of [`crate::analytic::solve`]. The segment index and
/// breakpoint table are filled in for reporting only; value and strategies
/// come from the programs alone.
pub fn solve_ne_lp(game: &ConstrainedGame) -> Result<NESolution> {
    let eq = solve_lp_equilibrium(game)?;
    let table = breakpoints(game.matrix(), game.jammer_powers());
    Ok(NESolution {
        x_star: eq.x,
        y_star: eq.y,
        value: eq.value,
        segment_m: table.segment(game.j_ave()),
        breakpoints: table,
    })
}
