//! Closed-form equilibria of the square lower-triangular game.
//!
//! With `Z_0 > ... > Z_{N_T}` and powers `0 = J_0 < ... < J_{N_T}`, the
//! breakpoint
//!
//! ```text
//! J_ave,m = Z_m * sum_{j=1..m} (1/Z_j - 1/Z_{j-1}) * J_j
//! ```
//!
//! is the budget at which the game value equals `Z_m`. Between consecutive
//! breakpoints the value is linear in the budget, and from the last one,
//! the jamming threshold `J_TH = J_ave,N_T`, it stays at `Z_{N_T}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{ConstrainedGame, JammerActionSet, MixedStrategy, PayoffMatrix};

/// Relative distance below a breakpoint still treated as on it.
const BREAKPOINT_SNAP: f64 = 1e-12;

/// Breakpoints `J_ave,0 .. J_ave,N_T` and the threshold `J_TH = J_ave,N_T`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BreakpointTable {
    pub j_ave_m: Vec<f64>,
    pub j_th: f64,
}

impl BreakpointTable {
    /// Segment containing `j_ave`: the largest `m < N_T` with
    /// `j_ave_m[m] <= j_ave`, or `N_T` at and above the threshold. A budget
    /// equal to a breakpoint belongs to the segment starting there, where
    /// "equal" allows for round-off in the breakpoint itself. The threshold
    /// comparison is exact.
    pub fn segment(&self, j_ave: f64) -> usize {
        let n_t = self.j_ave_m.len() - 1;
        if j_ave >= self.j_th {
            return n_t;
        }
        let reached = |b: f64| b <= j_ave || (b - j_ave) <= BREAKPOINT_SNAP * b.abs();
        let above = self.j_ave_m[..n_t].partition_point(|&b| reached(b));
        above.saturating_sub(1)
    }
}

/// Equilibrium strategies, value and the breakpoint context they came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NESolution {
    pub x_star: MixedStrategy,
    pub y_star: MixedStrategy,
    pub value: f64,
    pub segment_m: usize,
    pub breakpoints: BreakpointTable,
}

pub fn breakpoints(matrix: &PayoffMatrix, powers: &JammerActionSet) -> BreakpointTable {
    let z = matrix.row_payoffs();
    let j = powers.powers();
    let mut j_ave_m = Vec::with_capacity(z.len());
    let mut sum = 0.0;
    j_ave_m.push(0.0);
    for m in 1..z.len() {
        sum += (1.0 / z[m] - 1.0 / z[m - 1]) * j[m];
        j_ave_m.push(z[m] * sum);
    }
    let j_th = *j_ave_m.last().expect("at least one row");
    BreakpointTable { j_ave_m, j_th }
}

/// Jammer strategy `Z_m * [1/Z_0, 1/Z_1 - 1/Z_0, ..., 1/Z_m - 1/Z_{m-1}, 0...]`,
/// which holds every transmitter row `i <= m` to exactly `Z_m`.
fn staircase_jammer(z: &[f64], m: usize, scale: f64) -> Vec<f64> {
    let mut y = vec![0.0; z.len()];
    y[0] = scale * z[m] / z[0];
    for j in 1..=m {
        y[j] = scale * z[m] * (1.0 / z[j] - 1.0 / z[j - 1]);
    }
    y
}

pub fn solve(game: &ConstrainedGame) -> Result<NESolution> {
    let matrix = game.matrix();
    let powers = game.jammer_powers();
    let z = matrix.row_payoffs();
    let j = powers.powers();
    let n_t = matrix.last();
    let table = breakpoints(matrix, powers);
    let j_ave = game.j_ave();

    if j_ave >= table.j_th {
        let x_star = MixedStrategy::pure(n_t + 1, n_t);
        let y_star =
            MixedStrategy::from_solver(staircase_jammer(z, n_t, 1.0))?.with_powers(powers)?;
        return Ok(NESolution {
            x_star,
            y_star,
            value: z[n_t],
            segment_m: n_t,
            breakpoints: table,
        });
    }

    let m = table.segment(j_ave);
    let span = j[m + 1] - table.j_ave_m[m];
    let a = (j[m + 1] - j_ave) / span;
    let value = a * z[m];

    let mut x = vec![0.0; n_t + 1];
    for i in 0..=m {
        x[i] = z[m] * (j[i + 1] - j[i]) / z[i] / span;
    }
    let mut y = staircase_jammer(z, m, a);
    // a * Z_m * (J_ave - J_ave,m) / ((J_{m+1} - J_ave) * Z_m), simplified.
    y[m + 1] = (j_ave - table.j_ave_m[m]) / span;

    Ok(NESolution {
        x_star: MixedStrategy::from_solver(x)?,
        y_star: MixedStrategy::from_solver(y)?.with_powers(powers)?,
        value,
        segment_m: m,
        breakpoints: table,
    })
}

/// Game value at each budget in `grid`.
pub fn value_curve(
    matrix: &PayoffMatrix,
    powers: &JammerActionSet,
    grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let base = ConstrainedGame::new(matrix.clone(), powers.clone(), 0.0)?;
    grid.iter()
        .map(|&j_ave| Ok((j_ave, solve(&base.with_budget(j_ave)?)?.value)))
        .collect()
}

/// The two-point jammer `Z_{N_T} * [1/Z_0, 0, ..., 0, 1/Z_{N_T} - 1/Z_0]`
/// and its average power `(1 - Z_{N_T}/Z_0) * J_max`. It already forces
/// `Z_{N_T}`, though with more power than the threshold strategy.
pub fn two_point_jammer(
    matrix: &PayoffMatrix,
    powers: &JammerActionSet,
) -> Result<(MixedStrategy, f64)> {
    let z = matrix.row_payoffs();
    let n = z.len();
    if n == 1 {
        return Ok((MixedStrategy::pure(1, 0).with_powers(powers)?, 0.0));
    }
    let last = z[n - 1];
    let mut y = vec![0.0; n];
    y[0] = last / z[0];
    y[n - 1] = last * (1.0 / last - 1.0 / z[0]);
    let avg = (1.0 - last / z[0]) * powers.max_power();
    Ok((MixedStrategy::from_solver(y)?.with_powers(powers)?, avg))
}

/// Power advantage `J_m / J_ave,m` of the optimal randomizing jammer over a
/// constant-power jammer forcing the same value `Z_m`.
pub fn randomization_gain(
    matrix: &PayoffMatrix,
    powers: &JammerActionSet,
    m: usize,
) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain(
            "randomization gain is undefined for m = 0".into(),
        ));
    }
    if m > matrix.last() {
        return Err(Error::Domain(format!(
            "segment {m} is out of range 1..={}",
            matrix.last()
        )));
    }
    let table = breakpoints(matrix, powers);
    Ok(powers.powers()[m] / table.j_ave_m[m])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::epsilon_ne_check;

    fn game(z: &[f64], j: &[f64], j_ave: f64) -> ConstrainedGame {
        ConstrainedGame::from_parts(z.to_vec(), j.to_vec(), j_ave).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12
    }

    #[test]
    fn breakpoint_examples() {
        let g = game(&[2.0, 1.0], &[0.0, 1.0], 0.0);
        let t = breakpoints(g.matrix(), g.jammer_powers());
        assert_eq!(t.j_ave_m, vec![0.0, 0.5]);
        assert_eq!(t.j_th, 0.5);

        let g = game(&[3.0, 2.0, 1.0], &[0.0, 1.0, 2.0], 0.0);
        let t = breakpoints(g.matrix(), g.jammer_powers());
        assert!(close(t.j_ave_m[1], 1.0 / 3.0));
        assert!(close(t.j_ave_m[2], 7.0 / 6.0));
        assert!(close(t.j_th, 7.0 / 6.0));
    }

    #[test]
    fn segment_lookup_at_breakpoints() {
        let t = BreakpointTable {
            j_ave_m: vec![0.0, 1.0, 2.0],
            j_th: 2.0,
        };
        assert_eq!(t.segment(0.0), 0);
        assert_eq!(t.segment(0.5), 0);
        assert_eq!(t.segment(1.0), 1);
        assert_eq!(t.segment(1.999), 1);
        assert_eq!(t.segment(2.0), 2);
        assert_eq!(t.segment(50.0), 2);
    }

    #[test]
    fn solve_2x2() {
        let s = solve(&game(&[2.0, 1.0], &[0.0, 1.0], 0.25)).unwrap();
        assert_eq!(s.value, 1.5);
        assert_eq!(s.x_star.probs(), &[1.0, 0.0]);
        assert_eq!(s.y_star.probs(), &[0.75, 0.25]);
        assert_eq!(s.segment_m, 0);
    }

    #[test]
    fn solve_3x3_at_breakpoint() {
        let g = game(&[3.0, 2.0, 1.0], &[0.0, 1.0, 2.0], 1.0 / 3.0);
        let s = solve(&g).unwrap();
        assert!(close(s.value, 2.0));
        assert_eq!(s.segment_m, 1);
        assert!(close(s.x_star.probs()[0], 0.4));
        assert!(close(s.x_star.probs()[1], 0.6));
        assert_eq!(s.x_star.probs()[2], 0.0);
        assert!(close(s.y_star.probs()[0], 2.0 / 3.0));
        assert!(close(s.y_star.probs()[1], 1.0 / 3.0));
        assert!(close(s.y_star.probs()[2], 0.0));
        let c = epsilon_ne_check(&g, &s.x_star, &s.y_star, 1e-12).unwrap();
        assert!(c.is_ne, "{c:?}");
    }

    #[test]
    fn solve_zero_budget() {
        let s = solve(&game(&[3.0, 2.0, 1.0], &[0.0, 1.0, 2.0], 0.0)).unwrap();
        assert_eq!(s.value, 3.0);
        assert_eq!(s.x_star.probs(), &[1.0, 0.0, 0.0]);
        assert_eq!(s.y_star.probs(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn solve_above_threshold() {
        let g = game(&[2.0, 1.0], &[0.0, 1.0], 0.7);
        let s = solve(&g).unwrap();
        assert_eq!(s.value, 1.0);
        assert_eq!(s.x_star.probs(), &[0.0, 1.0]);
        assert_eq!(s.y_star.probs(), &[0.5, 0.5]);
        assert_eq!(s.y_star.avg_power(), Some(0.5));
        assert!(
            epsilon_ne_check(&g, &s.x_star, &s.y_star, 1e-12)
                .unwrap()
                .is_ne
        );
        // Budgets beyond J_max are admissible.
        assert_eq!(solve(&g.with_budget(5.0).unwrap()).unwrap().value, 1.0);
    }

    #[test]
    fn single_action_game() {
        let g = game(&[4.0], &[0.0], 3.0);
        let s = solve(&g).unwrap();
        assert_eq!(s.value, 4.0);
        assert_eq!(s.x_star.probs(), &[1.0]);
        assert_eq!(s.y_star.probs(), &[1.0]);
        let (y, avg) = two_point_jammer(g.matrix(), g.jammer_powers()).unwrap();
        assert_eq!(y.probs(), &[1.0]);
        assert_eq!(avg, 0.0);
    }

    #[test]
    fn value_curve_hits_row_payoffs_at_breakpoints() {
        let g = game(&[3.0, 2.0, 1.0], &[0.0, 1.0, 2.0], 0.0);
        let t = breakpoints(g.matrix(), g.jammer_powers());
        let curve = value_curve(g.matrix(), g.jammer_powers(), &t.j_ave_m).unwrap();
        for ((_, v), z) in curve.iter().zip([3.0, 2.0, 1.0]) {
            assert!(close(*v, z));
        }
    }

    #[test]
    fn two_point_examples() {
        let g = game(&[2.0, 1.0], &[0.0, 1.0], 0.0);
        let (y, avg) = two_point_jammer(g.matrix(), g.jammer_powers()).unwrap();
        assert_eq!(y.probs(), &[0.5, 0.5]);
        assert_eq!(avg, 0.5);

        let g = game(&[3.0, 2.0, 1.0], &[0.0, 1.0, 2.0], 0.0);
        let (y, avg) = two_point_jammer(g.matrix(), g.jammer_powers()).unwrap();
        assert!(close(y.probs()[0], 1.0 / 3.0));
        assert_eq!(y.probs()[1], 0.0);
        assert!(close(y.probs()[2], 2.0 / 3.0));
        assert!(close(avg, 4.0 / 3.0));
        assert!(avg >= 7.0 / 6.0);
    }

    #[test]
    fn gain_examples() {
        let g = game(&[3.0, 2.0, 1.0], &[0.0, 1.0, 2.0], 0.0);
        let gain = randomization_gain(g.matrix(), g.jammer_powers(), 2).unwrap();
        assert!(close(gain, 12.0 / 7.0));
        assert!(randomization_gain(g.matrix(), g.jammer_powers(), 0).is_err());
        assert!(randomization_gain(g.matrix(), g.jammer_powers(), 3).is_err());

        let g = game(&[2.0, 1.0], &[0.0, 1.0], 0.0);
        assert_eq!(
            randomization_gain(g.matrix(), g.jammer_powers(), 1).unwrap(),
            2.0
        );
    }
}
