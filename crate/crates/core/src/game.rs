//! Game model: action sets, the survival payoff rule, dominance reduction,
//! expected payoff and the best-response oracles used to verify equilibria.
//!
//! The transmitter is the row (maximizing) player and the jammer the column
//! (minimizing) player. A transmitter action with tolerance `T` earns its
//! payoff against every jamming power `J <= T` and nothing above it, so after
//! sorting, every reduced payoff matrix is square and lower triangular.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tol;

/// Jamming power levels `0 = J_0 < J_1 < ... < J_max`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JammerActionSet {
    powers: Vec<f64>,
}

impl JammerActionSet {
    pub fn new(powers: Vec<f64>) -> Result<Self> {
        if powers.is_empty() {
            return Err(Error::invalid(
                "powers",
                "at least one power level is required",
            ));
        }
        for (j, &p) in powers.iter().enumerate() {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::invalid(
                    format!("powers[{j}]"),
                    format!("must be finite and non-negative, got {p}"),
                ));
            }
        }
        if powers[0] != 0.0 {
            return Err(Error::invalid(
                "powers[0]",
                "the lowest jamming power must be 0",
            ));
        }
        for j in 1..powers.len() {
            if powers[j] <= powers[j - 1] {
                return Err(Error::invalid(
                    format!("powers[{j}]"),
                    format!("must exceed powers[{}] = {}", j - 1, powers[j - 1]),
                ));
            }
        }
        Ok(Self { powers })
    }

    pub fn powers(&self) -> &[f64] {
        &self.powers
    }

    pub fn len(&self) -> usize {
        self.powers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn max_power(&self) -> f64 {
        *self.powers.last().expect("non-empty by construction")
    }

    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        Self::new(indices.iter().map(|&j| self.powers[j]).collect())
    }
}

/// One transmitter action: the payoff it earns and the largest jamming
/// power it survives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TxAction {
    pub payoff: f64,
    pub tolerance: f64,
}

/// Transmitter actions ordered by increasing tolerance (and therefore
/// strictly decreasing payoff).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransmitterActionSet {
    entries: Vec<TxAction>,
}

impl TransmitterActionSet {
    pub fn new(entries: Vec<TxAction>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid(
                "transmitter actions",
                "at least one action is required",
            ));
        }
        for (i, e) in entries.iter().enumerate() {
            if !e.payoff.is_finite() || e.payoff <= 0.0 {
                return Err(Error::invalid(
                    format!("payoff[{i}]"),
                    format!("must be finite and positive, got {}", e.payoff),
                ));
            }
            if !e.tolerance.is_finite() || e.tolerance < 0.0 {
                return Err(Error::invalid(
                    format!("tolerance[{i}]"),
                    format!("must be finite and non-negative, got {}", e.tolerance),
                ));
            }
            if i > 0 {
                let prev = entries[i - 1];
                if e.tolerance <= prev.tolerance {
                    return Err(Error::invalid(
                        format!("tolerance[{i}]"),
                        "tolerances must be strictly increasing",
                    ));
                }
                if e.payoff >= prev.payoff {
                    return Err(Error::invalid(
                        format!("payoff[{i}]"),
                        "payoffs must strictly decrease as tolerance grows",
                    ));
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[TxAction] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Square lower-triangular payoff matrix, stored by its row payoffs
/// `Z_0 > Z_1 > ... > Z_{N_T} > 0`. Entry `(i, j)` is `Z_i` for `j <= i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PayoffMatrix {
    row_payoffs: Vec<f64>,
}

impl PayoffMatrix {
    pub fn new(row_payoffs: Vec<f64>) -> Result<Self> {
        if row_payoffs.is_empty() {
            return Err(Error::invalid(
                "row_payoffs",
                "at least one row is required",
            ));
        }
        for (i, &z) in row_payoffs.iter().enumerate() {
            if !z.is_finite() || z <= 0.0 {
                return Err(Error::invalid(
                    format!("row_payoffs[{i}]"),
                    format!("must be finite and positive, got {z}"),
                ));
            }
            if i > 0 && z >= row_payoffs[i - 1] {
                return Err(Error::invalid(
                    format!("row_payoffs[{i}]"),
                    format!(
                        "must be strictly below row_payoffs[{}] = {} (merge equal-payoff actions first)",
                        i - 1,
                        row_payoffs[i - 1]
                    ),
                ));
            }
        }
        Ok(Self { row_payoffs })
    }

    pub fn row_payoffs(&self) -> &[f64] {
        &self.row_payoffs
    }

    /// Matrix dimension `N_T + 1`.
    pub fn dim(&self) -> usize {
        self.row_payoffs.len()
    }

    /// Index of the last action, `N_T`.
    pub fn last(&self) -> usize {
        self.row_payoffs.len() - 1
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> f64 {
        if col <= row {
            self.row_payoffs[row]
        } else {
            0.0
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self.entry(i, j)).collect())
            .collect()
    }
}

/// Probability vector over a player's pure actions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixedStrategy {
    probs: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    avg_power: Option<f64>,
}

impl MixedStrategy {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::invalid("strategy", "empty probability vector"));
        }
        for (i, &p) in probs.iter().enumerate() {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::invalid(
                    format!("strategy[{i}]"),
                    format!("probabilities must be finite and non-negative, got {p}"),
                ));
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > tol::PROB_SUM_EPS {
            return Err(Error::invalid(
                "strategy",
                format!("probabilities sum to {sum}, expected 1"),
            ));
        }
        Ok(Self {
            probs,
            avg_power: None,
        })
    }

    /// Point mass on `index`.
    pub fn pure(len: usize, index: usize) -> Self {
        let mut probs = vec![0.0; len];
        probs[index] = 1.0;
        Self {
            probs,
            avg_power: None,
        }
    }

    /// Clips tiny negative round-off and rescales to sum 1. Used for solver
    /// outputs whose entries are correct only up to floating-point noise.
    pub(crate) fn from_solver(mut probs: Vec<f64>) -> Result<Self> {
        for p in probs.iter_mut() {
            // `<=` also folds -0.0 into 0.0.
            if *p <= 0.0 {
                if *p < -1e-7 {
                    return Err(Error::ContractViolation(format!(
                        "solver produced probability {p}"
                    )));
                }
                *p = 0.0;
            }
        }
        let sum: f64 = probs.iter().sum();
        if !(sum > 0.0) {
            return Err(Error::ContractViolation(
                "solver produced a zero vector".into(),
            ));
        }
        probs.iter_mut().for_each(|p| *p /= sum);
        Self::new(probs)
    }

    /// Annotates the strategy with its average power over `powers`.
    pub fn with_powers(mut self, powers: &JammerActionSet) -> Result<Self> {
        check_dim(powers.len(), self.probs.len())?;
        self.avg_power = Some(dot(&self.probs, powers.powers()));
        Ok(self)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn avg_power(&self) -> Option<f64> {
        self.avg_power
    }

    /// Indices carrying positive probability.
    pub fn support(&self) -> Vec<usize> {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Common view of a constrained game: a payoff matrix whose columns carry
/// jamming powers, plus the jammer's average-power budget.
pub trait MatrixGame {
    fn num_rows(&self) -> usize;
    fn num_cols(&self) -> usize;
    fn payoff(&self, row: usize, col: usize) -> f64;
    fn powers(&self) -> &JammerActionSet;
    fn budget(&self) -> f64;

    fn max_payoff(&self) -> f64 {
        let mut best = f64::NEG_INFINITY;
        for i in 0..self.num_rows() {
            for j in 0..self.num_cols() {
                best = best.max(self.payoff(i, j));
            }
        }
        best
    }
}

/// The square game the closed-form results apply to.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstrainedGame {
    matrix: PayoffMatrix,
    powers: JammerActionSet,
    j_ave: f64,
}

impl ConstrainedGame {
    pub fn new(matrix: PayoffMatrix, powers: JammerActionSet, j_ave: f64) -> Result<Self> {
        check_dim(matrix.dim(), powers.len())?;
        validate_budget(j_ave)?;
        Ok(Self {
            matrix,
            powers,
            j_ave,
        })
    }

    /// Convenience constructor from raw vectors.
    pub fn from_parts(row_payoffs: Vec<f64>, powers: Vec<f64>, j_ave: f64) -> Result<Self> {
        Self::new(
            PayoffMatrix::new(row_payoffs)?,
            JammerActionSet::new(powers)?,
            j_ave,
        )
    }

    pub fn matrix(&self) -> &PayoffMatrix {
        &self.matrix
    }

    pub fn jammer_powers(&self) -> &JammerActionSet {
        &self.powers
    }

    pub fn j_ave(&self) -> f64 {
        self.j_ave
    }

    /// Same matrix and powers under a different budget.
    pub fn with_budget(&self, j_ave: f64) -> Result<Self> {
        validate_budget(j_ave)?;
        Ok(Self {
            matrix: self.matrix.clone(),
            powers: self.powers.clone(),
            j_ave,
        })
    }
}

impl MatrixGame for ConstrainedGame {
    fn num_rows(&self) -> usize {
        self.matrix.dim()
    }
    fn num_cols(&self) -> usize {
        self.powers.len()
    }
    fn payoff(&self, row: usize, col: usize) -> f64 {
        self.matrix.entry(row, col)
    }
    fn powers(&self) -> &JammerActionSet {
        &self.powers
    }
    fn budget(&self) -> f64 {
        self.j_ave
    }
}

/// A constrained game with an arbitrary (possibly unreduced) rectangular
/// payoff matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RectGame {
    payoffs: Vec<Vec<f64>>,
    powers: JammerActionSet,
    j_ave: f64,
}

impl RectGame {
    pub fn new(payoffs: Vec<Vec<f64>>, powers: JammerActionSet, j_ave: f64) -> Result<Self> {
        if payoffs.is_empty() {
            return Err(Error::invalid("payoffs", "at least one row is required"));
        }
        for row in &payoffs {
            check_dim(powers.len(), row.len())?;
            if row.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(Error::invalid(
                    "payoffs",
                    "entries must be finite and non-negative",
                ));
            }
        }
        validate_budget(j_ave)?;
        Ok(Self {
            payoffs,
            powers,
            j_ave,
        })
    }

    pub fn payoffs(&self) -> &[Vec<f64>] {
        &self.payoffs
    }
}

impl MatrixGame for RectGame {
    fn num_rows(&self) -> usize {
        self.payoffs.len()
    }
    fn num_cols(&self) -> usize {
        self.powers.len()
    }
    fn payoff(&self, row: usize, col: usize) -> f64 {
        self.payoffs[row][col]
    }
    fn powers(&self) -> &JammerActionSet {
        &self.powers
    }
    fn budget(&self) -> f64 {
        self.j_ave
    }
}

fn validate_budget(j_ave: f64) -> Result<()> {
    if !j_ave.is_finite() || j_ave < 0.0 {
        return Err(Error::invalid(
            "j_ave",
            format!("average power budget must be finite and non-negative, got {j_ave}"),
        ));
    }
    Ok(())
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Applies the survival rule: entry `(i, j)` is the payoff of action `i`
/// when `powers[j] <= tolerance[i]` and zero otherwise. Equality counts as
/// survival.
pub fn build_payoff_matrix(tx: &TransmitterActionSet, jam: &JammerActionSet) -> Vec<Vec<f64>> {
    tx.entries()
        .iter()
        .map(|a| {
            jam.powers()
                .iter()
                .map(|&p| if p <= a.tolerance { a.payoff } else { 0.0 })
                .collect()
        })
        .collect()
}

/// Output of [`reduce_dominated`].
#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    pub matrix: PayoffMatrix,
    pub powers: JammerActionSet,
    /// Original transmitter indices of the kept rows, in reduced order.
    pub kept_tx: Vec<usize>,
    /// Original jammer indices of the kept columns, in reduced order.
    pub kept_jam: Vec<usize>,
}

/// Removes dominated actions until a fixpoint and returns the resulting
/// square lower-triangular game.
///
/// Rows are compared entrywise (the transmitter drops a row that never pays
/// more than another). Columns are compared entrywise together with power:
/// the jammer drops a column that never pays less and costs at least as
/// much as another. Rounding each tolerance down to the jammer grid, keeping
/// the best row per support, and merging power levels that kill the same
/// rows all fall out of these two rules.
///
/// A jamming power that no transmitter action survives cannot be expressed
/// in the square form (it would need a zero-payoff row) and is reported as
/// a validation error.
pub fn reduce_dominated(
    matrix: &[Vec<f64>],
    tx: &TransmitterActionSet,
    jam: &JammerActionSet,
) -> Result<Reduction> {
    check_dim(tx.len(), matrix.len())?;
    for row in matrix {
        check_dim(jam.len(), row.len())?;
    }
    let powers = jam.powers();
    let mut rows: Vec<usize> = (0..matrix.len()).collect();
    let mut cols: Vec<usize> = (0..jam.len()).collect();

    loop {
        if let Some(pos) = find_dominated_row(matrix, &rows, &cols) {
            rows.remove(pos);
            continue;
        }
        if let Some(pos) = find_dominated_col(matrix, powers, &rows, &cols) {
            cols.remove(pos);
            continue;
        }
        break;
    }
    if rows.is_empty() || cols.is_empty() {
        return Err(Error::ContractViolation(
            "dominance reduction eliminated every action".into(),
        ));
    }

    for &c in &cols {
        if rows.iter().all(|&r| matrix[r][c] == 0.0) {
            return Err(Error::invalid(
                format!("powers[{c}]"),
                format!(
                    "jamming power {} exceeds every transmitter tolerance; \
                     at least one action must survive the maximum power",
                    powers[c]
                ),
            ));
        }
    }

    // Order rows by support size; in the reduced game this is the tolerance order.
    let support = |r: usize| cols.iter().filter(|&&c| matrix[r][c] > 0.0).count();
    rows.sort_by_key(|&r| support(r));
    if rows.len() != cols.len() {
        return Err(Error::ContractViolation(format!(
            "reduced game is {}x{}, expected square",
            rows.len(),
            cols.len()
        )));
    }
    let mut row_payoffs = Vec::with_capacity(rows.len());
    for (i, &r) in rows.iter().enumerate() {
        let z = matrix[r][cols[0]];
        for (j, &c) in cols.iter().enumerate() {
            let expected = if j <= i { z } else { 0.0 };
            if matrix[r][c] != expected {
                return Err(Error::ContractViolation(format!(
                    "reduced game is not lower triangular at ({i}, {j})"
                )));
            }
        }
        row_payoffs.push(z);
    }
    Ok(Reduction {
        matrix: PayoffMatrix::new(row_payoffs)?,
        powers: jam.subset(&cols)?,
        kept_tx: rows,
        kept_jam: cols,
    })
}

fn find_dominated_row(matrix: &[Vec<f64>], rows: &[usize], cols: &[usize]) -> Option<usize> {
    for (pa, &a) in rows.iter().enumerate() {
        for &b in rows {
            if a == b {
                continue;
            }
            let weakly_below = cols.iter().all(|&c| matrix[a][c] <= matrix[b][c]);
            if !weakly_below {
                continue;
            }
            let identical = cols.iter().all(|&c| matrix[a][c] == matrix[b][c]);
            // Identical rows: keep the lowest original index.
            if !identical || b < a {
                return Some(pa);
            }
        }
    }
    None
}

fn find_dominated_col(
    matrix: &[Vec<f64>],
    powers: &[f64],
    rows: &[usize],
    cols: &[usize],
) -> Option<usize> {
    for (pc, &c) in cols.iter().enumerate() {
        for &d in cols {
            if c == d || powers[c] < powers[d] {
                continue;
            }
            if rows.iter().all(|&r| matrix[r][c] >= matrix[r][d]) {
                return Some(pc);
            }
        }
    }
    None
}

/// Bilinear form `x^T Z y`.
pub fn expected_payoff<G: MatrixGame + ?Sized>(
    x: &MixedStrategy,
    game: &G,
    y: &MixedStrategy,
) -> Result<f64> {
    check_dim(game.num_rows(), x.len())?;
    check_dim(game.num_cols(), y.len())?;
    let mut total = 0.0;
    for (i, &xi) in x.probs().iter().enumerate() {
        if xi == 0.0 {
            continue;
        }
        let row: f64 = y
            .probs()
            .iter()
            .enumerate()
            .map(|(j, &yj)| game.payoff(i, j) * yj)
            .sum();
        total += xi * row;
    }
    Ok(total)
}

/// Best pure transmitter reply to `y`: `(value, row)`, lowest row on ties.
pub fn best_response_transmitter<G: MatrixGame + ?Sized>(
    game: &G,
    y: &MixedStrategy,
) -> Result<(f64, usize)> {
    check_dim(game.num_cols(), y.len())?;
    let mut best = (f64::NEG_INFINITY, 0);
    for i in 0..game.num_rows() {
        let v: f64 = y
            .probs()
            .iter()
            .enumerate()
            .map(|(j, &yj)| game.payoff(i, j) * yj)
            .sum();
        if v > best.0 {
            best = (v, i);
        }
    }
    Ok(best)
}

/// Best jammer reply to `x` within the budget.
///
/// The feasible set `{y >= 0, sum y = 1, J^T y <= J_ave}` is a polytope
/// whose vertices are the affordable pure strategies and the two-point
/// mixtures `J_j < J_ave < J_k` spending the budget exactly. The objective is
/// linear, so enumerating those vertices finds the minimum.
pub fn best_response_jammer<G: MatrixGame + ?Sized>(
    game: &G,
    x: &MixedStrategy,
) -> Result<(f64, MixedStrategy)> {
    check_dim(game.num_rows(), x.len())?;
    let budget = game.budget();
    if !(budget >= 0.0) {
        return Err(Error::Domain(format!(
            "average power budget {budget} is negative"
        )));
    }
    let powers = game.powers().powers();
    let n = game.num_cols();
    let col_value: Vec<f64> = (0..n)
        .map(|j| {
            x.probs()
                .iter()
                .enumerate()
                .map(|(i, &xi)| xi * game.payoff(i, j))
                .sum()
        })
        .collect();

    // (value, low index, high index, weight on high index)
    let mut best: Option<(f64, usize, usize, f64)> = None;
    let mut consider = |v: f64, lo: usize, hi: usize, w: f64| {
        if best.is_none_or(|b| v < b.0) {
            best = Some((v, lo, hi, w));
        }
    };
    for j in 0..n {
        if powers[j] <= budget {
            consider(col_value[j], j, j, 0.0);
        }
    }
    for j in 0..n {
        if powers[j] >= budget {
            break;
        }
        for k in (j + 1)..n {
            if powers[k] <= budget {
                continue;
            }
            let w = (budget - powers[j]) / (powers[k] - powers[j]);
            consider((1.0 - w) * col_value[j] + w * col_value[k], j, k, w);
        }
    }
    // powers[0] = 0 <= budget, so at least one vertex exists.
    let (value, lo, hi, w) = best.expect("column 0 is always affordable");
    let mut probs = vec![0.0; n];
    probs[lo] += 1.0 - w;
    probs[hi] += w;
    let y = MixedStrategy {
        probs,
        avg_power: None,
    }
    .with_powers(game.powers())?;
    Ok((value, y))
}

/// Jammer strategy feasibility: dimensions match and the average power is
/// within the budget (up to [`tol::VALUE_EPS`]).
pub fn check_jammer_feasible<G: MatrixGame + ?Sized>(game: &G, y: &MixedStrategy) -> Result<()> {
    check_dim(game.num_cols(), y.len())?;
    let power = dot(y.probs(), game.powers().powers());
    if !tol::le(power, game.budget()) {
        return Err(Error::Infeasible(format!(
            "jammer average power {power} exceeds the budget {}",
            game.budget()
        )));
    }
    Ok(())
}

/// Diagnostics from [`epsilon_ne_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NeCheck {
    pub is_ne: bool,
    /// Payoff of the pair `x^T Z y`.
    pub value: f64,
    /// How much the transmitter gains by deviating.
    pub transmitter_gap: f64,
    /// How much the jammer gains by deviating.
    pub jammer_gap: f64,
}

/// Checks that neither player gains more than `eps` by deviating.
pub fn epsilon_ne_check<G: MatrixGame + ?Sized>(
    game: &G,
    x: &MixedStrategy,
    y: &MixedStrategy,
    eps: f64,
) -> Result<NeCheck> {
    if !(eps >= 0.0) {
        return Err(Error::Domain(format!(
            "eps must be non-negative, got {eps}"
        )));
    }
    check_jammer_feasible(game, y)?;
    let value = expected_payoff(x, game, y)?;
    let (tx_best, _) = best_response_transmitter(game, y)?;
    let (jam_best, _) = best_response_jammer(game, x)?;
    let transmitter_gap = tx_best - value;
    let jammer_gap = value - jam_best;
    Ok(NeCheck {
        is_ne: transmitter_gap <= eps && jammer_gap <= eps,
        value,
        transmitter_gap,
        jammer_gap,
    })
}
