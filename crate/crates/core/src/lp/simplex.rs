//! Dense two-phase simplex over non-negative variables.
//!
//! Entering and leaving variables follow Bland's rule (smallest index among
//! the candidates), which rules out cycling on degenerate problems. Problem
//! sizes here are a few dozen variables, so a full tableau is fine.

use std::fmt::{self, Write as _};

use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Maximize,
    Minimize,
}

/// `optimize c^T v` subject to `A v (sense) b`, `v >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub direction: Direction,
    pub objective: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
    pub senses: Vec<Sense>,
    pub rhs: Vec<f64>,
    /// Optional variable names used by the tableau dump.
    pub var_names: Vec<String>,
}

impl LinearProgram {
    pub fn new(direction: Direction, objective: Vec<f64>) -> Self {
        let var_names = (0..objective.len()).map(|i| format!("v{i}")).collect();
        Self {
            direction,
            objective,
            rows: Vec::new(),
            senses: Vec::new(),
            rhs: Vec::new(),
            var_names,
        }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.objective.len());
        self.var_names = names;
        self
    }

    pub fn add_constraint(&mut self, coeffs: Vec<f64>, sense: Sense, rhs: f64) {
        assert_eq!(coeffs.len(), self.objective.len(), "constraint width");
        self.rows.push(coeffs);
        self.senses.push(sense);
        self.rhs.push(rhs);
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Largest violation of any constraint or sign bound at `point`.
    pub fn max_violation(&self, point: &[f64]) -> f64 {
        let mut worst = point.iter().map(|&v| (-v).max(0.0)).fold(0.0, f64::max);
        for ((row, sense), &b) in self.rows.iter().zip(&self.senses).zip(&self.rhs) {
            let lhs: f64 = row.iter().zip(point).map(|(a, v)| a * v).sum();
            let v = match sense {
                Sense::Le => lhs - b,
                Sense::Ge => b - lhs,
                Sense::Eq => (lhs - b).abs(),
            };
            worst = worst.max(v);
        }
        worst
    }

    /// Plain-text fixed-width dump: one line per constraint, objective first.
    pub fn to_tableau_string(&self) -> String {
        const W: usize = 12;
        let mut out = String::new();
        let _ = write!(out, "{:<6}", "");
        for name in &self.var_names {
            let _ = write!(out, "{name:>W$}");
        }
        let _ = writeln!(out, "{:>4}{:>W$}", "", "rhs");
        let tag = match self.direction {
            Direction::Maximize => "max",
            Direction::Minimize => "min",
        };
        let _ = write!(out, "{tag:<6}");
        for c in &self.objective {
            let _ = write!(out, "{c:>W$.6}");
        }
        let _ = writeln!(out);
        for (r, ((row, sense), b)) in self
            .rows
            .iter()
            .zip(&self.senses)
            .zip(&self.rhs)
            .enumerate()
        {
            let _ = write!(out, "{:<6}", format!("c{r}"));
            for a in row {
                let _ = write!(out, "{a:>W$.6}");
            }
            let _ = writeln!(out, "{:>4}{b:>W$.6}", sense.to_string());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: f64, point: Vec<f64> },
    Infeasible,
    Unbounded,
}

const MAX_PIVOTS: usize = 50_000;

enum Stop {
    Optimal,
    Unbounded,
    /// Pivot cap reached. Bland's rule terminates in exact arithmetic, so
    /// this only happens when round-off breaks the tableau.
    Stalled,
}

struct Tableau {
    /// Constraint rows, each `width` coefficients followed by the rhs.
    t: Vec<Vec<f64>>,
    /// Objective row (reduced costs of a minimization), same layout.
    obj: Vec<f64>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.t[row][col];
        for v in self.t[row].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.t[row].clone();
        for (r, line) in self.t.iter_mut().enumerate() {
            if r == row {
                continue;
            }
            let f = line[col];
            if f != 0.0 {
                for (v, pv) in line.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                line[col] = 0.0;
            }
        }
        let f = self.obj[col];
        if f != 0.0 {
            for (v, pv) in self.obj.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            self.obj[col] = 0.0;
        }
        self.basis[row] = col;
    }

    fn rhs(&self, row: usize) -> f64 {
        self.t[row][self.width]
    }

    /// Runs Bland's rule over columns `< allowed`.
    fn optimize(&mut self, allowed: usize) -> Stop {
        for _ in 0..MAX_PIVOTS {
            let Some(col) = (0..allowed).find(|&c| self.obj[c] < -tol::PIVOT_EPS) else {
                return Stop::Optimal;
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.t.len() {
                let a = self.t[r][col];
                if a <= 1e-12 {
                    continue;
                }
                let ratio = self.rhs(r) / a;
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((lr, lratio)) => {
                        let tie = (ratio - lratio).abs() <= 1e-12 * lratio.abs().max(1.0);
                        if ratio < lratio && !tie || tie && self.basis[r] < self.basis[lr] {
                            Some((r, ratio))
                        } else {
                            Some((lr, lratio))
                        }
                    }
                };
            }
            let Some((row, _)) = leave else {
                return Stop::Unbounded;
            };
            self.pivot(row, col);
        }
        Stop::Stalled
    }
}

pub fn simplex_solve(lp: &LinearProgram) -> LpOutcome {
    let n = lp.num_vars();
    let m = lp.rows.len();

    // Normalize to non-negative right-hand sides.
    let mut rows = lp.rows.clone();
    let mut senses = lp.senses.clone();
    let mut rhs = lp.rhs.clone();
    for r in 0..m {
        if rhs[r] < 0.0 {
            rhs[r] = -rhs[r];
            rows[r].iter_mut().for_each(|v| *v = -*v);
            senses[r] = match senses[r] {
                Sense::Le => Sense::Ge,
                Sense::Ge => Sense::Le,
                Sense::Eq => Sense::Eq,
            };
        }
    }

    // Column layout: originals | slack/surplus | artificials.
    let n_slack = senses.iter().filter(|s| **s != Sense::Eq).count();
    let n_art = senses.iter().filter(|s| **s != Sense::Le).count();
    let art_start = n + n_slack;
    let width = art_start + n_art;

    let mut t = vec![vec![0.0; width + 1]; m];
    let mut basis = vec![0; m];
    let (mut next_slack, mut next_art) = (n, art_start);
    for r in 0..m {
        t[r][..n].copy_from_slice(&rows[r]);
        t[r][width] = rhs[r];
        match senses[r] {
            Sense::Le => {
                t[r][next_slack] = 1.0;
                basis[r] = next_slack;
                next_slack += 1;
            }
            Sense::Ge => {
                t[r][next_slack] = -1.0;
                next_slack += 1;
                t[r][next_art] = 1.0;
                basis[r] = next_art;
                next_art += 1;
            }
            Sense::Eq => {
                t[r][next_art] = 1.0;
                basis[r] = next_art;
                next_art += 1;
            }
        }
    }

    // Phase 1: minimize the sum of artificials.
    let mut obj = vec![0.0; width + 1];
    for c in art_start..width {
        obj[c] = 1.0;
    }
    for r in 0..m {
        if basis[r] >= art_start {
            for c in 0..=width {
                obj[c] -= t[r][c];
            }
        }
    }
    let mut tab = Tableau {
        t,
        obj,
        basis,
        width,
    };
    if n_art > 0 {
        if !matches!(tab.optimize(width), Stop::Optimal) {
            return LpOutcome::Infeasible;
        }
        let infeasibility = -tab.obj[width];
        let scale = rhs.iter().fold(1.0_f64, |a, b| a.max(b.abs()));
        if infeasibility > 1e-9 * scale {
            return LpOutcome::Infeasible;
        }
        // Drive remaining (zero-valued) artificials out of the basis.
        for r in 0..m {
            if tab.basis[r] < art_start {
                continue;
            }
            if let Some(c) = (0..art_start).find(|&c| tab.t[r][c].abs() > 1e-9) {
                tab.pivot(r, c);
            }
            // Otherwise the row is redundant; its artificial stays basic at 0
            // and can never re-enter because phase 2 excludes those columns.
        }
    }

    // Phase 2: the real objective, as a minimization.
    let sign = match lp.direction {
        Direction::Minimize => 1.0,
        Direction::Maximize => -1.0,
    };
    let mut obj = vec![0.0; width + 1];
    for c in 0..n {
        obj[c] = sign * lp.objective[c];
    }
    for r in 0..m {
        let b = tab.basis[r];
        let f = obj[b];
        if f != 0.0 {
            for c in 0..=width {
                obj[c] -= f * tab.t[r][c];
            }
        }
    }
    tab.obj = obj;
    match tab.optimize(art_start) {
        Stop::Optimal => {}
        Stop::Unbounded => return LpOutcome::Unbounded,
        // Reported as infeasible: no trustworthy point exists.
        Stop::Stalled => return LpOutcome::Infeasible,
    }

    let mut point = vec![0.0; n];
    for r in 0..m {
        if tab.basis[r] < n {
            point[tab.basis[r]] = tab.rhs(r);
        }
    }
    let value = lp.objective.iter().zip(&point).map(|(c, v)| c * v).sum();
    LpOutcome::Optimal { value, point }
}
