//! Floating-point comparison thresholds shared by every module.

/// Absolute tolerance for power and payoff comparisons.
pub const VALUE_EPS: f64 = 1e-9;

/// Absolute tolerance on the sum of a probability vector.
pub const PROB_SUM_EPS: f64 = 1e-12;

/// Reduced-cost threshold used to select an entering simplex column.
pub const PIVOT_EPS: f64 = 1e-10;

/// `a <= b` up to [`VALUE_EPS`].
#[inline]
pub fn le(a: f64, b: f64) -> bool {
    a <= b + VALUE_EPS
}

/// `|a - b| <= VALUE_EPS`.
#[inline]
pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= VALUE_EPS
}

/// Relative comparison, falling back to absolute near zero.
#[inline]
pub fn rel_eq(a: f64, b: f64, tol: f64) -> bool {
    let scale = a.abs().max(b.abs()).max(1.0);
    (a - b).abs() <= tol * scale
}
