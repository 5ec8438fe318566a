//! Monte Carlo play of repeated independent rounds.
//!
//! Rounds are split into blocks of [`BLOCK_ROUNDS`]. Block `b` draws from
//! `ChaCha20Rng::seed_from_u64(seed)` on stream `b`, so every block is
//! reproducible on its own and blocks can run on any thread. Each block
//! tallies integer outcome counts per `(row, column)` pair; summing those is
//! exact, so the parallel and sequential runs give bit-identical reports.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{check_dim, MatrixGame, MixedStrategy};

pub const BLOCK_ROUNDS: u64 = 65_536;

/// CSV format marker written after the header.
pub const CSV_FORMAT: &str = "# format=1 prng=ChaCha20 block=65536";
pub const CSV_HEADER: &str = "rounds,empirical_value,empirical_jam_power,std_error,seed";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub rounds: u64,
    pub empirical_value: f64,
    pub empirical_jam_power: f64,
    /// Standard error of `empirical_value`.
    pub std_error: f64,
    /// Standard error of `empirical_jam_power`.
    pub power_std_error: f64,
    pub seed: u64,
}

impl SimReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.16e},{:.16e},{:.16e},{}",
            self.rounds, self.empirical_value, self.empirical_jam_power, self.std_error, self.seed
        )
    }
}

pub fn write_csv<W: Write>(mut out: W, reports: &[SimReport]) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    writeln!(out, "{CSV_FORMAT}")?;
    for r in reports {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}

fn cdf(probs: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    probs
        .iter()
        .map(|p| {
            acc += p;
            acc
        })
        .collect()
}

/// Inverse CDF: first index whose cumulative mass exceeds `u`. Zero-mass
/// entries are never chosen, and round-off past the end falls back to the
/// last index with positive mass.
fn sample(cdf: &[f64], last_positive: usize, u: f64) -> usize {
    let i = cdf.partition_point(|&c| c <= u);
    i.min(last_positive)
}

fn last_positive(probs: &[f64]) -> usize {
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

fn run_block(
    x_cdf: &[f64],
    x_last: usize,
    y_cdf: &[f64],
    y_last: usize,
    seed: u64,
    block: u64,
    rounds: u64,
) -> Vec<u64> {
    let cols = y_cdf.len();
    let mut counts = vec![0u64; x_cdf.len() * cols];
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(block);
    for _ in 0..rounds {
        let i = sample(x_cdf, x_last, rng.random::<f64>());
        let j = sample(y_cdf, y_last, rng.random::<f64>());
        counts[i * cols + j] += 1;
    }
    counts
}

fn check_inputs<G: MatrixGame + ?Sized>(
    game: &G,
    x: &MixedStrategy,
    y: &MixedStrategy,
    rounds: u64,
) -> Result<()> {
    check_dim(game.num_rows(), x.len())?;
    check_dim(game.num_cols(), y.len())?;
    if rounds == 0 {
        return Err(Error::invalid("rounds", "must be at least 1"));
    }
    Ok(())
}

/// `(block index, rounds in block)` pairs.
fn blocks(rounds: u64) -> Vec<(u64, u64)> {
    (0..rounds.div_ceil(BLOCK_ROUNDS))
        .map(|b| (b, (rounds - b * BLOCK_ROUNDS).min(BLOCK_ROUNDS)))
        .collect()
}

fn report<G: MatrixGame + ?Sized>(game: &G, counts: &[u64], rounds: u64, seed: u64) -> SimReport {
    let cols = game.num_cols();
    let powers = game.powers().powers();
    let n = rounds as f64;
    let (mut v, mut v2, mut p, mut p2) = (0.0, 0.0, 0.0, 0.0);
    for (k, &c) in counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let (i, j) = (k / cols, k % cols);
        let w = c as f64;
        let z = game.payoff(i, j);
        v += w * z;
        v2 += w * z * z;
        p += w * powers[j];
        p2 += w * powers[j] * powers[j];
    }
    let mean_v = v / n;
    let mean_p = p / n;
    let se = |sq: f64, mean: f64| ((sq / n - mean * mean).max(0.0) / n).sqrt();
    SimReport {
        rounds,
        empirical_value: mean_v,
        empirical_jam_power: mean_p,
        std_error: se(v2, mean_v),
        power_std_error: se(p2, mean_p),
        seed,
    }
}

/// Plays `rounds` rounds on the calling thread.
pub fn simulate<G: MatrixGame + ?Sized>(
    game: &G,
    x: &MixedStrategy,
    y: &MixedStrategy,
    rounds: u64,
    seed: u64,
) -> Result<SimReport> {
    check_inputs(game, x, y, rounds)?;
    let (xc, yc) = (cdf(x.probs()), cdf(y.probs()));
    let (xl, yl) = (last_positive(x.probs()), last_positive(y.probs()));
    let mut total = vec![0u64; xc.len() * yc.len()];
    for (b, len) in blocks(rounds) {
        let c = run_block(&xc, xl, &yc, yl, seed, b, len);
        total.iter_mut().zip(c).for_each(|(t, c)| *t += c);
    }
    Ok(report(game, &total, rounds, seed))
}

/// Same result as [`simulate`], with blocks spread over the rayon pool.
pub fn simulate_parallel<G: MatrixGame + Sync + ?Sized>(
    game: &G,
    x: &MixedStrategy,
    y: &MixedStrategy,
    rounds: u64,
    seed: u64,
) -> Result<SimReport> {
    check_inputs(game, x, y, rounds)?;
    let (xc, yc) = (cdf(x.probs()), cdf(y.probs()));
    let (xl, yl) = (last_positive(x.probs()), last_positive(y.probs()));
    let size = xc.len() * yc.len();
    let total = blocks(rounds)
        .into_par_iter()
        .map(|(b, len)| run_block(&xc, xl, &yc, yl, seed, b, len))
        .reduce(
            || vec![0u64; size],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(t, c)| *t += c);
                a
            },
        );
    Ok(report(game, &total, rounds, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{solve, two_point_jammer};
    use crate::game::ConstrainedGame;

    fn two_by_two() -> ConstrainedGame {
        ConstrainedGame::from_parts(vec![2.0, 1.0], vec![0.0, 1.0], 0.25).unwrap()
    }

    #[test]
    fn pure_strategies_are_exact() {
        let g = two_by_two();
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let r = simulate(
                &g,
                &MixedStrategy::pure(2, i),
                &MixedStrategy::pure(2, j),
                1000,
                7,
            )
            .unwrap();
            assert_eq!(r.empirical_value, g.payoff(i, j));
            assert_eq!(r.std_error, 0.0);
            assert_eq!(r.empirical_jam_power, j as f64);
        }
    }

    #[test]
    fn inverse_cdf_ties_go_low() {
        let c = cdf(&[0.5, 0.0, 0.5]);
        assert_eq!(sample(&c, 2, 0.0), 0);
        assert_eq!(sample(&c, 2, 0.4999), 0);
        assert_eq!(sample(&c, 2, 0.5), 2);
        let c = cdf(&[0.3, 0.7, 0.0]);
        assert_eq!(sample(&c, 1, 0.999_999_999_999_999_9), 1);
    }

    #[test]
    fn ne_pair_within_four_standard_errors() {
        let g = two_by_two();
        let s = solve(&g).unwrap();
        let r = simulate_parallel(&g, &s.x_star, &s.y_star, 1_000_000, 11).unwrap();
        assert!(
            (r.empirical_value - 1.5).abs() <= 4.0 * r.std_error,
            "{r:?}"
        );
        assert!(
            (r.empirical_jam_power - 0.25).abs() <= 4.0 * r.power_std_error,
            "{r:?}"
        );
    }

    #[test]
    fn threshold_jammer_caps_value() {
        let g = ConstrainedGame::from_parts(vec![3.0, 2.0, 1.0], vec![0.0, 1.0, 2.0], 2.0).unwrap();
        let (y, _) = two_point_jammer(g.matrix(), g.jammer_powers()).unwrap();
        let x = MixedStrategy::new(vec![0.2, 0.5, 0.3]).unwrap();
        let r = simulate_parallel(&g, &x, &y, 1_000_000, 3).unwrap();
        assert!(r.empirical_value <= 1.0 + 4.0 * r.std_error, "{r:?}");
    }

    #[test]
    fn parallel_matches_sequential_and_is_deterministic() {
        let g = two_by_two();
        let s = solve(&g).unwrap();
        let rounds = 3 * BLOCK_ROUNDS + 17;
        let a = simulate(&g, &s.x_star, &s.y_star, rounds, 99).unwrap();
        let b = simulate_parallel(&g, &s.x_star, &s.y_star, rounds, 99).unwrap();
        let c = simulate_parallel(&g, &s.x_star, &s.y_star, rounds, 99).unwrap();
        assert_eq!(a, b);
        assert_eq!(b, c);
        let d = simulate(&g, &s.x_star, &s.y_star, rounds, 100).unwrap();
        assert_ne!(a, d);
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = two_by_two();
        let x = MixedStrategy::pure(2, 0);
        assert!(simulate(&g, &x, &x, 0, 1).is_err());
        let bad = MixedStrategy::pure(3, 0);
        assert!(matches!(
            simulate(&g, &bad, &x, 10, 1),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn csv_layout() {
        let g = two_by_two();
        let r = simulate(
            &g,
            &MixedStrategy::pure(2, 0),
            &MixedStrategy::pure(2, 0),
            5,
            1,
        )
        .unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &[r]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], CSV_FORMAT);
        assert!(lines[2].starts_with("5,2.0000000000000000e0,"));
        assert!(lines[2].ends_with(",1"));
    }
}
