//! Fixed jammer policies used as comparison curves against the optimal jammer.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::game::{dot, JammerActionSet, MixedStrategy};

/// Jams every packet at one fixed power: the largest level not above `j_ave`.
pub fn non_strategic(powers: &JammerActionSet, j_ave: f64) -> Result<MixedStrategy> {
    if !(j_ave >= 0.0) {
        return Err(Error::invalid(
            "j_ave",
            format!("must be non-negative, got {j_ave}"),
        ));
    }
    let k = powers.powers().partition_point(|&p| p <= j_ave) - 1;
    MixedStrategy::pure(powers.len(), k).with_powers(powers)
}

/// Uniformly random point of the simplex, pulled toward zero power until it
/// meets the budget. Deterministic in `seed`.
pub fn random_feasible(powers: &JammerActionSet, j_ave: f64, seed: u64) -> Result<MixedStrategy> {
    if !(j_ave >= 0.0) {
        return Err(Error::invalid(
            "j_ave",
            format!("must be non-negative, got {j_ave}"),
        ));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    // Exponential spacings give a uniform draw on the simplex.
    let mut w: Vec<f64> = (0..powers.len())
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|v| *v /= total);
    let avg = dot(&w, powers.powers());
    if avg > j_ave {
        let t = j_ave / avg;
        w.iter_mut().for_each(|v| *v *= t);
        w[0] += 1.0 - t;
    }
    MixedStrategy::from_solver(w)?.with_powers(powers)
}
