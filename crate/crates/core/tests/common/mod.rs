#![allow(dead_code)]

use jamgame::awgn::Case2Config;
use jamgame::ConstrainedGame;
use rand::Rng;
use rand_chacha::ChaCha20Rng;
use serde::Deserialize;

/// Square game with `2..=10` actions, payoffs strictly decreasing in
/// `(0, 10]`, powers increasing from 0 and a budget in `[0, 1.2 J_max]`.
pub fn random_game(rng: &mut ChaCha20Rng) -> ConstrainedGame {
    let n = rng.random_range(2..=10);
    let mut z: Vec<f64> = (0..n).map(|_| 10.0 * (1.0 - rng.random::<f64>())).collect();
    z.sort_by(|a, b| b.partial_cmp(a).unwrap());
    z.dedup();
    while z.len() < n {
        z.push(z[z.len() - 1] * 0.5);
    }
    let mut powers = vec![0.0];
    for _ in 1..n {
        let last = powers[powers.len() - 1];
        powers.push(last + 0.01 + 5.0 * rng.random::<f64>());
    }
    let j_max = powers[n - 1];
    let j_ave = 1.2 * j_max * rng.random::<f64>();
    ConstrainedGame::from_parts(z, powers, j_ave).unwrap()
}

pub fn random_case2(rng: &mut ChaCha20Rng) -> Case2Config {
    Case2Config {
        p_t: 10f64.powf(rng.random_range(-1.0..2.0)),
        noise: 10f64.powf(rng.random_range(-1.0..1.0)),
        j_max: 10f64.powf(rng.random_range(-1.0..2.0)),
        n_t: rng.random_range(1..=30),
    }
}

#[derive(Debug, Deserialize)]
pub struct Golden {
    pub game: jamgame::doc::GameDocument,
    pub value: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub m: usize,
    pub j_th: f64,
    pub breakpoints: Vec<f64>,
}

pub fn golden(name: &str) -> Golden {
    let path = format!("{}/tests/golden/{name}.json", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    serde_json::from_str(&text).unwrap()
}

pub fn rel_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}
