//! Games built from the AWGN capacity `R = 1/2 ln(1 + P_T / (N + J))`
//! (nats per transmission).
//!
//! Case 1: a fixed ladder of rates. Each rate survives jamming up to the
//! power that brings capacity down to it, and the jammer's levels sit a
//! margin `delta * N` above those points.
//!
//! Case 2: jamming powers equally spaced on `[0, J_max]`, and the
//! transmitter uses the capacity rate for each level.

use serde::{Deserialize, Serialize};

use crate::analytic::{breakpoints, BreakpointTable};
use crate::error::{Error, Result};
use crate::game::{
    build_payoff_matrix, dot, ConstrainedGame, JammerActionSet, MixedStrategy, PayoffMatrix,
    TransmitterActionSet, TxAction,
};

/// IEEE 802.11 coded rates in Mb/s, highest first.
pub const IEEE_80211_RATES: [f64; 17] = [
    54.0, 51.0, 48.0, 45.0, 42.0, 39.0, 36.0, 33.0, 30.0, 27.0, 24.0, 21.0, 18.0, 15.0, 12.0, 9.0,
    6.0,
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Case1Config {
    /// Strictly decreasing positive rates; these are the game payoffs.
    pub rates: Vec<f64>,
    pub noise: f64,
    /// Extra jamming margin, in units of `noise`.
    pub delta: f64,
    /// Rates are divided by this before entering the capacity formulas.
    pub normalization: f64,
}

impl Default for Case1Config {
    fn default() -> Self {
        Self {
            rates: IEEE_80211_RATES.to_vec(),
            noise: 1.0,
            delta: 0.01,
            normalization: 6.0,
        }
    }
}

impl Case1Config {
    pub fn validate(&self) -> Result<()> {
        if self.rates.is_empty() {
            return Err(Error::invalid("rates", "at least one rate is required"));
        }
        for (i, &r) in self.rates.iter().enumerate() {
            if !r.is_finite() || r <= 0.0 {
                return Err(Error::invalid(
                    format!("rates[{i}]"),
                    "must be finite and positive",
                ));
            }
            if i > 0 && r >= self.rates[i - 1] {
                return Err(Error::invalid(
                    format!("rates[{i}]"),
                    "rates must strictly decrease",
                ));
            }
        }
        positive("noise", self.noise)?;
        positive("delta", self.delta)?;
        positive("normalization", self.normalization)
    }

    fn normalized_rates(&self) -> Vec<f64> {
        self.rates.iter().map(|r| r / self.normalization).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Case2Config {
    pub p_t: f64,
    pub noise: f64,
    pub j_max: f64,
    /// Number of nonzero jamming levels, `N_T`.
    pub n_t: usize,
}

impl Default for Case2Config {
    fn default() -> Self {
        Self {
            p_t: 10.0,
            noise: 1.0,
            j_max: 20.0,
            n_t: 10,
        }
    }
}

impl Case2Config {
    pub fn validate(&self) -> Result<()> {
        positive("p_t", self.p_t)?;
        positive("noise", self.noise)?;
        positive("j_max", self.j_max)?;
        if self.n_t < 1 {
            return Err(Error::invalid("n_t", "must be at least 1"));
        }
        Ok(())
    }

    fn rate_at(&self, power: f64) -> f64 {
        0.5 * (self.p_t / (self.noise + power)).ln_1p()
    }
}

fn positive(what: &str, v: f64) -> Result<()> {
    if !v.is_finite() || v <= 0.0 {
        return Err(Error::invalid(
            what,
            format!("must be finite and positive, got {v}"),
        ));
    }
    Ok(())
}

/// Payoff matrix and jamming powers, awaiting a budget.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GameTemplate {
    pub matrix: PayoffMatrix,
    pub powers: JammerActionSet,
}

impl GameTemplate {
    pub fn with_budget(&self, j_ave: f64) -> Result<ConstrainedGame> {
        ConstrainedGame::new(self.matrix.clone(), self.powers.clone(), j_ave)
    }

    pub fn breakpoints(&self) -> BreakpointTable {
        breakpoints(&self.matrix, &self.powers)
    }
}

/// `e^{2R}`, rejecting overflow.
fn exp2(r: f64) -> Result<f64> {
    let v = (2.0 * r).exp();
    if !v.is_finite() {
        return Err(Error::Overflow(format!(
            "e^(2*{r}) overflows; divide the rates by a larger normalization constant"
        )));
    }
    Ok(v)
}

/// Transmit power needed to run at `r0`: `N (e^{2 R_0} - 1)`.
pub fn required_power(r0: f64, noise: f64) -> Result<f64> {
    positive("r0", r0)?;
    positive("noise", noise)?;
    exp2(r0)?;
    Ok(noise * (2.0 * r0).exp_m1())
}

/// Largest jamming power under which rate `r` is still below capacity when
/// the transmit power is sized for `r0`: `N (e^{2R_0} - e^{2R}) / (e^{2R} - 1)`.
pub fn rate_to_jam_power(r: f64, r0: f64, noise: f64) -> Result<f64> {
    positive("r", r)?;
    positive("noise", noise)?;
    if r > r0 {
        return Err(Error::Domain(format!(
            "rate {r} exceeds the reference rate {r0}"
        )));
    }
    let top = exp2(r0)?;
    let own = exp2(r)?;
    Ok(noise * (top - own) / (2.0 * r).exp_m1())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Case1Game {
    pub template: GameTemplate,
    /// Tolerated jamming power of each rate.
    pub tolerances: Vec<f64>,
    pub transmit_power: f64,
}

pub fn build_case1(cfg: &Case1Config) -> Result<Case1Game> {
    cfg.validate()?;
    let norm = cfg.normalized_rates();
    let r0 = norm[0];
    let tolerances = norm
        .iter()
        .map(|&r| rate_to_jam_power(r, r0, cfg.noise))
        .collect::<Result<Vec<_>>>()?;
    let mut powers = vec![0.0];
    powers.extend(
        tolerances[..tolerances.len() - 1]
            .iter()
            .map(|t| t + cfg.delta * cfg.noise),
    );

    let tx = TransmitterActionSet::new(
        cfg.rates
            .iter()
            .zip(&tolerances)
            .map(|(&payoff, &tolerance)| TxAction { payoff, tolerance })
            .collect(),
    )?;
    let jam = JammerActionSet::new(powers)?;
    let dense = build_payoff_matrix(&tx, &jam);
    for (i, row) in dense.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if (j <= i) != (v > 0.0) {
                return Err(Error::invalid(
                    "delta",
                    format!(
                        "margin {} pushes power level {j} past the tolerance of rate {i}; \
                         use a smaller delta",
                        cfg.delta
                    ),
                ));
            }
        }
    }
    Ok(Case1Game {
        template: GameTemplate {
            matrix: PayoffMatrix::new(cfg.rates.clone())?,
            powers: jam,
        },
        tolerances,
        transmit_power: required_power(r0, cfg.noise)?,
    })
}

/// Closed-form threshold for case 1:
/// `N delta (1 - R_NT/R_0) + N R_NT sum_j (1/R_j - 1/R_{j-1}) (e^{2R_0} - e^{2R_{j-1}}) / (e^{2R_{j-1}} - 1)`.
pub fn case1_threshold(cfg: &Case1Config) -> Result<f64> {
    cfg.validate()?;
    let r = &cfg.rates;
    let norm = cfg.normalized_rates();
    let n = cfg.noise;
    let last = *r.last().expect("validated");
    let top = exp2(norm[0])?;
    let mut sum = 0.0;
    for j in 1..r.len() {
        let prev = norm[j - 1];
        sum += (1.0 / r[j] - 1.0 / r[j - 1]) * (top - exp2(prev)?) / (2.0 * prev).exp_m1();
    }
    Ok(n * cfg.delta * (1.0 - last / r[0]) + n * last * sum)
}

/// Lowest-power jammer forcing the lowest rate:
/// `R_NT [1/R_0, 1/R_1 - 1/R_0, ..., 1/R_NT - 1/R_{NT-1}]`.
pub fn case1_optimal_jammer(cfg: &Case1Config) -> Result<MixedStrategy> {
    let game = build_case1(cfg)?;
    let r = &cfg.rates;
    let last = *r.last().expect("validated");
    let mut y = Vec::with_capacity(r.len());
    y.push(last / r[0]);
    for j in 1..r.len() {
        y.push(last * (1.0 / r[j] - 1.0 / r[j - 1]));
    }
    MixedStrategy::from_solver(y)?.with_powers(&game.template.powers)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Case2Game {
    pub rates: Vec<f64>,
    pub template: GameTemplate,
}

pub fn build_case2(cfg: &Case2Config) -> Result<Case2Game> {
    cfg.validate()?;
    let powers: Vec<f64> = (0..=cfg.n_t)
        .map(|j| j as f64 / cfg.n_t as f64 * cfg.j_max)
        .collect();
    let rates: Vec<f64> = powers.iter().map(|&p| cfg.rate_at(p)).collect();
    Ok(Case2Game {
        template: GameTemplate {
            matrix: PayoffMatrix::new(rates.clone())?,
            powers: JammerActionSet::new(powers)?,
        },
        rates,
    })
}

/// Equilibrium of a case-2 game from its simplified closed forms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Case2Solution {
    pub x_star: MixedStrategy,
    pub y_star: MixedStrategy,
    pub value: f64,
    pub segment_m: usize,
    /// `J_ave,m = (J_max/N_T) [(m+1) - R_m sum_{i<=m} 1/R_i]`.
    pub j_ave_m: Vec<f64>,
}

pub fn case2_closed_forms(cfg: &Case2Config, j_ave: f64) -> Result<Case2Solution> {
    let game = build_case2(cfg)?;
    if !j_ave.is_finite() || j_ave < 0.0 {
        return Err(Error::invalid(
            "j_ave",
            format!("must be finite and non-negative, got {j_ave}"),
        ));
    }
    let r = &game.rates;
    let n_t = cfg.n_t;
    let step = cfg.j_max / n_t as f64;
    // Prefix sums S_m = sum_{i<=m} 1/R_i.
    let inv_sums: Vec<f64> = r
        .iter()
        .scan(0.0, |acc, &ri| {
            *acc += 1.0 / ri;
            Some(*acc)
        })
        .collect();
    let j_ave_m: Vec<f64> = (0..=n_t)
        .map(|m| step * ((m + 1) as f64 - r[m] * inv_sums[m]))
        .collect();
    let table = BreakpointTable {
        j_th: j_ave_m[n_t],
        j_ave_m: j_ave_m.clone(),
    };

    let powers = &game.template.powers;
    let (x, y, value, m) = if j_ave >= table.j_th {
        let last = r[n_t];
        let mut y = vec![last / r[0]];
        y.extend((1..=n_t).map(|j| last * (1.0 / r[j] - 1.0 / r[j - 1])));
        let mut x = vec![0.0; n_t + 1];
        x[n_t] = 1.0;
        (x, y, last, n_t)
    } else {
        let m = table.segment(j_ave);
        let s = inv_sums[m];
        let value = ((m + 1) as f64 - n_t as f64 * j_ave / cfg.j_max) / s;
        let mut x = vec![0.0; n_t + 1];
        for i in 0..=m {
            x[i] = 1.0 / r[i] / s;
        }
        let mut y = vec![0.0; n_t + 1];
        y[0] = value / r[0];
        for j in 1..=m {
            y[j] = value * (1.0 / r[j] - 1.0 / r[j - 1]);
        }
        let j_next = (m + 1) as f64 * step;
        y[m + 1] = value * (j_ave - j_ave_m[m]) / (j_next - j_ave) / r[m];
        (x, y, value, m)
    };
    Ok(Case2Solution {
        x_star: MixedStrategy::from_solver(x)?,
        y_star: MixedStrategy::from_solver(y)?.with_powers(powers)?,
        value,
        segment_m: m,
        j_ave_m,
    })
}

/// Largest budget the semi-uniform family can spend: `J_max (N_T+1) / (2 N_T)`.
pub fn semi_uniform_max_budget(cfg: &Case2Config) -> f64 {
    cfg.j_max * (cfg.n_t + 1) as f64 / (2.0 * cfg.n_t as f64)
}

/// One mass at zero power and equal mass on every nonzero level:
/// `y_0 = 1 - (2 N_T/(N_T+1)) (J_ave/J_max)`, `y_j = (2/(N_T+1)) (J_ave/J_max)`.
/// The returned strategy carries its measured average power.
pub fn semi_uniform(cfg: &Case2Config, j_ave: f64) -> Result<MixedStrategy> {
    cfg.validate()?;
    let n_t = cfg.n_t as f64;
    let ratio = j_ave / cfg.j_max;
    let mut y0 = 1.0 - 2.0 * n_t / (n_t + 1.0) * ratio;
    let y = 2.0 / (n_t + 1.0) * ratio;
    if !(j_ave >= 0.0) || y0 < -1e-12 {
        return Err(Error::Domain(format!(
            "semi-uniform strategy needs 0 <= j_ave <= {}, got {j_ave}",
            semi_uniform_max_budget(cfg)
        )));
    }
    y0 = y0.max(0.0);
    let mut probs = vec![y; cfg.n_t + 1];
    probs[0] = y0;
    let powers = build_case2(cfg)?.template.powers;
    MixedStrategy::from_solver(probs)?.with_powers(&powers)
}

/// `J_TH,U = 1/2 ((N_T+1)/N_T) (1 - R_NT/R_0) J_max`, the first term of
/// [`u_sequence`].
pub fn j_th_upper(cfg: &Case2Config) -> Result<f64> {
    Ok(u_sequence(cfg)?[0])
}

/// `U_i = (1 - R_NT/R_i) (1/2 (N_T+1)/(N_T-i)) J_max` for `i = 0..N_T-1`:
/// the budget above which the transmitter prefers moving mass from rate `i`
/// to the lowest rate when facing the semi-uniform jammer.
pub fn u_sequence(cfg: &Case2Config) -> Result<Vec<f64>> {
    cfg.validate()?;
    let game = build_case2(cfg)?;
    let r = &game.rates;
    let n_t = cfg.n_t;
    let last = r[n_t];
    Ok((0..n_t)
        .map(|i| (1.0 - last / r[i]) * (0.5 * (n_t + 1) as f64 / (n_t - i) as f64) * cfg.j_max)
        .collect())
}

/// Measured average power of `y` on the case-2 grid.
pub fn average_power(cfg: &Case2Config, y: &MixedStrategy) -> Result<f64> {
    let game = build_case2(cfg)?;
    crate::game::check_dim(game.template.powers.len(), y.len())?;
    Ok(dot(y.probs(), game.template.powers.powers()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::solve;
    use crate::game::best_response_transmitter;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1.0)
    }

    #[test]
    fn required_power_examples() {
        assert!(rel(required_power(0.5 * 11f64.ln(), 1.0).unwrap(), 10.0) < 1e-14);
        // 2 (e^2 - 1) = 12.7781121978613...
        assert!(rel(required_power(1.0, 2.0).unwrap(), 12.778_112_197_861_3) < 1e-13);
        assert!(required_power(1e-12, 1.0).unwrap() < 1e-11);
        assert!(matches!(
            required_power(400.0, 1.0),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn jam_power_examples() {
        let r0 = 0.5 * 11f64.ln();
        assert_eq!(rate_to_jam_power(r0, r0, 1.0).unwrap(), 0.0);
        assert!(rel(rate_to_jam_power(0.5 * 6f64.ln(), r0, 1.0).unwrap(), 1.0) < 1e-13);
        assert!(
            rel(
                rate_to_jam_power(0.5 * (13.0f64 / 3.0).ln(), r0, 1.0).unwrap(),
                2.0
            ) < 1e-13
        );
        assert!(rate_to_jam_power(r0 + 0.1, r0, 1.0).is_err());
        assert!(rate_to_jam_power(0.0, r0, 1.0).is_err());
        // Strictly decreasing in the rate.
        let a = rate_to_jam_power(0.5, 1.0, 1.0).unwrap();
        let b = rate_to_jam_power(0.6, 1.0, 1.0).unwrap();
        assert!(a > b);
    }

    fn two_rate() -> Case1Config {
        Case1Config {
            rates: vec![0.5 * 11f64.ln(), 0.5 * 6f64.ln()],
            noise: 1.0,
            delta: 0.01,
            normalization: 1.0,
        }
    }

    #[test]
    fn case1_two_rates() {
        let g = build_case1(&two_rate()).unwrap();
        assert_eq!(g.template.powers.powers(), &[0.0, 0.01]);
        let th = case1_threshold(&two_rate()).unwrap();
        assert!(rel(th, g.template.breakpoints().j_th) < 1e-9);
        let y = case1_optimal_jammer(&two_rate()).unwrap();
        let r = &two_rate().rates;
        assert!((y.probs()[0] - r[1] / r[0]).abs() < 1e-15);
        assert!((y.probs()[1] - (1.0 - r[1] / r[0])).abs() < 1e-15);
        assert!((y.avg_power().unwrap() - th).abs() < 1e-9);
    }

    #[test]
    fn case1_threshold_linear_in_delta() {
        let cfg = two_rate();
        let half = Case1Config {
            delta: cfg.delta / 2.0,
            ..cfg.clone()
        };
        let drop = case1_threshold(&cfg).unwrap() - case1_threshold(&half).unwrap();
        let r = &cfg.rates;
        assert!((drop - cfg.noise * cfg.delta / 2.0 * (1.0 - r[1] / r[0])).abs() < 1e-14);
    }

    #[test]
    fn case1_single_rate() {
        let cfg = Case1Config {
            rates: vec![3.0],
            ..Case1Config::default()
        };
        let g = build_case1(&cfg).unwrap();
        assert_eq!(g.template.powers.powers(), &[0.0]);
        assert_eq!(case1_threshold(&cfg).unwrap(), 0.0);
    }

    #[test]
    fn case1_default_ladder() {
        let cfg = Case1Config::default();
        let g = build_case1(&cfg).unwrap();
        assert_eq!(g.template.matrix.dim(), 17);
        let th = case1_threshold(&cfg).unwrap();
        assert!(rel(th, g.template.breakpoints().j_th) < 1e-9);
        let y = case1_optimal_jammer(&cfg).unwrap();
        let game = g.template.with_budget(th).unwrap();
        let (v, _) = best_response_transmitter(&game, &y).unwrap();
        assert!(v <= 6.0 + 1e-12);
    }

    #[test]
    fn case1_overflow_is_actionable() {
        let cfg = Case1Config {
            normalization: 0.1,
            ..Case1Config::default()
        };
        let err = build_case1(&cfg).unwrap_err();
        assert!(err.to_string().contains("normalization"), "{err}");
    }

    #[test]
    fn case1_excessive_delta_rejected() {
        // The margin may not push J_j past the tolerance of rate j.
        let ok = Case1Config {
            delta: 0.99,
            ..two_rate()
        };
        assert!(build_case1(&ok).is_ok());
        let bad = Case1Config {
            delta: 1.5,
            ..two_rate()
        };
        let err = build_case1(&bad).unwrap_err();
        assert!(err.to_string().contains("delta"), "{err}");
    }

    #[test]
    fn case2_rates() {
        let cfg = Case2Config {
            p_t: 10.0,
            noise: 1.0,
            j_max: 2.0,
            n_t: 2,
        };
        let g = build_case2(&cfg).unwrap();
        let expected = [
            0.5 * 11f64.ln(),
            0.5 * 6f64.ln(),
            0.5 * (13.0f64 / 3.0).ln(),
        ];
        for (a, b) in g.rates.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(g.template.powers.powers(), &[0.0, 1.0, 2.0]);
        let g1 = build_case2(&Case2Config { n_t: 1, ..cfg }).unwrap();
        assert_eq!(g1.template.matrix.dim(), 2);
    }

    #[test]
    fn case2_closed_forms_match_generic() {
        let cfg = Case2Config {
            p_t: 10.0,
            noise: 1.0,
            j_max: 2.0,
            n_t: 2,
        };
        let g = build_case2(&cfg).unwrap();
        let th = g.template.breakpoints().j_th;
        assert!((th - 0.5701).abs() < 1e-4, "{th}");
        let c = case2_closed_forms(&cfg, th).unwrap();
        assert!((c.value - g.rates[2]).abs() < 1e-12);

        let c = case2_closed_forms(&cfg, 0.0).unwrap();
        assert_eq!(c.value, g.rates[0]);
        assert_eq!(c.x_star.probs()[0], 1.0);

        for &j in &[0.05, 0.2, 0.3, 0.5, 1.0, 3.0] {
            let c = case2_closed_forms(&cfg, j).unwrap();
            let s = solve(&g.template.with_budget(j).unwrap()).unwrap();
            assert!(rel(c.value, s.value) < 1e-9);
            for (a, b) in c.y_star.probs().iter().zip(s.y_star.probs()) {
                assert!((a - b).abs() < 1e-9);
            }
            for (a, b) in c.x_star.probs().iter().zip(s.x_star.probs()) {
                assert!((a - b).abs() < 1e-9);
            }
        }
        for (m, &b) in c.j_ave_m.iter().enumerate() {
            let c = case2_closed_forms(&cfg, b).unwrap();
            assert!((c.value - g.rates[m]).abs() < 1e-12);
        }
    }

    #[test]
    fn semi_uniform_examples() {
        let cfg = Case2Config {
            p_t: 10.0,
            noise: 1.0,
            j_max: 2.0,
            n_t: 2,
        };
        assert_eq!(semi_uniform(&cfg, 0.0).unwrap().probs(), &[1.0, 0.0, 0.0]);
        let y = semi_uniform(&cfg, 0.6).unwrap();
        assert!((y.probs()[0] - 0.6).abs() < 1e-15);
        assert!((y.probs()[1] - 0.2).abs() < 1e-15);
        assert!((y.avg_power().unwrap() - 0.6).abs() < 1e-15);

        let top = semi_uniform_max_budget(&cfg);
        assert_eq!(top, 1.5);
        let y = semi_uniform(&cfg, top).unwrap();
        assert_eq!(y.probs()[0], 0.0);
        assert!((y.avg_power().unwrap() - top).abs() < 1e-15);
        assert!(matches!(semi_uniform(&cfg, 1.6), Err(Error::Domain(_))));
    }

    #[test]
    fn upper_bound_examples() {
        let cfg = Case2Config {
            p_t: 10.0,
            noise: 1.0,
            j_max: 2.0,
            n_t: 2,
        };
        let u = j_th_upper(&cfg).unwrap();
        let expected = 0.75 * (1.0 - (13.0f64 / 3.0).ln() / 11f64.ln()) * 2.0;
        assert!((u - expected).abs() < 1e-15);
        assert!((u - 0.5827).abs() < 1e-4);
        let th = build_case2(&cfg).unwrap().template.breakpoints().j_th;
        assert!(th <= u);

        let seq = u_sequence(&cfg).unwrap();
        assert_eq!(seq.len(), 2);
        assert_eq!(seq[0], u);
        assert!(seq[0] > seq[1]);

        let tiny = Case2Config { j_max: 1e-9, ..cfg };
        assert!(j_th_upper(&tiny).unwrap() < 1e-9);
    }
}
