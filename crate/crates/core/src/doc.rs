//! JSON documents: games, strategies and scenario configs.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::awgn::{Case1Config, Case2Config};
use crate::error::{Error, Result};
use crate::game::{ConstrainedGame, MixedStrategy};

/// `{"row_payoffs": [..], "powers": [..], "j_ave": x}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameDocument {
    pub row_payoffs: Vec<f64>,
    pub powers: Vec<f64>,
    pub j_ave: f64,
}

impl GameDocument {
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Err(Error::invalid("game document", "file is empty"));
        }
        serde_json::from_str(text).map_err(|e| Error::invalid("game document", e.to_string()))
    }

    pub fn to_game(&self) -> Result<ConstrainedGame> {
        ConstrainedGame::from_parts(self.row_payoffs.clone(), self.powers.clone(), self.j_ave)
    }
}

impl From<&ConstrainedGame> for GameDocument {
    fn from(g: &ConstrainedGame) -> Self {
        Self {
            row_payoffs: g.matrix().row_payoffs().to_vec(),
            powers: g.jammer_powers().powers().to_vec(),
            j_ave: g.j_ave(),
        }
    }
}

pub fn parse_game(text: &str) -> Result<ConstrainedGame> {
    GameDocument::parse(text)?.to_game()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Player {
    Transmitter,
    Jammer,
}

impl Player {
    fn key(self) -> &'static str {
        match self {
            Player::Transmitter => "x",
            Player::Jammer => "y",
        }
    }
}

/// Reads a strategy from a bare array, `{"probs": [..]}`, or a solve result
/// holding `"x"` and `"y"` (the entry for `player` is used).
pub fn parse_strategy(text: &str, player: Player) -> Result<MixedStrategy> {
    if text.trim().is_empty() {
        return Err(Error::invalid("strategy", "file is empty"));
    }
    let v: Value =
        serde_json::from_str(text).map_err(|e| Error::invalid("strategy", e.to_string()))?;
    strategy_from_value(&v, player, "strategy")
}

fn strategy_from_value(v: &Value, player: Player, path: &str) -> Result<MixedStrategy> {
    match v {
        Value::Array(items) => {
            let probs = items
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    p.as_f64()
                        .ok_or_else(|| Error::invalid(format!("{path}[{i}]"), "expected a number"))
                })
                .collect::<Result<Vec<_>>>()?;
            MixedStrategy::new(probs)
        }
        Value::Object(map) => {
            if let Some(p) = map.get("probs") {
                strategy_from_value(p, player, &format!("{path}.probs"))
            } else if let Some(p) = map.get(player.key()) {
                strategy_from_value(p, player, &format!("{path}.{}", player.key()))
            } else {
                Err(Error::invalid(
                    path,
                    format!(
                        "expected an array or an object with \"probs\" or \"{}\"",
                        player.key()
                    ),
                ))
            }
        }
        _ => Err(Error::invalid(path, "expected an array or an object")),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "case")]
pub enum Scenario {
    #[serde(rename = "1")]
    Case1(Case1Config),
    #[serde(rename = "2")]
    Case2(Case2Config),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDocument {
    case: u8,
    rates: Option<Vec<f64>>,
    p_t: Option<f64>,
    noise: Option<f64>,
    delta: Option<f64>,
    j_max: Option<f64>,
    n_t: Option<usize>,
    normalization: Option<f64>,
}

/// `{"case": 1|2, "rates"?, "p_t"?, "noise"?, "delta"?, "j_max"?, "n_t"?, "normalization"?}`.
/// Missing fields take the defaults; fields belonging to the other case are
/// rejected.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    if text.trim().is_empty() {
        return Err(Error::invalid("scenario", "file is empty"));
    }
    let d: ScenarioDocument =
        serde_json::from_str(text).map_err(|e| Error::invalid("scenario", e.to_string()))?;
    let reject = |key: &str, present: bool| -> Result<()> {
        if present {
            Err(Error::invalid(key, format!("not used by case {}", d.case)))
        } else {
            Ok(())
        }
    };
    let scenario = match d.case {
        1 => {
            reject("p_t", d.p_t.is_some())?;
            reject("j_max", d.j_max.is_some())?;
            reject("n_t", d.n_t.is_some())?;
            let def = Case1Config::default();
            let cfg = Case1Config {
                rates: d.rates.unwrap_or(def.rates),
                noise: d.noise.unwrap_or(def.noise),
                delta: d.delta.unwrap_or(def.delta),
                normalization: d.normalization.unwrap_or(def.normalization),
            };
            cfg.validate()?;
            Scenario::Case1(cfg)
        }
        2 => {
            reject("rates", d.rates.is_some())?;
            reject("delta", d.delta.is_some())?;
            reject("normalization", d.normalization.is_some())?;
            let def = Case2Config::default();
            let cfg = Case2Config {
                p_t: d.p_t.unwrap_or(def.p_t),
                noise: d.noise.unwrap_or(def.noise),
                j_max: d.j_max.unwrap_or(def.j_max),
                n_t: d.n_t.unwrap_or(def.n_t),
            };
            cfg.validate()?;
            Scenario::Case2(cfg)
        }
        other => {
            return Err(Error::invalid(
                "case",
                format!("must be 1 or 2, got {other}"),
            ))
        }
    };
    Ok(scenario)
}
