use rayon::prelude::*;
use serde_json::Value;

use jamgame::awgn::{build_case1, build_case2, semi_uniform, Case2Config, GameTemplate};
use jamgame::doc::{parse_game, parse_scenario, Scenario};
use jamgame::jammers::{non_strategic, random_feasible};
use jamgame::{best_response_transmitter, Error, MixedStrategy};

use crate::Jammer;

pub struct Input {
    template: GameTemplate,
    case2: Option<Case2Config>,
}

/// Accepts a game document (its budget is ignored) or a scenario config.
pub fn load_input(text: &str) -> jamgame::Result<Input> {
    let is_scenario = serde_json::from_str::<Value>(text)
        .ok()
        .and_then(|v| v.as_object().map(|o| o.contains_key("case")))
        .unwrap_or(false);
    if !is_scenario {
        let g = parse_game(text)?;
        return Ok(Input {
            template: GameTemplate {
                matrix: g.matrix().clone(),
                powers: g.jammer_powers().clone(),
            },
            case2: None,
        });
    }
    Ok(match parse_scenario(text)? {
        Scenario::Case1(cfg) => Input {
            template: build_case1(&cfg)?.template,
            case2: None,
        },
        Scenario::Case2(cfg) => Input {
            template: build_case2(&cfg)?.template,
            case2: Some(cfg),
        },
    })
}

pub fn parse_grid(spec: &str) -> jamgame::Result<Vec<f64>> {
    let bad = |reason: &str| Error::Validation {
        what: "grid".into(),
        reason: format!("{reason} (expected start:stop:steps, got {spec:?})"),
    };
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, steps] = parts[..] else {
        return Err(bad("need three fields"));
    };
    let start: f64 = start
        .trim()
        .parse()
        .map_err(|_| bad("start is not a number"))?;
    let stop: f64 = stop
        .trim()
        .parse()
        .map_err(|_| bad("stop is not a number"))?;
    let steps: usize = steps
        .trim()
        .parse()
        .map_err(|_| bad("steps is not an integer"))?;
    if steps < 2 {
        return Err(bad("steps must be at least 2"));
    }
    if !(start.is_finite() && stop.is_finite()) || start < 0.0 || stop <= start {
        return Err(bad("need 0 <= start < stop"));
    }
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|k| {
            if k == steps - 1 {
                stop
            } else {
                start + (stop - start) * k as f64 / last
            }
        })
        .collect())
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn name(j: Jammer) -> &'static str {
    match j {
        Jammer::SemiUniform => "semi_uniform",
        Jammer::NonStrategic => "non_strategic",
        Jammer::Random => "random",
    }
}

/// Fixed strategy for `policy` at budget `b`; `None` outside its domain.
fn policy(input: &Input, j: Jammer, b: f64, seed: u64) -> jamgame::Result<Option<MixedStrategy>> {
    let powers = &input.template.powers;
    match j {
        Jammer::SemiUniform => {
            let cfg = input.case2.as_ref().ok_or_else(|| Error::Validation {
                what: "jammer".into(),
                reason: "semi-uniform needs a case 2 scenario config".into(),
            })?;
            match semi_uniform(cfg, b) {
                Ok(y) => Ok(Some(y)),
                Err(Error::Domain(_)) => Ok(None),
                Err(e) => Err(e),
            }
        }
        Jammer::NonStrategic => non_strategic(powers, b).map(Some),
        Jammer::Random => random_feasible(powers, b, seed).map(Some),
    }
}

fn row(input: &Input, k: usize, b: f64, jammers: &[Jammer], seed: u64) -> jamgame::Result<String> {
    let game = input.template.with_budget(b)?;
    let s = jamgame::solve(&game)?;
    let mut cells = vec![
        num(b),
        num(s.value),
        s.segment_m.to_string(),
        num(s.y_star.avg_power().unwrap_or(f64::NAN)),
    ];
    for &j in jammers {
        match policy(input, j, b, seed.wrapping_add(k as u64))? {
            Some(y) => {
                let (v, _) = best_response_transmitter(&game, &y)?;
                cells.push(num(v));
                cells.push(num(y.avg_power().unwrap_or(f64::NAN)));
            }
            None => cells.extend([String::new(), String::new()]),
        }
    }
    Ok(cells.join(","))
}

pub fn run(input: &Input, grid: &[f64], jammers: &[Jammer], seed: u64) -> jamgame::Result<String> {
    let mut header = String::from("j_ave,value,m,y_power");
    for &j in jammers {
        header.push_str(&format!(",{0}_value,{0}_power", name(j)));
    }
    let rows = grid
        .par_iter()
        .enumerate()
        .map(|(k, &b)| row(input, k, b, jammers, seed))
        .collect::<jamgame::Result<Vec<_>>>()?;
    let mut out = header;
    out.push('\n');
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints() {
        let g = parse_grid("0:1.2:7").unwrap();
        assert_eq!(g.len(), 7);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[6], 1.2);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn grid_errors() {
        for bad in ["0:1:1", "0:1", "1:0:5", "-1:1:3", "a:1:3", "0:1:x"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }
}
