use serde_json::{json, Value};

use jamgame::analytic::randomization_gain;
use jamgame::awgn::{
    build_case1, build_case2, case1_optimal_jammer, case1_threshold, case2_closed_forms,
    j_th_upper, semi_uniform_max_budget, u_sequence, Case1Config, Case2Config, GameTemplate,
};
use jamgame::lp::{build_dual, build_primal};
use jamgame::{solve_ne_lp, ConstrainedGame, NESolution};

use crate::Method;

pub fn lp_dump(g: &ConstrainedGame) -> String {
    format!(
        "# transmitter (primal)\n{}\n# jammer (dual)\n{}",
        build_primal(g).to_tableau_string(),
        build_dual(g).to_tableau_string()
    )
}

fn solution_json(s: &NESolution) -> Value {
    json!({
        "value": s.value,
        "x": s.x_star.probs(),
        "y": s.y_star.probs(),
        "y_power": s.y_star.avg_power(),
        "m": s.segment_m,
        "j_th": s.breakpoints.j_th,
        "breakpoints": s.breakpoints.j_ave_m,
    })
}

pub fn solve(g: &ConstrainedGame, method: Method) -> anyhow::Result<Value> {
    Ok(match method {
        Method::Analytic => solution_json(&jamgame::solve(g)?),
        Method::Lp => solution_json(&solve_ne_lp(g)?),
        Method::Both => {
            let a = jamgame::solve(g)?;
            let l = solve_ne_lp(g)?;
            let mut out = solution_json(&a);
            out["lp"] = json!({
                "value": l.value,
                "x": l.x_star.probs(),
                "y": l.y_star.probs(),
            });
            out["gap"] = json!((a.value - l.value).abs());
            out
        }
    })
}

fn gains(t: &GameTemplate) -> anyhow::Result<Vec<f64>> {
    (1..t.matrix.dim())
        .map(|m| Ok(randomization_gain(&t.matrix, &t.powers, m)?))
        .collect()
}

pub fn case1(cfg: &Case1Config, report: bool) -> anyhow::Result<Value> {
    let game = build_case1(cfg)?;
    let table = game.template.breakpoints();
    let j_max = game.template.powers.max_power();
    let mut out = json!({
        "j_th": table.j_th,
        "gain": if table.j_th > 0.0 { json!(j_max / table.j_th) } else { Value::Null },
        "y_star": case1_optimal_jammer(cfg)?.probs(),
        "defaults": cfg,
    });
    if report {
        out["j_th_closed_form"] = json!(case1_threshold(cfg)?);
        out["breakpoints"] = json!(table.j_ave_m);
        out["segment_gains"] = json!(gains(&game.template)?);
        out["row_payoffs"] = json!(game.template.matrix.row_payoffs());
        out["powers"] = json!(game.template.powers.powers());
        out["tolerances"] = json!(game.tolerances);
        out["transmit_power"] = json!(game.transmit_power);
    }
    Ok(out)
}

pub fn case2(cfg: &Case2Config, report: bool) -> anyhow::Result<Value> {
    let game = build_case2(cfg)?;
    let table = game.template.breakpoints();
    let at_threshold = case2_closed_forms(cfg, table.j_th)?;
    let mut out = json!({
        "j_th": table.j_th,
        "j_th_upper": j_th_upper(cfg)?,
        "gain": cfg.j_max / table.j_th,
        "y_star": at_threshold.y_star.probs(),
        "defaults": cfg,
    });
    if report {
        out["u_sequence"] = json!(u_sequence(cfg)?);
        out["breakpoints"] = json!(table.j_ave_m);
        out["segment_gains"] = json!(gains(&game.template)?);
        out["rates"] = json!(game.rates);
        out["powers"] = json!(game.template.powers.powers());
        out["semi_uniform_max_budget"] = json!(semi_uniform_max_budget(cfg));
    }
    Ok(out)
}
