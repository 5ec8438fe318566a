use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use jamgame::doc::{parse_game, parse_scenario, parse_strategy, Player, Scenario};
use jamgame::{Error, MixedStrategy};

mod commands;
mod sweep;

/// Verification found a profitable deviation.
const EXIT_NOT_NE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "jamgame",
    version,
    about = "Solve and check constrained jamming games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Method {
    Analytic,
    Lp,
    Both,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Jammer {
    SemiUniform,
    NonStrategic,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Equilibrium of a game document, as JSON.
    Solve {
        game: PathBuf,
        #[arg(long, value_enum, default_value = "analytic")]
        method: Method,
        /// Write the initial primal and dual LPs as fixed-width tables.
        #[arg(long, value_name = "FILE")]
        lp_dump: Option<PathBuf>,
    },
    /// Game value over a grid of budgets, as CSV.
    Sweep {
        /// Game document or scenario config.
        game: PathBuf,
        /// `start:stop:steps`, with `steps >= 2` grid points.
        #[arg(long)]
        grid: String,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Add the value forced by a fixed jammer policy (repeatable).
        #[arg(long, value_enum)]
        jammer: Vec<Jammer>,
        /// Seed for the random jammer.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Rate-ladder scenario: threshold, randomization gain, optimal jammer.
    Case1 {
        /// Scenario config; defaults when omitted.
        config: Option<PathBuf>,
        /// Include breakpoints, powers and per-segment gains.
        #[arg(long)]
        report: bool,
    },
    /// Equal-spacing scenario: threshold, its upper bound, gain, optimal jammer.
    Case2 {
        config: Option<PathBuf>,
        #[arg(long)]
        report: bool,
    },
    /// Check whether a strategy pair is an epsilon-equilibrium.
    Verify {
        game: PathBuf,
        x: PathBuf,
        y: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        eps: f64,
    },
    /// Monte Carlo play of a strategy pair, as CSV.
    Simulate {
        game: PathBuf,
        x: PathBuf,
        y: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        rounds: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_game(path: &Path) -> anyhow::Result<jamgame::ConstrainedGame> {
    parse_game(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn load_strategy(path: &Path, player: Player) -> anyhow::Result<MixedStrategy> {
    parse_strategy(&read(path)?, player).with_context(|| format!("in {}", path.display()))
}

fn load_scenario(path: Option<&Path>, case: u8) -> anyhow::Result<Scenario> {
    let scenario = match path {
        Some(p) => parse_scenario(&read(p)?).with_context(|| format!("in {}", p.display()))?,
        None => parse_scenario(&format!("{{\"case\": {case}}}"))?,
    };
    let found = match scenario {
        Scenario::Case1(_) => 1,
        Scenario::Case2(_) => 2,
    };
    if found != case {
        return Err(anyhow!(Error::Validation {
            what: "case".into(),
            reason: format!("config is for case {found}, command expects case {case}"),
        }));
    }
    Ok(scenario)
}

/// Writes to `out`, or stdout when absent.
fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn print_json(v: &Value) -> anyhow::Result<()> {
    emit(None, &format!("{}\n", serde_json::to_string_pretty(v)?))
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Solve {
            game,
            method,
            lp_dump,
        } => {
            let g = load_game(&game)?;
            if let Some(p) = &lp_dump {
                emit(Some(p), &commands::lp_dump(&g))?;
            }
            print_json(&commands::solve(&g, method)?)?;
            Ok(0)
        }
        Command::Sweep {
            game,
            grid,
            out,
            jammer,
            seed,
        } => {
            let grid = sweep::parse_grid(&grid)?;
            let input = sweep::load_input(&read(&game)?)
                .with_context(|| format!("in {}", game.display()))?;
            let csv = sweep::run(&input, &grid, &jammer, seed)?;
            emit(out.as_deref(), &csv)?;
            Ok(0)
        }
        Command::Case1 { config, report } => {
            let Scenario::Case1(cfg) = load_scenario(config.as_deref(), 1)? else {
                unreachable!()
            };
            print_json(&commands::case1(&cfg, report)?)?;
            Ok(0)
        }
        Command::Case2 { config, report } => {
            let Scenario::Case2(cfg) = load_scenario(config.as_deref(), 2)? else {
                unreachable!()
            };
            print_json(&commands::case2(&cfg, report)?)?;
            Ok(0)
        }
        Command::Verify { game, x, y, eps } => {
            let g = load_game(&game)?;
            let x = load_strategy(&x, Player::Transmitter)?;
            let y = load_strategy(&y, Player::Jammer)?;
            let check = jamgame::epsilon_ne_check(&g, &x, &y, eps)?;
            print_json(&json!({
                "is_ne": check.is_ne,
                "value": check.value,
                "transmitter_gap": check.transmitter_gap,
                "jammer_gap": check.jammer_gap,
                "eps": eps,
            }))?;
            Ok(if check.is_ne { 0 } else { EXIT_NOT_NE })
        }
        Command::Simulate {
            game,
            x,
            y,
            rounds,
            seed,
            out,
        } => {
            let g = load_game(&game)?;
            let x = load_strategy(&x, Player::Transmitter)?;
            let y = load_strategy(&y, Player::Jammer)?;
            let report = jamgame::simulate_parallel(&g, &x, &y, rounds, seed)?;
            let mut buf = Vec::new();
            jamgame::sim::write_csv(&mut buf, &[report])?;
            emit(out.as_deref(), &String::from_utf8(buf)?)?;
            Ok(0)
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(Error::Infeasible(_)) => EXIT_INFEASIBLE,
        Some(Error::ContractViolation(_)) => EXIT_NOT_NE,
        _ => EXIT_INPUT,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
