//! `coopeuler`: exact analysis of cooperative games from JSON files.
//!
//! Exit codes: 0 success, 1 input error, 2 size guard exceeded, 3 internal
//! invariant failure.

mod commands;
mod input;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use coopeuler::charfn::{CharFnMode, OutsiderRule};
use log::{debug, error};

use commands::{CliError, Context, NtuArgs, Payment};
use report::Format;

#[derive(Parser, Debug)]
#[command(name = "coopeuler", version, about = "Exact analysis of cooperative games")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Game file (JSON).
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Add decimal approximations next to exact values.
    #[arg(long, global = true)]
    approx: bool,
    /// Characteristic function of a normal-form game.
    #[arg(long, global = true, value_enum, default_value = "standard")]
    mode: Mode,
    /// How outsiders act in property-rights mode.
    #[arg(long, global = true, value_enum, default_value = "optimistic")]
    rule: Rule,
    /// Full action profile for `--rule baseline`, e.g. `0,1,0`.
    #[arg(long, global = true)]
    baseline: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Standard,
    PropertyRights,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Rule {
    Optimistic,
    Baseline,
    Minimax,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Characteristic function table.
    Value,
    /// Superadditive cover and balancedness.
    Cover,
    /// Shapley value with subgame identities.
    Shapley,
    /// Core emptiness, lexicographic minimum and coordinate ranges.
    Core {
        /// Point to test for membership (defaults to the Shapley value).
        #[arg(long)]
        probe: Option<String>,
    },
    /// Equal-treatment core at replication k.
    Etcore {
        #[arg(long, default_value_t = 1)]
        k: u64,
    },
    /// Whether the equal-treatment core at k equals the subdifferential at 1.
    CoreEquiv {
        #[arg(long, default_value_t = 1)]
        k: u64,
    },
    /// Discrete Euler gaps for k = 1..kmax, the infinitesimal gap and the
    /// stabilization index.
    Gap {
        #[arg(long)]
        x: Option<String>,
        #[arg(long, default_value_t = 5)]
        kmax: u64,
    },
    /// Payoffs, assignment and money transfers at x.
    Saddle {
        #[arg(long)]
        x: Option<String>,
    },
    /// Misreport search under a payment rule.
    Ic {
        #[arg(long, value_enum, default_value = "marginal")]
        payment: Payment,
        /// Replication of the marginal-contribution rule.
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long)]
        x: Option<String>,
    },
    /// Utility-weight fixed point.
    Ntu {
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        gamma0: Option<String>,
        /// Tolerance on |m_i| (default 1/1000000000).
        #[arg(long)]
        tol: Option<String>,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
        #[arg(long)]
        damping: bool,
    },
    /// Exchange economy analyses.
    #[command(subcommand)]
    Exchange(ExchangeCommand),
    /// Parse and check a game file.
    Validate,
}

#[derive(Subcommand, Debug)]
enum ExchangeCommand {
    /// Trades, prices, type values and transfers.
    Walras {
        #[arg(long)]
        x: Option<String>,
    },
    /// Range of each price over all equilibrium price vectors.
    Prices {
        #[arg(long)]
        x: Option<String>,
    },
    /// Derived coalition game.
    Game,
    /// Euler gaps and core equivalence.
    Euler {
        #[arg(long)]
        x: Option<String>,
        #[arg(long, default_value_t = 3)]
        k: u64,
    },
}

fn load(common: &Common) -> Result<Context, CliError> {
    let path = common.input.as_ref().ok_or_else(|| CliError::input("--input is required"))?;
    let text = fs::read_to_string(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let game = input::parse_game(&text).map_err(CliError::Input)?;
    debug!("loaded {} game with {} types", game.kind(), game.num_types());
    let mode = match common.mode {
        Mode::Standard => CharFnMode::Standard,
        Mode::PropertyRights => CharFnMode::PropertyRights,
    };
    let rule = match (common.rule, &common.baseline) {
        (Rule::Optimistic, _) => OutsiderRule::Optimistic,
        (Rule::Minimax, _) => OutsiderRule::Minimax,
        (Rule::Baseline, None) => return Err(CliError::input("--rule baseline needs --baseline")),
        (Rule::Baseline, Some(b)) => {
            let profile: Result<Vec<usize>, _> = b.split(',').map(|a| a.trim().parse()).collect();
            OutsiderRule::Baseline(profile.map_err(|_| CliError::input("--baseline expects comma-separated action indices"))?)
        }
    };
    Ok(Context { game, mode, rule })
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let ctx = load(&cli.common)?;
    let report = match &cli.command {
        Command::Value => commands::value(&ctx),
        Command::Cover => commands::cover_cmd(&ctx),
        Command::Shapley => commands::shapley(&ctx),
        Command::Core { probe } => commands::core_cmd(&ctx, probe.as_deref()),
        Command::Etcore { k } => commands::etcore(&ctx, *k),
        Command::CoreEquiv { k } => commands::core_equiv(&ctx, *k),
        Command::Gap { x, kmax } => commands::gap(&ctx, x.as_deref(), *kmax),
        Command::Saddle { x } => commands::saddle(&ctx, x.as_deref()),
        Command::Ic { payment, k, x } => commands::ic(&ctx, *payment, *k, x.as_deref()),
        Command::Ntu { x, gamma0, tol, max_iter, damping } => commands::ntu(
            &ctx,
            &NtuArgs {
                x: x.as_deref(),
                gamma0: gamma0.as_deref(),
                tol: tol.as_deref(),
                max_iter: *max_iter,
                damping: *damping,
            },
        ),
        Command::Exchange(sub) => match sub {
            ExchangeCommand::Walras { x } => commands::exchange_walras(&ctx, x.as_deref()),
            ExchangeCommand::Prices { x } => commands::exchange_prices(&ctx, x.as_deref()),
            ExchangeCommand::Game => commands::exchange_game(&ctx),
            ExchangeCommand::Euler { x, k } => commands::exchange_euler(&ctx, x.as_deref(), *k),
        },
        Command::Validate => commands::validate(&ctx),
    }?;
    let report = if cli.common.approx { report.with_approximations() } else { report };
    Ok(report.render(cli.common.format))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("COOPEULER_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            if let Some(path) = &cli.common.out {
                if let Err(e) = fs::write(path, text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                print!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            match &e {
                CliError::Input(diags) => {
                    for d in diags {
                        let path = if d.path.is_empty() { "input" } else { d.path.as_str() };
                        eprintln!("error: {path}: {}", d.message);
                    }
                }
                CliError::Size(m) => eprintln!("error: size guard: {m}"),
                CliError::Invariant(m) => {
                    error!("invariant failure");
                    eprintln!("error: internal invariant failed (this is a bug): {m}");
                }
            }
            ExitCode::from(e.exit_code())
        }
    }
}
