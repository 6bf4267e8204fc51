use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use taxi_rhc_cli::commands::{cmd_dispatch, cmd_estimate, cmd_report, cmd_simulate};
use taxi_rhc_cli::config::{parse_day_filter, parse_mode, RunConfig};
use taxi_rhc_cli::CliError;

#[derive(Parser)]
#[command(
    name = "taxi-rhc",
    version,
    about = "Receding-horizon taxi dispatch: demand estimation, LP dispatch, simulation, reporting"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Config file (`key = value` lines); flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Root random seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Dispatch mode: nominal or robust.
    #[arg(long)]
    mode: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate a demand model from a directory of per-taxi trace files.
    Estimate {
        /// Directory of trace files (filename = taxi id).
        #[arg(long)]
        traces: PathBuf,
        /// Day filter: all, weekday, or weekend.
        #[arg(long)]
        days: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Solve one dispatch problem for a fleet snapshot.
    Dispatch {
        /// Estimated model file (from `estimate`).
        #[arg(long)]
        model: PathBuf,
        /// Fleet snapshot file: `taxi_id lat lon occupied(0|1)` per line.
        #[arg(long)]
        fleet: PathBuf,
        /// Demand slot (1-based).
        #[arg(long, default_value_t = 1)]
        slot: usize,
        /// Dispatch period within the slot (1-based).
        #[arg(long, default_value_t = 1)]
        period: usize,
        /// Override the idle-distance weight for every horizon step.
        #[arg(long)]
        beta: Option<f64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the dispatch arm and the no-dispatch baseline on one scenario.
    Simulate {
        /// Sweep one parameter: `beta=0,2,10`, `T=2,4,8`, `t2=10,30,60`,
        /// or `alpha=0.05,0.1`.
        #[arg(long)]
        sweep: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Summarize metrics files into a cost table.
    Report {
        /// Metrics CSV files produced by `simulate`.
        files: Vec<PathBuf>,
    },
}

fn load_config(common: &CommonArgs) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::load(common.config.as_deref())?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &common.out {
        cfg.out_dir = out.clone();
    }
    if let Some(mode) = &common.mode {
        cfg.mode = parse_mode(mode)?;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Estimate {
            traces,
            days,
            common,
        } => {
            let mut cfg = load_config(&common)?;
            if let Some(days) = &days {
                cfg.day_filter = parse_day_filter(days)?;
            }
            cmd_estimate(&traces, &cfg)
        }
        Command::Dispatch {
            model,
            fleet,
            slot,
            period,
            beta,
            common,
        } => {
            let mut cfg = load_config(&common)?;
            if let Some(beta) = beta {
                cfg.beta = vec![beta];
            }
            cmd_dispatch(&model, &fleet, &cfg, slot, period)
        }
        Command::Simulate { sweep, common } => {
            let cfg = load_config(&common)?;
            cmd_simulate(&cfg, sweep.as_deref())
        }
        Command::Report { files } => cmd_report(&files),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // help/version requests are not errors
            if err.use_stderr() {
                eprintln!("{err}");
                return ExitCode::from(1);
            }
            print!("{err}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
