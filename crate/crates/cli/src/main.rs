//! `turnover` — command-line laboratory for the discrete-time competition
//! map: simulation, exclusion verdicts, period-2 orbits, fixed-point
//! stability, a continuous-time reference integrator, and parameter sweeps.
//!
//! All commands read one JSON config document; flags override its fields.
//! Exit codes: 0 success, 1 invalid input, 2 numerical failure.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{
    ConsistencyArgs, ContinuousArgs, PeriodicArgs, SeqlabArgs, SimulateArgs, SweepAnalysis,
    SweepArgs,
};

/// Failures split by exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad config, flags, or model (exit 1).
    Input(String),
    /// The computation itself blew up (exit 2).
    Numerical(String),
}

impl From<turnover::Error> for Failure {
    fn from(e: turnover::Error) -> Self {
        match e {
            turnover::Error::NonFiniteState { .. } | turnover::Error::KinkProximity { .. } => {
                Failure::Numerical(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

/// Comma-separated state components: `--x0 0.5,0.3`.
#[derive(Clone, Debug)]
struct StateArg(Vec<f64>);

impl std::str::FromStr for StateArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|part| {
                part.trim()
                    .parse::<f64>()
                    .map_err(|e| format!("bad component {part:?}: {e}"))
            })
            .collect::<Result<Vec<f64>, String>>()
            .map(StateArg)
    }
}

#[derive(Parser)]
#[command(
    name = "turnover",
    about = "Numerical laboratory for a discrete-time multi-strategy competition map",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Iterate the map and report per-strategy extinction verdicts.
    ///
    /// Trajectory CSV goes to --csv (stdout when omitted); the extinction
    /// JSON goes to --json (stdout when --csv is a file and --json omitted).
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Number of steps (default 1000).
        #[arg(long)]
        steps: Option<usize>,
        /// Initial state, comma-separated: --x0 0.5,0.3
        #[arg(long)]
        x0: Option<StateArg>,
        /// Extinction threshold (default 1e-8).
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Turnover coefficients and the pairwise exclusion criterion.
    Exclusion {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Construct the period-2 orbit of a 2-strategy model, if one exists.
    Periodic {
        #[arg(long)]
        config: PathBuf,
        /// Also run the independent Newton search oracle.
        #[arg(long)]
        search: bool,
        /// Search grid resolution (default 30).
        #[arg(long)]
        grid: Option<usize>,
        /// Search jitter seed (default 0).
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The k+1 axis fixed points with eigenvalues and classifications.
    Equilibria {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate the continuous-time counterpart (RK4, fixed step).
    Continuous {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        x0: Option<StateArg>,
        /// Integration horizon (default 50).
        #[arg(long)]
        t_max: Option<f64>,
        /// Integrator step (default 0.01).
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Compare continuous and Euler-discretized extinction verdicts.
    Consistency {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        x0: Option<StateArg>,
        /// Euler step (must satisfy h <= min_i 1/d_i).
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Period-2 counterexample sequences for the growth recurrence.
    ///
    /// Coefficients come from --alpha/--beta or from the config model's
    /// leading pair. Sequence CSV goes to --csv (stdout when omitted);
    /// the recurrence JSON goes to --json.
    Seqlab {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        c1: Option<f64>,
        #[arg(long)]
        c2: Option<f64>,
        /// Sequence length (default 16).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Scan one or two scalar parameters, one verdict row per grid point.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Which verdict to tabulate.
        #[arg(long, value_enum)]
        analysis: SweepAnalysis,
        /// Parameter name: `b<i>`, `d<i>`, `w<i>`, `K` or `c`.
        #[arg(long)]
        param: String,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 11)]
        points: usize,
        #[arg(long)]
        param2: Option<String>,
        #[arg(long, default_value_t = 0.0)]
        from2: f64,
        #[arg(long, default_value_t = 0.0)]
        to2: f64,
        #[arg(long, default_value_t = 11)]
        points2: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Simulate {
            config,
            steps,
            x0,
            tol,
            csv,
            json,
        } => commands::simulate(SimulateArgs {
            config,
            steps,
            x0: x0.map(|s| s.0),
            tol,
            csv,
            json,
        }),
        Command::Exclusion { config, out } => commands::exclusion(&config, &out),
        Command::Periodic {
            config,
            search,
            grid,
            seed,
            out,
        } => commands::periodic(PeriodicArgs {
            config,
            search,
            grid,
            seed,
            out,
        }),
        Command::Equilibria { config, out } => commands::equilibria(&config, &out),
        Command::Continuous {
            config,
            x0,
            t_max,
            dt,
            csv,
            json,
        } => commands::continuous(ContinuousArgs {
            config,
            x0: x0.map(|s| s.0),
            t_max,
            dt,
            csv,
            json,
        }),
        Command::Consistency {
            config,
            x0,
            h,
            t_max,
            dt,
            tol,
            out,
        } => commands::consistency(ConsistencyArgs {
            config,
            x0: x0.map(|s| s.0),
            h,
            t_max,
            dt,
            tol,
            out,
        }),
        Command::Seqlab {
            config,
            alpha,
            beta,
            c1,
            c2,
            n,
            csv,
            json,
        } => commands::seqlab(SeqlabArgs {
            config,
            alpha,
            beta,
            c1,
            c2,
            n,
            csv,
            json,
        }),
        Command::Sweep {
            config,
            analysis,
            param,
            from,
            to,
            points,
            param2,
            from2,
            to2,
            points2,
            out,
        } => commands::sweep(SweepArgs {
            config,
            analysis,
            param,
            from,
            to,
            points,
            param2,
            from2,
            to2,
            points2,
            out,
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Numerical(message)) => {
            eprintln!("numerical failure: {message}");
            ExitCode::from(2)
        }
    }
}
