mod args;
mod commands;
mod failure;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fig8::ModularMatrix;

use args::{parse_eta, parse_resolution, parse_u, NRange};
use commands::Common;
use failure::Failure;
use output::Format;

/// Colored Jones polynomial of the figure-eight knot at q = exp((u + 2p pi i)/N):
/// asymptotics, identities, saddle regions and modularity experiments.
///
/// Exit codes: 0 success, 1 a check failed, 2 bad input, 3 numerical failure.
#[derive(Parser)]
#[command(name = "fig8", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Quadrature tolerance; residual thresholds of `lemmas` scale with it.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,

    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Output format; `region` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// J_N(E; e^{xi/N}) in log-magnitude and phase.
    Jones {
        #[arg(long, value_parser = parse_u)]
        u: f64,
        #[arg(long)]
        p: u32,
        /// N or an inclusive range lo..hi.
        #[arg(long = "N", alias = "n")]
        n: NRange,
        #[arg(long, default_value_t = 1)]
        step: u32,
    },
    /// Ratio of J_N to the asymptotic formula, with |ratio - 1|.
    Theorem {
        #[arg(long, value_parser = parse_u)]
        u: f64,
        #[arg(long)]
        p: u32,
        #[arg(long = "N", alias = "n")]
        n: NRange,
        #[arg(long, default_value_t = 1)]
        step: u32,
        /// Also evaluate N sharing a factor with p (skipped by default).
        #[arg(long)]
        include_noncoprime: bool,
    },
    /// Identity residuals and inequality margins with pass/fail per row.
    Lemmas {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Random samples per functional equation.
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Re Phi_m on a grid around the saddle, with region flags.
    Region {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, value_parser = parse_u)]
        u: f64,
        /// N for an N x N grid, or COLSxROWS.
        #[arg(long, value_parser = parse_resolution, default_value = "400")]
        res: (usize, usize),
        #[arg(long, default_value_t = 0.02)]
        nu: f64,
    },
    /// Modularity ratios for an SL(2, Z) matrix and the fitted constants.
    Modularity {
        /// a,b,c,d with ad - bc = 1 and c > 0.
        #[arg(long, value_parser = parse_eta, allow_hyphen_values = true, default_value = "0,-1,1,0")]
        eta: ModularMatrix,
        #[arg(long, value_parser = parse_u)]
        u: f64,
        #[arg(long, value_delimiter = ',', value_parser = positive(), default_value = "1,2,3")]
        p: Vec<u32>,
        #[arg(long = "N", alias = "n", value_delimiter = ',', value_parser = positive(), default_value = "151,301,601")]
        n: Vec<u32>,
        /// N values for the comparison at u = 0.
        #[arg(long, value_delimiter = ',', value_parser = positive(), default_value = "101,401")]
        zagier_n: Vec<u32>,
    },
}

fn positive() -> clap::builder::RangedI64ValueParser<u32> {
    clap::value_parser!(u32).range(1..)
}

fn run(cli: Cli) -> Result<(), Failure> {
    if !(cli.tol > 0.0 && cli.tol < 1.0) {
        return Err(Failure::Input("--tol must lie in (0, 1)".into()));
    }
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Failure::Input(e.to_string()))?;
    }
    let default_format = match cli.command {
        Command::Region { .. } => Format::Csv,
        _ => Format::Json,
    };
    let common = Common {
        tol: cli.tol,
        output: cli.output.as_deref(),
        format: cli.format.unwrap_or(default_format),
    };
    match cli.command {
        Command::Jones { u, p, n, step } => commands::jones(&common, u, p, n, step),
        Command::Theorem {
            u,
            p,
            n,
            step,
            include_noncoprime,
        } => commands::theorem(&common, u, p, n, step, include_noncoprime),
        Command::Lemmas { seed, samples } => commands::lemmas(&common, seed, samples),
        Command::Region { p, m, u, res, nu } => commands::region(&common, p, m, u, res, nu),
        Command::Modularity {
            eta,
            u,
            p,
            n,
            zagier_n,
        } => commands::modularity(&common, eta, u, &p, &n, &zagier_n),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("fig8: {f}");
            f.exit_code()
        }
    }
}
