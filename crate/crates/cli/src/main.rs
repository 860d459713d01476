use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod store;

use commands::{CliError, Report};

/// Exact ψ-class intersection numbers, L-polynomials and lattice-point
/// checks.
///
/// Memo tables persist in a text cache, by default
/// `$XDG_CACHE_HOME/psiehrhart/memo.txt` (or `~/.cache/psiehrhart/memo.txt`).
///
/// Exit status: 0 success, 1 I/O or cache failure, 2 bad arguments,
/// 3 mathematical inconsistency.
#[derive(Debug, Parser)]
#[command(name = "psiehrhart", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalOpts {
    /// Emit JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,

    /// Cache file location.
    #[arg(long, global = true, env = "PSIEHRHART_CACHE", value_name = "PATH")]
    cache: Option<PathBuf>,

    /// Neither read nor write the cache.
    #[arg(long, global = true, conflicts_with = "cache")]
    no_cache: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Intersection number of the literal insertion list D at genus G.
    Psi {
        #[arg(long)]
        g: u32,
        /// Comma-separated exponents; `-` or empty for none.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        d: String,
    },
    /// Integral of a product of κ classes and ψ classes.
    Kappa {
        #[arg(long)]
        g: u32,
        /// Comma-separated κ indices, each at least 1.
        #[arg(long)]
        kappa: String,
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        d: String,
    },
    /// L_D(g) with its binomial-basis form, shift m, normalizer and leading coefficient.
    Lpoly {
        #[arg(long, allow_hyphen_values = true)]
        d: String,
    },
    /// f*-vector of L_D(g + m) and its classification.
    Fstar {
        #[arg(long, allow_hyphen_values = true)]
        d: String,
    },
    /// Checks every invariant for all D in range.
    Scan {
        #[arg(long)]
        max_total: u32,
        #[arg(long)]
        max_parts: usize,
    },
    /// Lattice points in the G-th dilate of a fixture.
    Count {
        #[arg(long)]
        fixture: String,
        #[arg(long)]
        g: i64,
    },
    /// Ehrhart polynomial of a fixture by interpolation.
    Interpolate {
        #[arg(long)]
        fixture: String,
    },
    /// Checks a fixture's triangulation point by point up to GMAX.
    Verify {
        #[arg(long)]
        fixture: String,
        #[arg(long, default_value_t = 6)]
        gmax: i64,
    },
    /// Prints a fixture in the plain-text polytope format.
    Fixture {
        #[arg(long)]
        fixture: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cache = store::Store::open(&cli.global);
    let cache = match cache {
        Ok(c) => c,
        Err(e) => return fail(&CliError::Io(e)),
    };
    let outcome = commands::run(&cli.command, &cache);
    let saved = cache.persist();
    match outcome {
        Ok(report) => {
            emit(&report, cli.global.json);
            if let Err(e) = saved {
                return fail(&CliError::Io(e));
            }
            match &report.inconsistency {
                Some(why) => {
                    eprintln!("inconsistency: {why}");
                    ExitCode::from(3)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => fail(&e),
    }
}

fn emit(report: &Report, json: bool) {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report.json).expect("json values serialize")
        );
    } else if !report.plain.is_empty() {
        println!("{}", report.plain.trim_end_matches('\n'));
    }
}

fn fail(e: &CliError) -> ExitCode {
    match e {
        CliError::Usage(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        CliError::Io(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
