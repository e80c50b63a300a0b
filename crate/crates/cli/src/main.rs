//! `ternjump`: jump counts, zone tables and verification scans for ternary
//! cyclotomic polynomials.
//!
//! Exit codes: 0 when every check passes, 1 when a mathematical check fails,
//! 2 on bad arguments.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "ternjump",
    version,
    about = "Jump counting for ternary cyclotomic polynomials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct TripleArgs {
    #[arg(allow_negative_numbers = true)]
    p: i64,
    #[arg(allow_negative_numbers = true)]
    q: i64,
    #[arg(allow_negative_numbers = true)]
    r: i64,
    /// Reject entries that are not prime.
    #[arg(long)]
    primes_only: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form jump count with oracle checks for one triple.
    Analyze {
        #[command(flatten)]
        triple: TripleArgs,
        /// Compare all three jump computations at every index.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        json: bool,
        /// Skip the coefficient expansion.
        #[arg(long, conflicts_with = "verify")]
        no_oracle: bool,
    },
    /// Show how a single index is classified.
    Classify {
        #[command(flatten)]
        triple: TripleArgs,
        #[arg(allow_negative_numbers = true)]
        k: i64,
        #[arg(long)]
        json: bool,
    },
    /// Export coefficients, or jump indices with --jumps, as CSV.
    Coeffs {
        #[command(flatten)]
        triple: TripleArgs,
        #[arg(long)]
        jumps: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump the jump table as CSV.
    Table {
        /// Use the octuples that match computed values.
        #[arg(long)]
        corrected: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify every triple with entries up to --pmax.
    Scan {
        #[arg(long)]
        pmax: i64,
        #[arg(long)]
        primes_only: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Check this many random indices per triple instead of all.
        #[arg(long)]
        sample_k: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate one of the small-J families.
    Family {
        #[command(subcommand)]
        family: FamilyCommand,
        #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
        format: Format,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum FamilyCommand {
    /// Triples (m, 6m-1, 12m-1).
    SixM {
        #[arg(long, default_value_t = 3)]
        m_from: i64,
        #[arg(long)]
        m_to: i64,
    },
    /// Triples (p, q, 2q+1) built from Germain primes q.
    Germain {
        #[arg(long)]
        qmax: i64,
        /// Rational in (0, 1), as `0.4` or `2/5`.
        #[arg(long)]
        eps: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
