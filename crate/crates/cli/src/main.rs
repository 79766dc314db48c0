//! `es`: command-line front end for es-core.
//!
//! Exit codes:
//!
//! | code | meaning                                         |
//! |------|-------------------------------------------------|
//! | 0    | success                                         |
//! | 1    | `verify`: the triple is not a solution          |
//! | 2    | invalid input or usage                          |
//! | 3    | bounded or complete search found nothing        |
//! | 4    | output file not writable                        |
//! | 5    | `--resume` against an incompatible census file  |
//! | 10   | internal error (an invariant broke)             |

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;

#[derive(Parser, Debug)]
#[command(name = "es", version, about = "Solutions of 4/n = 1/x + 1/y + 1/z")]
struct Cli {
    #[command(flatten)]
    fmt: FormatArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct FormatArgs {
    /// Machine-readable JSON output
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,

    /// CSV output
    #[arg(long, global = true)]
    csv: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    Duv,
    Gcd,
    Pair,
    Any,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build solutions for a prime by a chosen structural route
    Solve {
        p: u64,
        #[arg(long, value_enum, default_value_t = Form::Any)]
        form: Form,
        /// Use the bounded divisor-shift search (p = 1 mod 4) for --form duv
        #[arg(long)]
        t_max: Option<u64>,
        /// Allow a composite denominator (oracle only)
        #[arg(long)]
        composite: bool,
    },
    /// List every solution for n by brute force
    Enumerate {
        n: u64,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long, default_value_t = 1)]
        shards: usize,
    },
    /// Survey a prime range and write JSON-lines records
    Census {
        lo: u64,
        hi: u64,
        /// Complete duv-form search
        #[arg(long)]
        duv: bool,
        /// gcd-form smallest terms
        #[arg(long)]
        gcd: bool,
        /// Equal-term pair flags
        #[arg(long)]
        pairs: bool,
        /// Full solution counts (slow)
        #[arg(long)]
        count: bool,
        /// Existence only
        #[arg(long)]
        exists: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, requires = "out")]
        resume: bool,
        #[arg(long)]
        shards: Option<usize>,
    },
    /// Congruence classes behind every duv-form solution of p
    Discover { p: u64 },
    /// Check and classify a candidate solution
    #[command(alias = "classify")]
    Verify { n: u64, x: u64, y: u64, z: u64 },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let fmt = Format::from_flags(cli.fmt.json, cli.fmt.csv);
    let result = match cli.command {
        Command::Solve { p, form, t_max, composite } => {
            commands::solve(p, form, t_max, composite, fmt)
        }
        Command::Enumerate { n, cap, shards } => commands::enumerate(n, cap, shards, fmt),
        Command::Census { lo, hi, duv, gcd, pairs, count, exists, out, resume, shards } => {
            let flags = commands::CensusFlags { duv, gcd, pairs, count, exists };
            commands::census(lo, hi, flags, out, resume, shards, fmt)
        }
        Command::Discover { p } => commands::discover(p, fmt),
        Command::Verify { n, x, y, z } => commands::verify(n, x, y, z, fmt),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(commands::exit_code(&err))
        }
    }
}
