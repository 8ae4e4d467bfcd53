//! `frobscope` command-line interface.
//!
//! Exit codes: 0 on success, 1 when a check or tolerance fails, 2 on usage
//! or input errors.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;

#[derive(Parser, Debug)]
#[command(
    name = "frobscope",
    version,
    about = "Frobenius cycle types and recurrence congruences"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: Config,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Config {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Seed for randomized factorization steps.
    #[arg(long, global = true, env = "FROBSCOPE_SEED")]
    pub seed: Option<u64>,

    /// Refuse to run randomized steps without an explicit seed.
    #[arg(long, global = true)]
    pub deterministic: bool,

    /// Worker threads for range scans (defaults to all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Largest number of terms `lucas` will step through.
    #[arg(long, global = true, default_value_t = frobscope::recurrence::DEFAULT_STEP_CAP)]
    pub step_cap: u64,

    /// Largest tau table `tau` will build.
    #[arg(long, global = true, default_value_t = frobscope::tau::MAX_TAU_TABLE)]
    pub series_cap: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify primes for a polynomial: cycle type, split flag, and the
    /// quadratic or cubic label when one applies.
    Classify {
        #[arg(long)]
        poly: String,
        #[arg(long, conflicts_with = "range", required_unless_present = "range")]
        p: Option<u64>,
        /// Half-open prime range `lo..hi`.
        #[arg(long)]
        range: Option<String>,
        /// Keep only primes that are `split`, `ramified`, `inert`, `P1`,
        /// `P2`, `P3`, or have the given cycle type such as `1 2 4`.
        #[arg(long)]
        only: Option<String>,
    },
    /// Cycle-type statistics for all primes up to `pmax`.
    Scan {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        pmax: u64,
        /// Expected class size, as `TYPE=SIZE` (for example `1^3=1`). Repeatable.
        #[arg(long = "class", requires = "group_order")]
        classes: Vec<String>,
        #[arg(long)]
        group_order: Option<u64>,
        /// Largest allowed deviation from the expected densities.
        #[arg(long, default_value_t = 0.02)]
        tolerance: f64,
        /// Also write the report to this file.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Factor a polynomial over F_p.
    Factor {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value_t = BackendArg::Auto)]
        backend: BackendArg,
    },
    /// Trace and residue-rule tables for the cyclotomic polynomial of index M.
    Cyclo {
        #[arg(long)]
        m: u64,
    },
    /// The table of τ(l)² − 4l¹¹ for primes l <= lmax, optionally with the
    /// τ(l^p) congruence checked for odd p <= pmax.
    Tau {
        #[arg(long, default_value_t = 23)]
        lmax: u64,
        #[arg(long)]
        pmax: Option<u64>,
    },
    /// Composite n <= limit dividing the n-th Perrin number.
    Perrin {
        #[arg(long)]
        limit: u64,
    },
    /// Terms of a sequence of class C: the trace sequence by default.
    Lucas {
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 10)]
        count: u64,
        /// Comma-separated initial terms instead of the power sums.
        #[arg(long, allow_hyphen_values = true)]
        initials: Option<String>,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackendArg {
    Auto,
    Berlekamp,
    Cz,
}

/// A check that ran and did not hold; mapped to exit code 1.
#[derive(Debug)]
pub struct CheckFailed(pub String);

impl std::fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CheckFailed {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<CheckFailed>().is_some() {
        return 1;
    }
    match err.downcast_ref::<frobscope::Error>() {
        Some(frobscope::Error::InternalInconsistency(_)) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
