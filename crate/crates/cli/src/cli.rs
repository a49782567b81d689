use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "zerogap",
    version,
    about = "Exact evaluation and certification of the zero-gap ratio f_r(c)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Report file (written atomically); stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Decimal working precision, overriding the config.
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Recompute the built-in reference values and compare with the
    /// displayed digits.
    Verify {
        /// Allowed |f - displayed|.
        #[arg(long, default_value = "0.000002")]
        tol: String,
        /// Alternative verification table (testing aid).
        #[arg(long, hide = true)]
        table: Option<PathBuf>,
    },
    /// Evaluate f at one point c = MULT·π.
    Ratio {
        #[arg(long)]
        config: PathBuf,
        /// c as a multiple of π.
        #[arg(long = "c", value_name = "MULT")]
        c: String,
    },
    /// Tabulate f on an even grid of c/π values and locate the largest
    /// certified admissible point.
    Scan {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "c-lo", value_name = "MULT")]
        c_lo: String,
        #[arg(long = "c-hi", value_name = "MULT")]
        c_hi: String,
        #[arg(long, default_value_t = 64)]
        steps: usize,
        /// Bisection width for the largest admissible point.
        #[arg(long, default_value = "0.0001")]
        tol: String,
    },
    /// Search monomial families for the largest certified c.
    Optimize {
        /// Family spec file.
        #[arg(long)]
        config: PathBuf,
    },
    /// Euler-product constant a_r.
    Euler {
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 1_000_000)]
        cutoff: u64,
    },
}
