//! `bvcalc`: master-equation checks, BV algebra and BV integrals from the
//! command line.
//!
//! Exit codes: 0 pass, 1 a mathematical verdict failed, 2 input error
//! (unreadable or malformed input, bad arguments), 3 contract violation.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bv_core::Error;

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "bvcalc",
    version,
    about = "Exact BV calculus checks",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Random trials per identity (selftest).
    #[arg(long, global = true)]
    pub trials: Option<usize>,

    /// Truncation order of the exponential check (selftest).
    #[arg(long, global = true, default_value_t = 6)]
    pub order: u32,

    /// Gauss-Legendre points per axis (integrate).
    #[arg(long, global = true, default_value_t = 32)]
    pub points: usize,

    /// Uniform subdivisions per axis (integrate).
    #[arg(long, global = true, default_value_t = 1)]
    pub subdivisions: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,

    /// Directory searched for model files given by a relative name.
    #[arg(long, global = true, env = "BV_MODEL_DIR")]
    pub model_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Structured,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the BV action of a gauge model and check the master equations.
    Check { model: PathBuf },
    /// Exact operations on superfunctions given in text form.
    Algebra {
        #[command(subcommand)]
        op: AlgebraOp,
    },
    /// Integrate a fixture polyvector over one of its surfaces.
    Integrate {
        fixture: PathBuf,
        /// Surface to integrate over; defaults to the first one.
        #[arg(long)]
        surface: Option<String>,
        /// Compare both sides of the Stokes formula.
        #[arg(long, conflicts_with_all = ["homology", "sweep"])]
        stokes: bool,
        /// Compare the integrals over two closed surfaces.
        #[arg(long, num_args = 2, value_names = ["S1", "S2"], conflicts_with = "sweep")]
        homology: Option<Vec<String>>,
        /// Integrate along the fixture's level-set family.
        #[arg(long)]
        sweep: bool,
    },
    /// Randomized identity checks, the geometry cross-check and the
    /// exponential identity on the model catalog.
    Selftest {
        /// Use a Laplacian with a flipped ghost-sector sign.
        #[arg(long)]
        inject_sign_bug: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum AlgebraOp {
    /// The BV Laplacian.
    Delta { expr: String },
    /// The odd Poisson bracket.
    Bracket { f: String, g: String },
    /// The ghost degree.
    Degree { expr: String },
    /// Restrict to the graph of an odd gauge-fixing function: every
    /// antifield becomes the derivative of `psi` by its conjugate.
    Restrict {
        expr: String,
        #[arg(long)]
        psi: String,
    },
}

/// A command outcome: the text to print and whether the verdict passed.
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::Io { .. } | Error::Precondition(_) => 2,
        Error::Contract(_) => 3,
        Error::Numeric(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let header = output::header(&cli);
    match commands::run(&cli) {
        Ok(outcome) => {
            print!("{header}{}", outcome.text);
            ExitCode::from(if outcome.passed { 0 } else { 1 })
        }
        Err(e) => {
            print!("{header}");
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
