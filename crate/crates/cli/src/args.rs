use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "jordan2",
    version,
    about = "Classify Jordan triple and sequential endomorphisms of 2x2 matrices"
)]
pub struct Cli {
    #[command(flatten)]
    pub tol: TolArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Tolerance overrides. Flags win over the environment.
#[derive(Debug, Clone, Default, Args)]
pub struct TolArgs {
    /// Threshold for classification decisions and law residuals [env: JT_TOL_CLASS]
    #[arg(long, global = true)]
    pub tol_class: Option<f64>,
    /// Threshold for matrix equality and unitarity checks [env: JT_TOL_EQ]
    #[arg(long, global = true)]
    pub tol_eq: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Recover the canonical form of a specified map
    Classify {
        input: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = jordan2::sample::DEFAULT_SEED)]
        seed: u64,
    },
    /// Check the morphism law on random samples
    Verify {
        input: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Square every output before checking (a deliberately broken map)
        #[arg(long)]
        corrupt: bool,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = jordan2::sample::DEFAULT_SEED)]
        seed: u64,
    },
    /// Run the numerical identity suite
    Identities {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = jordan2::sample::DEFAULT_SEED)]
        seed: u64,
    },
    /// Print a random form specification
    Gen {
        #[arg(long, value_enum)]
        form: GenForm,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Evaluate a specified map on one matrix
    Apply {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenForm {
    B1,
    B2,
    B3,
    Zero,
    D1,
    D2,
    D3,
    D4,
    Rank1,
}
