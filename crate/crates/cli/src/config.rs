//! Command-line grammar. Every subcommand's arguments double as the config
//! echo embedded in its report, so a run can be repeated from its output.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "kfree", version, about = "k-free integers in monogenic number fields")]
pub struct Cli {
    /// Worker threads for the parallel engines (default: all cores). Results
    /// do not depend on it, so it is left out of the config echo.
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FieldArgs {
    /// Minimal polynomial, constant term first ("1,0,1" is x^2+1).
    #[arg(long, default_value = "1,0,1")]
    pub field: String,

    /// Exponent of the k-free condition.
    #[arg(long, default_value_t = 2)]
    pub k: u32,

    /// Skip the irreducibility test (needed above degree 4).
    #[arg(long)]
    pub assume_irreducible: bool,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Sieve the k-free indicator on the L1 ball.
    Sieve(SieveArgs),
    /// Empirical density against 1/ζ_K(k).
    Density(DensityArgs),
    /// Empirical and Euler-product correlation for a shift pattern.
    Correlate(CorrelateArgs),
    /// Euler-product correlation only.
    Predict(PredictArgs),
    /// Characters of the truncated spectrum with their weights.
    Spectrum(SpectrumArgs),
    /// Points of the annihilator of an ideal.
    Annihilator(AnnihilatorArgs),
    /// Oracle, eigenvalue, Parseval and correlation checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SieveArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub field: FieldArgs,

    #[arg(long)]
    pub radius: u64,

    /// Binary PGM of the grid (planar fields only).
    #[arg(long)]
    pub bitmap: Option<PathBuf>,

    /// CSV of coordinates and bits.
    #[arg(long)]
    pub csv: Option<PathBuf>,

    /// Re-derive this many random points through ideal factorization.
    #[arg(long)]
    pub crosscheck: Option<usize>,

    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DensityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub field: FieldArgs,

    #[arg(long)]
    pub radius: u64,

    /// Largest prime-ideal norm in the Euler product.
    #[arg(long, default_value_t = 1_000_000)]
    pub cutoff: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PredictArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub field: FieldArgs,

    /// Nonzero shifts, `;`-separated ("1;i;-1;-i" or "(1,0);(0,1)").
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub shifts: String,

    /// Restrict to a ≡ 0 mod this ideal (generators `;`-separated).
    #[arg(long)]
    pub modulus: Option<String>,

    #[arg(long, default_value_t = 100_000)]
    pub cutoff: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CorrelateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub predict: PredictArgs,

    /// Ball radius of the empirical average.
    #[arg(long)]
    pub radius: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SpectrumArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub field: FieldArgs,

    /// Keep levels with N(d^k) at most this.
    #[arg(long)]
    pub d_bound: u64,

    #[arg(long, default_value_t = 100_000)]
    pub cutoff: u64,

    /// CSV of every character with its level and weight.
    #[arg(long)]
    pub csv: Option<PathBuf>,

    /// SVG scatter of the characters.
    #[arg(long)]
    pub svg: Option<PathBuf>,

    /// Coordinate pair plotted in the scatter.
    #[arg(long, default_value = "0,1")]
    pub coords: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AnnihilatorArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub field: FieldArgs,

    /// Ideal generators, `;`-separated ("8-6i").
    #[arg(long, allow_hyphen_values = true)]
    pub ideal: String,

    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub field: FieldArgs,

    /// Grid radius for the oracle and correlation checks.
    #[arg(long, default_value_t = 60)]
    pub radius: u64,

    #[arg(long, default_value_t = 500)]
    pub samples: usize,

    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    /// Truncation bound N(d^k) for the eigenvalue checks.
    #[arg(long, default_value_t = 25)]
    pub d_bound: u64,

    /// Level bound N(d) for the Parseval sum.
    #[arg(long, default_value_t = 10_000)]
    pub parseval_bound: u64,

    #[arg(long, default_value_t = 100_000)]
    pub cutoff: u64,

    /// Allowed |empirical − analytic| in the correlation suite.
    #[arg(long, default_value_t = 0.05)]
    pub tolerance: f64,
}
