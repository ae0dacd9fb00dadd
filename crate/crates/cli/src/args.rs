use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use fllab::geometry::Side;
use fllab::lattice::DEFAULT_GUARD_EXPONENT;
use fllab::orbital::DEFAULT_ORACLE_BOUND;
use fllab::padic::{smallest_nonresidue, FieldConfig, DEFAULT_PRECISION};

#[derive(Debug, Parser)]
#[command(name = "fl-lab", version, about = "Checks the Jacquet-Rallis fundamental lemma for unit functions on random samples")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare O(X, 1) and O(Y, 1) on random matched pairs.
    Verify(VerifyArgs),
    /// Orbital integral of one element read from a matrix file.
    Orbit(OrbitArgs),
    /// Invariants of one element read from a matrix file.
    Invariants(InvariantsArgs),
    /// Representative on either side of an invariant point.
    Represent(RepresentArgs),
    /// Exact checks of the partial Fourier transform and the Weil relations.
    FourierCheck(FourierArgs),
    /// Check the reduction identities on elements with unit q.
    Lemma1(Lemma1Args),
}

#[derive(Debug, Clone, Args)]
pub struct PrecisionArg {
    /// Working precision in p-adic digits.
    #[arg(long, env = "FLLAB_PRECISION", default_value_t = DEFAULT_PRECISION)]
    pub precision: u32,
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    #[arg(long, default_value_t = 3, allow_negative_numbers = true)]
    pub p: u64,
    /// Non-residue defining E = F(sqrt u); defaults to the smallest positive one.
    #[arg(long, allow_negative_numbers = true)]
    pub u: Option<i64>,
    #[command(flatten)]
    pub precision: PrecisionArg,
}

impl FieldArgs {
    pub fn config(&self) -> fllab::Result<FieldConfig> {
        let u = match self.u {
            Some(u) => u,
            None => smallest_nonresidue(self.p)?,
        };
        FieldConfig::with_u(self.p, u, self.precision.precision)
    }
}

#[derive(Debug, Clone, Args)]
pub struct SamplingArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Entries are drawn from {m / p^e : |m| <= height, e in {0, 1}}.
    #[arg(long, default_value_t = 50)]
    pub height: i64,
    /// Lattice enumeration stops past quotients of order p^guard.
    #[arg(long, default_value_t = DEFAULT_GUARD_EXPONENT)]
    pub guard: u32,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Record runtime_ms = 0 so reports are byte-identical across runs.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    /// Fraction of samples drawn from invariant points without a hermitian orbit.
    #[arg(long, default_value_t = 0.2)]
    pub inject: f64,
    /// Also write the sample records as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OrbitArgs {
    #[arg(long)]
    pub side: Side,
    /// Matrix JSON file, or - for stdin.
    #[arg(long)]
    pub input: PathBuf,
    /// Also run the brute-force oracle.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, default_value_t = DEFAULT_ORACLE_BOUND)]
    pub oracle_bound: u32,
    #[arg(long, default_value_t = DEFAULT_GUARD_EXPONENT)]
    pub guard: u32,
    #[command(flatten)]
    pub precision: PrecisionArg,
}

#[derive(Debug, Clone, Args)]
pub struct InvariantsArgs {
    /// Matrix JSON file, or - for stdin.
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub precision: PrecisionArg,
}

#[derive(Debug, Clone, Args)]
pub struct RepresentArgs {
    #[arg(long)]
    pub side: Side,
    /// Invariant point JSON file, or - for stdin.
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub field: FieldArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FourierArgs {
    #[arg(long, default_value_t = 3, allow_negative_numbers = true)]
    pub p: u64,
    #[arg(long, allow_negative_numbers = true)]
    pub u: Option<i64>,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Random functions live on p^{-level}O / p^{level}O in each coordinate.
    #[arg(long, default_value_t = 1)]
    pub level: u32,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct Lemma1Args {
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub sampling: SamplingArgs,
}
