use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cube_psatz::rational::parse_rational;
use cube_psatz::Rational;

pub fn rational_arg(text: &str) -> Result<Rational, String> {
    parse_rational(text).ok_or_else(|| format!("{text:?} is not a rational number (expected a or a/b)"))
}

/// Exact sums-of-squares certificates on the hypercube.
#[derive(Debug, Parser)]
#[command(name = "cube-psatz", version, about)]
pub struct Cli {
    /// Seed for every sampling-based step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON run report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a certificate file against a target polynomial.
    Verify(VerifyArgs),
    /// Build one of the explicit identity certificates.
    Construct(ConstructArgs),
    /// Lift a preordering certificate on a scaled cube to the unit cube.
    Lift(LiftArgs),
    /// Evaluate the effective degree bounds.
    Bounds(BoundsArgs),
    /// Run the lower-bound fact diagnostics on a cube certificate.
    Diagnose(DiagnoseArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Certificate JSON file.
    pub cert: PathBuf,
    /// Target polynomial, e.g. "(1-x1^2)*(1-x2^2)+1".
    pub target: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Identity {
    /// The univariate SOS f_q on its own (needs --q).
    Fq,
    /// 1 - x^2 in the quadratic module of 1 - x^(2q) (needs --q).
    UnivariateShift,
    /// Power-of-two recurrence (needs --m).
    Pow2,
    /// eta^2 - x_i^2 in the quadratic module of the L^(2q) ball (needs --n, --q).
    BoxInLnorm,
    /// n - sum x_i^(2q) in the cube's quadratic module (needs --n, --q).
    LnormInCube,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(value_enum)]
    pub identity: Identity,
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub n: Option<usize>,
    /// 1-based coordinate for box-in-lnorm.
    #[arg(long, default_value_t = 1)]
    pub i: usize,
    #[arg(long, value_parser = rational_arg, conflicts_with = "eta_sq")]
    pub eta: Option<Rational>,
    /// Alternative to --eta when eta itself is irrational.
    #[arg(long, value_parser = rational_arg)]
    pub eta_sq: Option<Rational>,
    /// Certificate output file; embedded in the report when omitted.
    #[arg(short = 'o', long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LiftArgs {
    /// Preordering certificate over a scaled cube.
    pub cert: PathBuf,
    #[arg(long)]
    pub q: u32,
    /// Defaults to the certificate's own eta.
    #[arg(long, value_parser = rational_arg, conflicts_with = "eta_sq")]
    pub eta: Option<Rational>,
    #[arg(long, value_parser = rational_arg)]
    pub eta_sq: Option<Rational>,
    /// Target polynomial; defaults to the certificate's expansion.
    #[arg(long)]
    pub target: Option<String>,
    /// Lifted certificate output file; embedded in the report when omitted.
    #[arg(short = 'o', long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[command(subcommand)]
    pub which: BoundsCommand,
}

#[derive(Debug, Subcommand)]
pub enum BoundsCommand {
    /// eps = fmin / (2 c d^2 fmax).
    Epsilon(FormulaArgs),
    /// Smallest q with 2q >= 4 c d^2 ln(n) fmax/fmin.
    Q(FormulaArgs),
    /// Degree for preordering certificates.
    Schmudgen(FormulaArgs),
    /// Degree for quadratic-module certificates.
    Putinar(FormulaArgs),
    /// Degree excluded for (1-x1^2)(1-x2^2) + eps.
    Lower(LowerArgs),
}

#[derive(Debug, Clone, Args)]
pub struct FormulaArgs {
    #[arg(long)]
    pub n: usize,
    /// Degree of f; defaults to the degree of --f.
    #[arg(long)]
    pub d: Option<u32>,
    #[arg(long, value_parser = rational_arg, requires = "fmax")]
    pub fmin: Option<Rational>,
    #[arg(long, value_parser = rational_arg, requires = "fmin")]
    pub fmax: Option<Rational>,
    /// Estimate fmin/fmax by sampling this polynomial (not certified).
    #[arg(long, conflicts_with_all = ["fmin", "fmax"])]
    pub f: Option<String>,
    /// Grid points per axis when sampling --f.
    #[arg(long, default_value_t = 33)]
    pub grid: usize,
    /// Extra seeded random points when sampling --f.
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
    /// Chebyshev growth constant (defaults to the certified e^5 upper bound).
    #[arg(long = "c", alias = "c-frak", value_parser = rational_arg)]
    pub c_frak: Option<Rational>,
    /// Schmudgen constant C(n,d).
    #[arg(long = "C", alias = "c-nd", value_parser = rational_arg)]
    pub c_nd: Option<Rational>,
    /// Allow C(n,d) = 1 as a placeholder when --C is absent.
    #[arg(long)]
    pub illustrative: bool,
}

#[derive(Debug, Args)]
pub struct LowerArgs {
    #[arg(long, value_parser = rational_arg)]
    pub epsilon: Rational,
}

#[derive(Debug, Args)]
pub struct DiagnoseArgs {
    /// Certificate for (1-x1^2)(1-x2^2) + eps over the square.
    pub cert: PathBuf,
    #[arg(long, value_parser = rational_arg)]
    pub epsilon: Rational,
    #[arg(long, value_parser = rational_arg)]
    pub delta: Option<Rational>,
    /// Points per axis of the sampled fact grid.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Intervals of the exact derivative grid.
    #[arg(long)]
    pub derivative_grid: Option<u32>,
    /// Extra seeded random sample points.
    #[arg(long, default_value_t = 0)]
    pub samples: usize,
}
