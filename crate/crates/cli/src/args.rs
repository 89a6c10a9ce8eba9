use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use projheat::exactnum::{is_integer, parse_rational, to_exact_string};
use projheat::kernels::ProjPoint;
use projheat::Rational;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "projheat", version, about = "Magnetic heat kernels and heat coefficients on complex projective space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Heat coefficients c_i and b_j with the printed-value diff report
    Coeffs(CoeffsArgs),
    /// Eigenspace dimensions through the three closed forms
    Dims(DimsArgs),
    /// Odd-polynomial decomposition of the multiplicity
    Decomp(DecompArgs),
    /// Reproducing kernel of one eigenspace at a pair of points
    Kernel(KernelArgs),
    /// Heat kernel through the eigenfunction series and the integral representation
    HeatEval(HeatEvalArgs),
    /// Direct heat trace against its truncated small-time expansion
    TraceCompare(TraceCompareArgs),
    /// Cross-representation verification suites
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Complex dimension n >= 1
    #[arg(long)]
    pub n: u32,
    /// Field strength nu >= 0, a multiple of 1/2 (e.g. 0, 1/2, 3)
    #[arg(long, default_value = "0", allow_negative_numbers = true)]
    pub nu: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of standard output
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl Common {
    pub fn two_nu(&self) -> Result<u32, CliError> {
        parse_two_nu(&self.nu)
    }

    pub fn validate(&self) -> Result<u32, CliError> {
        if self.n == 0 {
            return Err(CliError::Usage("--n must be at least 1".into()));
        }
        self.two_nu()
    }
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[command(flatten)]
    pub common: Common,
    /// Highest coefficient index
    #[arg(long = "J", default_value_t = 6)]
    pub j: usize,
}

#[derive(Debug, Args)]
pub struct DimsArgs {
    #[command(flatten)]
    pub common: Common,
    /// Highest level m
    #[arg(long, default_value_t = 10)]
    pub m: u64,
}

#[derive(Debug, Args)]
pub struct DecompArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 0)]
    pub m: u64,
    /// First point, comma-separated complex coordinates such as `0.1+0.2i,0.3`
    #[arg(long, allow_hyphen_values = true)]
    pub z: String,
    /// Second point, same syntax as --z
    #[arg(long, allow_hyphen_values = true)]
    pub w: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Series,
    Integral,
    #[default]
    Both,
}

#[derive(Debug, Args)]
pub struct HeatEvalArgs {
    #[command(flatten)]
    pub common: Common,
    /// Times, comma-separated
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    pub t: Vec<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub z: String,
    #[arg(long, allow_hyphen_values = true)]
    pub w: String,
    /// Tail bound for the eigenfunction series
    #[arg(long, default_value_t = 1e-12, allow_negative_numbers = true)]
    pub eps: f64,
    #[arg(long, value_enum, default_value_t = Method::Both)]
    pub method: Method,
    /// Gauss-Legendre nodes for the integral representation
    #[arg(long, default_value_t = 128)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct TraceCompareArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long = "J", default_value_t = 6)]
    pub j: usize,
    /// Times, comma-separated
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    pub t: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Scope {
    #[default]
    All,
    Dims,
    Zaremba,
    Kernels,
    Paper8,
    Trace,
    Theta,
    Monopole,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Scope::All)]
    pub scope: Scope,
    /// Largest n in the dimension suite
    #[arg(long, default_value_t = 6)]
    pub nmax: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// `2 nu` from a rational string; rejects negative or non half-integer values.
pub fn parse_two_nu(s: &str) -> Result<u32, CliError> {
    let nu: Rational = parse_rational(s.trim()).ok_or_else(|| CliError::Usage(format!("--nu: cannot parse `{s}`")))?;
    let two: Rational = nu.clone() * Rational::from_integer(2.into());
    if !is_integer(&two) || two < Rational::from_integer(0.into()) {
        return Err(CliError::Usage(format!("--nu must be a nonnegative multiple of 1/2, got {}", to_exact_string(&nu))));
    }
    u32::try_from(two.to_integer()).map_err(|_| CliError::Usage(format!("--nu too large: {s}")))
}

pub fn parse_point(s: &str, n: u32) -> Result<ProjPoint, CliError> {
    let coords = s
        .split(',')
        .map(|c| {
            c.trim().parse::<Complex64>().map_err(|_| CliError::Usage(format!("cannot parse coordinate `{c}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if coords.len() != n as usize {
        return Err(CliError::Usage(format!("point `{s}` has {} coordinates, expected n = {n}", coords.len())));
    }
    Ok(ProjPoint::new(coords)?)
}

pub fn validate_times(ts: &[f64]) -> Result<(), CliError> {
    if ts.is_empty() {
        return Err(CliError::Usage("--t needs at least one time".into()));
    }
    match ts.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
        Some(t) => Err(CliError::Usage(format!("times must be positive, got {t}"))),
        None => Ok(()),
    }
}

pub fn validate_eps(eps: f64) -> Result<(), CliError> {
    if eps.is_finite() && eps > 0.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--eps must be positive, got {eps}")))
    }
}
