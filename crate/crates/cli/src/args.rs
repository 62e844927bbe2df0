use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sixvertex_core::rhp::Edge;
use sixvertex_core::RationalParameter;

/// Exact and asymptotic six-vertex partition functions on the critical line
/// `a = 1 - x, b = 1 + x, c = 2`.
///
/// Data goes to `--out` (or stdout); a short summary goes to stderr.
/// Defaults are mirrored in `crates/cli/defaults.json`.
#[derive(Debug, Parser)]
#[command(name = "sixvertex", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact Z_N and the h/tau chain over the rationals.
    Exact(ExactArgs),
    /// Brute-force enumeration of domain-wall configurations (N <= 6).
    Oracle(OracleArgs),
    /// Exact Toda residuals for a range of N.
    Toda(TodaArgs),
    /// Predicted h_N/(N!)^2, epsilon_N and A_N over a range of N.
    Asym(AsymArgs),
    /// Equilibrium measure, g-function samples and the variational check.
    Eqm(EqmArgs),
    /// Airy parametrix matching on a circle around a soft edge.
    Rhp(RhpArgs),
    /// Free energy scans across the D/AF critical line.
    Phase(PhaseArgs),
    /// Fit ln C0 from exact ln Z_N.
    Fit(FitArgs),
    /// Exact vs predicted table with the C0 fit applied.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Write data here instead of stdout; a manifest goes to `<PATH>.manifest.json`.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Worker threads for parallel sweeps [default: logical cores].
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct ExactArgs {
    /// Parameter as `p/q` with |x| < 1.
    #[arg(long, default_value = "0/1")]
    pub x: RationalParameter,
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    /// Also evaluate ln Z_N on the floating-point chain at this many bits.
    #[arg(long, value_name = "BITS")]
    pub prec: Option<usize>,
    /// Tolerance for the floating-point error estimate [default: 2^(-BITS/2)].
    #[arg(long, requires = "prec")]
    pub tol: Option<f64>,
    /// Significant digits in CSV decimal columns.
    #[arg(long, default_value_t = 20)]
    pub digits: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Weight a as `p/q`; with --b and --c overrides --x.
    #[arg(long, requires_all = ["b", "c"])]
    pub a: Option<String>,
    #[arg(long, requires_all = ["a", "c"])]
    pub b: Option<String>,
    #[arg(long, requires_all = ["a", "b"])]
    pub c: Option<String>,
    /// Critical-line weights `1 - x, 1 + x, 2`.
    #[arg(long, default_value = "0/1")]
    pub x: RationalParameter,
    /// Include every configuration (edge matrices and type counts) in JSON output.
    #[arg(long)]
    pub dump: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct TodaArgs {
    #[arg(long, default_value = "0/1")]
    pub x: RationalParameter,
    #[arg(long = "n-min", default_value_t = 1)]
    pub n_min: usize,
    #[arg(long = "n-max", default_value_t = 20)]
    pub n_max: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct AsymArgs {
    #[arg(long, default_value = "0/1")]
    pub x: RationalParameter,
    #[arg(long = "n-min", default_value_t = 16)]
    pub n_min: usize,
    #[arg(long = "n-max", default_value_t = 64)]
    pub n_max: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct EqmArgs {
    #[arg(long, default_value = "0/1")]
    pub x: RationalParameter,
    /// Sample points across the support.
    #[arg(long, default_value_t = 201)]
    pub points: usize,
    /// Grid size for the variational check.
    #[arg(long, default_value_t = 400)]
    pub grid: usize,
    /// Quadrature tolerance for the normalization.
    #[arg(long, default_value = "1e-13")]
    pub tol: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct RhpArgs {
    #[arg(long, default_value = "0/1")]
    pub x: RationalParameter,
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    #[arg(long, default_value = "right")]
    pub side: Edge,
    /// Circle radius [default: 0.9 of the largest admissible radius].
    #[arg(long)]
    pub radius: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sweep {
    /// y in (0, y-max] at fixed x.
    D,
    /// y in [-y-max, 0) at fixed x.
    Af,
    /// y = 0 for x in [-x-max, x-max].
    Critical,
}

#[derive(Debug, Args, Serialize)]
pub struct PhaseArgs {
    #[arg(long, default_value = "0/1")]
    pub x: RationalParameter,
    #[arg(long, value_enum, default_value = "d")]
    pub sweep: Sweep,
    #[arg(long = "y-max", default_value_t = 0.05)]
    pub y_max: f64,
    #[arg(long, default_value_t = 20)]
    pub steps: usize,
    /// Half-width of the critical sweep.
    #[arg(long = "x-max", default_value_t = 0.9)]
    pub x_max: f64,
    /// Emit the Taylor match at y = 0 instead of a scan.
    #[arg(long)]
    pub taylor: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct FitArgs {
    #[arg(long, default_value = "0/1")]
    pub x: RationalParameter,
    #[arg(long = "n-min", default_value_t = 16)]
    pub n_min: usize,
    #[arg(long = "n-max", default_value_t = 64)]
    pub n_max: usize,
    #[arg(long, value_name = "BITS", default_value_t = 256)]
    pub prec: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct CompareArgs {
    #[arg(long, default_value = "0/1")]
    pub x: RationalParameter,
    #[arg(long = "n-min", default_value_t = 16)]
    pub n_min: usize,
    #[arg(long = "n-max", default_value_t = 64)]
    pub n_max: usize,
    #[arg(long, value_name = "BITS", default_value_t = 256)]
    pub prec: usize,
    #[command(flatten)]
    pub common: Common,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Exact(_) => "exact",
            Command::Oracle(_) => "oracle",
            Command::Toda(_) => "toda",
            Command::Asym(_) => "asym",
            Command::Eqm(_) => "eqm",
            Command::Rhp(_) => "rhp",
            Command::Phase(_) => "phase",
            Command::Fit(_) => "fit",
            Command::Compare(_) => "compare",
        }
    }

    pub fn common(&self) -> &Common {
        match self {
            Command::Exact(a) => &a.common,
            Command::Oracle(a) => &a.common,
            Command::Toda(a) => &a.common,
            Command::Asym(a) => &a.common,
            Command::Eqm(a) => &a.common,
            Command::Rhp(a) => &a.common,
            Command::Phase(a) => &a.common,
            Command::Fit(a) => &a.common,
            Command::Compare(a) => &a.common,
        }
    }
}
