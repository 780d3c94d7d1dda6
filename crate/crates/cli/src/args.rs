use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use srl_core::models::IndexRange;

#[derive(Debug, Clone, PartialEq, Parser, Serialize, Deserialize)]
#[command(
    name = "srl",
    version,
    about = "Eigenfunction restriction laboratory",
    args_override_self = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Plain `key = value` file merged under explicit flags
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Directory for two-column CSVs of every fitted curve
    #[arg(long, global = true)]
    pub emit_plot_data: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Model catalog
    #[command(subcommand)]
    Models(ModelsCommand),
    /// Dirichlet and normalized Neumann traces of one eigenfunction
    Trace(TraceArgs),
    /// Three-window decomposition of one trace
    Windows(WindowsArgs),
    /// Energy balance and, on the disc, the commutator identity
    Rellich(RellichArgs),
    /// Family sweeps with fitted exponents and verdicts
    #[command(subcommand)]
    Sweep(SweepCommand),
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelsCommand {
    /// List the model geometries
    List,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelArg {
    Disc,
    Sphere,
    Torus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SurfaceArg {
    Meridian,
    Equator,
}

/// One eigenfunction and the curve it is restricted to.
#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SpecArgs {
    #[arg(long, value_enum)]
    pub model: ModelArg,

    /// Disc angular order
    #[arg(long)]
    pub n: Option<u32>,

    /// Disc radial index or sphere degree
    #[arg(long)]
    pub k: Option<u32>,

    /// Torus frequency along x1
    #[arg(long, allow_hyphen_values = true)]
    pub m1: Option<i64>,

    /// Torus frequency along x2
    #[arg(long, allow_hyphen_values = true)]
    pub m2: Option<i64>,

    /// Disc circle radius
    #[arg(long, default_value_t = 0.5, value_parser = open_unit)]
    pub r0: f64,

    /// Sphere curve
    #[arg(long, value_enum, default_value_t = SurfaceArg::Meridian)]
    pub surface: SurfaceArg,

    /// Torus line x2 = c
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub c: f64,

    /// Grid size (default 4 * band + 16)
    #[arg(long)]
    pub grid: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct TraceArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct WindowsArgs {
    #[command(flatten)]
    pub spec: SpecArgs,

    /// Window scale exponent in [0, 1)
    #[arg(long, default_value_t = 0.6, value_parser = unit_delta)]
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct RellichArgs {
    #[command(flatten)]
    pub spec: SpecArgs,

    /// Window scale exponent for the energy split
    #[arg(long, default_value_t = 0.6, value_parser = unit_delta)]
    pub delta: f64,

    /// Collar half-width (disc only)
    #[arg(long, default_value_t = 0.2, value_parser = positive)]
    pub eps: f64,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepCommand {
    /// Normalized Neumann norms along a family, with the bounded verdict
    Neumann(NeumannArgs),
    /// Sphere equator Dirichlet norms
    Dirichlet(DirichletArgs),
    /// Exterior mass along a disc whispering family
    Exterior(ExteriorArgs),
    /// Sphere sharpness ratios, exact against quadrature
    Sharpness(SharpnessArgs),
    /// Meridian exterior mass against the curved-circle thresholds
    GeodesicContrast(ContrastArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureArg {
    Neumann,
    Dirichlet,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct NeumannArgs {
    #[arg(long, value_enum)]
    pub model: ModelArg,

    /// Trace column passed through the bounded verdict
    #[arg(long, value_enum, default_value_t = MeasureArg::Neumann)]
    pub measure: MeasureArg,

    /// Window scale exponent for the energy split
    #[arg(long, default_value_t = 0.6, value_parser = unit_delta)]
    pub delta: f64,

    /// Disc whispering circle radius
    #[arg(long, default_value_t = 0.5, value_parser = open_unit)]
    pub r0: f64,

    /// Disc whispering offset exponent
    #[arg(long, default_value_t = 2.0 / 3.0, value_parser = open_unit)]
    pub dprime: f64,

    /// Disc whispering offset constant
    #[arg(long, default_value_t = 1.0, value_parser = positive)]
    pub z: f64,

    /// Disc angular orders
    #[arg(long, default_value = "40:400", value_parser = index_range)]
    pub n: IndexRange,

    /// Sphere degrees
    #[arg(long, default_value = "5:200", value_parser = index_range)]
    pub k: IndexRange,

    /// Sphere curve
    #[arg(long, value_enum, default_value_t = SurfaceArg::Meridian)]
    pub surface: SurfaceArg,

    /// Torus family parameter t, with m = offset + t * step
    #[arg(long, default_value = "3:60", value_parser = index_range)]
    pub t: IndexRange,

    /// Torus step as `a,b`
    #[arg(long, default_value = "1,1", value_parser = int_pair, allow_hyphen_values = true)]
    pub step: (i64, i64),

    /// Torus offset as `a,b`
    #[arg(long, default_value = "0,1", value_parser = int_pair, allow_hyphen_values = true)]
    pub offset: (i64, i64),

    /// Torus line x2 = c
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct DirichletArgs {
    /// Sphere degrees
    #[arg(long, default_value = "50:400", value_parser = index_range)]
    pub k: IndexRange,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ExteriorArgs {
    #[arg(long, default_value_t = 0.5, value_parser = open_unit)]
    pub r0: f64,

    /// Family offset exponent
    #[arg(long, default_value_t = 2.0 / 3.0, value_parser = open_unit)]
    pub dprime: f64,

    /// Family offset constant
    #[arg(long, default_value_t = 1.0, value_parser = positive)]
    pub z: f64,

    /// Window scale exponent in [0, 1)
    #[arg(long, default_value_t = 0.6, value_parser = unit_delta)]
    pub delta: f64,

    /// Angular orders
    #[arg(long, default_value = "40:400", value_parser = index_range)]
    pub n: IndexRange,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SharpnessArgs {
    #[arg(long, default_value = "1:100", value_parser = index_range)]
    pub k: IndexRange,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ContrastArgs {
    #[arg(long, default_value = "1:200", value_parser = index_range)]
    pub k: IndexRange,

    /// Window scale exponents, comma separated
    #[arg(long, default_value = "0.7,0.8,0.9", value_parser = unit_delta, value_delimiter = ',')]
    pub deltas: Vec<f64>,
}

fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !v.is_finite() {
        return Err(format!("`{s}` is not finite"));
    }
    Ok(v)
}

pub fn unit_delta(s: &str) -> Result<f64, String> {
    let v = number(s)?;
    if !(0.0..1.0).contains(&v) {
        return Err(format!("{v} must lie in [0, 1)"));
    }
    Ok(v)
}

pub fn open_unit(s: &str) -> Result<f64, String> {
    let v = number(s)?;
    if !(v > 0.0 && v < 1.0) {
        return Err(format!("{v} must lie in (0, 1)"));
    }
    Ok(v)
}

pub fn positive(s: &str) -> Result<f64, String> {
    let v = number(s)?;
    if v <= 0.0 {
        return Err(format!("{v} must be positive"));
    }
    Ok(v)
}

pub fn index_range(s: &str) -> Result<IndexRange, String> {
    s.parse::<IndexRange>().map_err(|e| e.to_string())
}

pub fn int_pair(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("`{s}` is not of the form a,b"))?;
    let parse = |t: &str| t.trim().parse::<i64>().map_err(|_| format!("`{t}` is not an integer"));
    Ok((parse(a)?, parse(b)?))
}
