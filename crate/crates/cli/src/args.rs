use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "monopole-spectra", version)]
#[command(about = "Spectra of the 5D deformed Kepler system with a Yang-Coulomb monopole, cross-checked three ways")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate energy levels
    #[command(subcommand)]
    Spectrum(SpectrumKind),
    /// Run a verification pipeline and report pass/fail per check
    #[command(subcommand)]
    Verify(VerifyKind),
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum SpectrumKind {
    /// Algebraic levels of the 5D Kepler system, p = p-min..=p-max
    Kepler5d,
    /// Euler-spherical levels of the dual 8D oscillator, grouped by n + lambda
    Osc8d,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum VerifyKind {
    /// Deformed-oscillator representation against the quadratic algebra
    Algebra,
    /// Discretized separated equations against their closed forms
    Ode,
    /// Cross-picture spectrum identities through the duality map
    Duality,
    /// Closed-form wavefunctions inserted into their equations
    Residuals,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OdePicture {
    KeplerRadial,
    KeplerAngular,
    OscRadial,
    OscAngular,
    Cylindrical,
    Parabolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Grid {
    Small,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    AsPrinted,
    Consistent,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Coulomb strength
    #[arg(long, global = true, default_value_t = 1.0)]
    pub c0: f64,
    #[arg(long, global = true, default_value_t = 0.0)]
    pub c1: f64,
    #[arg(long, global = true, default_value_t = 0.0)]
    pub c2: f64,
    #[arg(long, global = true, default_value_t = 1.0)]
    pub hbar: f64,
    /// so(4) label
    #[arg(long, global = true, default_value_t = 0.0)]
    pub l4: f64,
    /// su(2) label (integer or half-integer); first oscillator label
    #[arg(long = "T", global = true, default_value_t = 0.0)]
    pub t: f64,
    /// Second oscillator label
    #[arg(long = "K", global = true, default_value_t = 0.0)]
    pub k: f64,
    /// First Kepler angular label
    #[arg(long = "J", global = true, default_value_t = 0.0)]
    pub j: f64,
    /// Second Kepler angular label
    #[arg(long = "L", global = true, default_value_t = 0.0)]
    pub l: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub p_min: u32,
    #[arg(long, global = true, default_value_t = 5)]
    pub p_max: u32,
    /// Representation index for `verify algebra` (dimension p + 1)
    #[arg(long, global = true, default_value_t = 4)]
    pub p: u32,
    #[arg(long, global = true, default_value_t = 1.0)]
    pub omega: f64,
    #[arg(long, global = true, default_value_t = 0.0)]
    pub lambda1: f64,
    #[arg(long, global = true, default_value_t = 0.0)]
    pub lambda2: f64,
    /// Number of levels
    #[arg(long, global = true, default_value_t = 5)]
    pub levels: usize,
    #[arg(long, global = true, value_enum, default_value_t = OdePicture::KeplerRadial)]
    pub picture: OdePicture,
    /// Kepler separation constant of the radial equation
    #[arg(long = "Lambda", global = true, default_value_t = 0.0)]
    pub lambda_sep: f64,
    /// Oscillator separation constant of the radial equation
    #[arg(long = "Gamma", global = true, default_value_t = 0.0)]
    pub gamma_sep: f64,
    /// Coarse mesh size (ode) or sample count (residuals); defaults per command
    #[arg(long, global = true)]
    pub mesh: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Grid::Small)]
    pub grid: Grid,
    #[arg(long, global = true, value_enum, default_value_t = ConventionArg::Consistent)]
    pub convention: ConventionArg,
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    pub format: Format,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// File of `key = value` lines; flags on the command line take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}
