use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "nlsphere", version, about = "Nonlocal diffusion on the unit sphere")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues λ(0..=n) of the nonlocal (or local) operator, written to spectrum.csv.
    Spectrum(SpectrumArgs),
    /// Nonlocal Poisson equation with the mean condition.
    Poisson(PoissonArgs),
    /// ETDRK4 time evolution of Allen–Cahn or Brusselator.
    Evolve(EvolveArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Rec,
    Asy,
    Hybrid,
}

#[derive(Debug, Clone, Args)]
pub struct KernelArgs {
    /// Singularity exponent α in (−1, 1).
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Horizon δ in (0, 2].
    #[arg(long)]
    pub delta: Option<f64>,
    /// Use the local Laplace–Beltrami operator instead of the nonlocal one.
    #[arg(long)]
    pub local: bool,
    /// Legendre evaluation inside the eigenvalue integral.
    #[arg(long, value_enum, default_value_t = Method::Hybrid)]
    pub method: Method,
    /// Highest degree evaluated by recurrence under `--method hybrid`.
    #[arg(long, default_value_t = 50)]
    pub switch_degree: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// Band limit n.
    #[arg(long, default_value_t = 100)]
    pub degree: usize,
    #[arg(long, default_value = ".")]
    pub output_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct PoissonArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[arg(long, default_value_t = 100)]
    pub degree: usize,
    /// `death-star` or a coefficient file (`# sht-coeffs v1` CSV).
    #[arg(long, default_value = "death-star")]
    pub rhs: String,
    #[arg(long, default_value = ".")]
    pub output_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    AllenCahn,
    Brusselator,
}

#[derive(Debug, Clone, Args)]
pub struct EvolveArgs {
    #[arg(long, value_enum)]
    pub model: Model,
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// Diffusion scale ε (default 0.1 for Allen–Cahn, 0.075 for Brusselator).
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Brusselator feed E.
    #[arg(long = "E", alias = "e", default_value_t = 4.0)]
    pub e: f64,
    /// Brusselator time scale τ.
    #[arg(long, default_value_t = 7.8125)]
    pub tau: f64,
    /// Brusselator coupling f in (0, 1).
    #[arg(long, default_value_t = 0.8)]
    pub f: f64,
    /// Move the Brusselator −u term into the linear part.
    #[arg(long)]
    pub linear_decay: bool,
    #[arg(long, default_value_t = 63)]
    pub degree: usize,
    /// Time step h.
    #[arg(long, default_value_t = 0.1)]
    pub dt: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t_final: f64,
    /// `cos10xy`, `random:<cap>:<scale>` or `equilibrium`.
    #[arg(long)]
    pub ic: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Cesàro order κ applied to snapshots (0 = off).
    #[arg(long, default_value_t = 0)]
    pub cesaro_kappa: usize,
    /// Write a snapshot every this many steps (0 = none).
    #[arg(long, default_value_t = 0)]
    pub snapshot_stride: usize,
    #[arg(long, default_value = ".")]
    pub output_dir: PathBuf,
}
