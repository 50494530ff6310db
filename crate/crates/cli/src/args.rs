use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use zerolab::DEFAULT_BUDGET;

#[derive(Debug, Parser)]
#[command(name = "zerolab", version, about = "Zero counts of random polynomial systems over finite rings")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Cap on estimated evaluation operations, checked before any work starts.
    #[arg(long, global = true, env = "ZEROLAB_BUDGET", default_value_t = DEFAULT_BUDGET,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,

    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..4097))]
    pub workers: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inspect a sample space.
    #[command(subcommand)]
    Space(SpaceCommand),
    /// Zero-count distributions.
    #[command(subcommand)]
    Dist(DistCommand),
    /// Exhaustive distributions along the total-degree filtration of R[x1..xn].
    Density(DensityArgs),
    /// Distance between Bin(q^n, q^-n) and Poisson(1).
    Poisson(PoissonArgs),
}

#[derive(Debug, Subcommand)]
pub enum SpaceCommand {
    /// Report rank, extends-R, contains-functions and function coverage.
    Check(SpaceArgs),
    /// Count polynomials vanishing on every point subset up to a given size.
    Vanish(VanishArgs),
}

#[derive(Debug, Args)]
pub struct VanishArgs {
    #[command(flatten)]
    pub space: SpaceArgs,

    /// Largest point subset considered.
    #[arg(long = "max-points", default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..21))]
    pub max_points: u64,
}

#[derive(Debug, Subcommand)]
pub enum DistCommand {
    /// Enumerate every m-tuple of the space.
    Exact(SystemArgs),
    /// Sample m-tuples uniformly.
    Mc(McArgs),
    /// The binomial law Bin(q^n, 1/q^m).
    Theory(TheoryArgs),
    /// Exact or sampled distribution against the binomial law.
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
pub struct SpaceArgs {
    /// Ring, e.g. Z4, GF(9), GF(8;mod=x^3+x+1), Z2xZ3.
    #[arg(long)]
    pub ring: String,

    /// total:d=D, pervar:d=D, custom:basis=1,x,... or custom:file=PATH.
    /// The forms `custom-basis LIST` and `custom-file PATH` are also accepted.
    #[arg(long, num_args = 1..=2, value_names = ["SPEC", "VALUE"])]
    pub space: Vec<String>,

    /// Number of variables.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..64))]
    pub n: u64,
}

#[derive(Debug, Args)]
pub struct SystemArgs {
    #[command(flatten)]
    pub space: SpaceArgs,

    /// Number of polynomials per system.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..64))]
    pub m: u64,
}

#[derive(Debug, Args)]
pub struct SamplingArgs {
    /// Number of sampled systems.
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[command(flatten)]
    pub system: SystemArgs,

    #[command(flatten)]
    pub sampling: SamplingArgs,
}

#[derive(Debug, Args)]
pub struct TheoryArgs {
    /// Field order, a prime power.
    #[arg(long)]
    pub q: u64,

    #[arg(long, value_parser = clap::value_parser!(u64).range(1..64))]
    pub n: u64,

    #[arg(long, value_parser = clap::value_parser!(u64).range(1..64))]
    pub m: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exact,
    Mc,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub system: SystemArgs,

    /// How the empirical side is obtained.
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    pub method: Method,

    #[command(flatten)]
    pub sampling: SamplingArgs,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[arg(long)]
    pub ring: String,

    #[arg(long, value_parser = clap::value_parser!(u64).range(1..64))]
    pub n: u64,

    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..64))]
    pub m: u64,

    /// Largest truncation degree.
    #[arg(long = "t-max", default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
    pub t_max: u32,

    /// Stop once successive truncations are this close in total variation.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,

    /// Compute every truncation up to --t-max even after convergence.
    #[arg(long)]
    pub no_early_stop: bool,

    /// Point for the vanishing probability, as comma-separated element indices; the origin by default.
    #[arg(long, value_delimiter = ',')]
    pub point: Option<Vec<u64>>,
}

#[derive(Debug, Args)]
pub struct PoissonArgs {
    /// Field orders.
    #[arg(long, value_delimiter = ',', default_values_t = [2u64, 3, 4, 5, 7, 8, 9, 11, 13])]
    pub q: Vec<u64>,

    /// Number of variables, equal to the number of polynomials.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..64))]
    pub n: u64,
}
