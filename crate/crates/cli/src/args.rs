use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tractal::products::COUNTING_CAP;
use tractal::Criterion;

use crate::{parse_criterion, parse_dims, parse_epsilons};

/// A parsed comma-separated list argument.
#[derive(Clone, Debug, PartialEq)]
pub struct List<T>(pub Vec<T>);

fn epsilon_list(s: &str) -> Result<List<f64>, String> {
    parse_epsilons(s).map(List)
}

fn dim_list(s: &str) -> Result<List<usize>, String> {
    parse_dims(s).map(List)
}

#[derive(Debug, Parser)]
#[command(name = "tractal", version, about = "Information complexity and tractability of tensor product problems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tractability verdicts and exponents for a family.
    Classify(ClassifyArgs),
    /// Information complexity n(eps, S_d) for each (eps, d).
    Complexity(ComplexityArgs),
    /// Complexity grid as CSV.
    Sweep(SweepArgs),
    /// Run a named verification suite.
    Verify(VerifyArgs),
    /// Compare fast counts and top-m lists against brute-force enumeration.
    OracleCompare(OracleArgs),
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    /// Family document (JSON).
    #[arg(long)]
    pub family: PathBuf,
    #[arg(long, default_value = "nor", value_parser = parse_criterion)]
    pub criterion: Criterion,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Comma-separated accuracies in (0, 1).
    #[arg(long, value_parser = epsilon_list)]
    pub epsilon: List<f64>,
    /// Comma-separated dimensions or ranges such as `1-10`.
    #[arg(long, value_parser = dim_list)]
    pub d: List<usize>,
    /// Count cap per query; larger counts are reported as saturated.
    #[arg(long, default_value_t = COUNTING_CAP, value_parser = clap::value_parser!(u64).range(1..))]
    pub cap: u64,
    /// Treat a saturated count as a failure (exit 4).
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct ComplexityArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// CSV destination; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    EulerNystrom,
    WienerNystrom,
    GaussianNystrom,
    KorobovNystrom,
    #[value(name = "eq21-identity")]
    TraceIdentity,
    CountingOracle,
    SpecialFunctions,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    /// Report destination; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, value_parser = dim_list)]
    pub d: List<usize>,
    /// Accuracies whose counts are compared.
    #[arg(long, value_parser = epsilon_list)]
    pub epsilon: Option<List<f64>>,
    /// Length of the top list compared against the oracle.
    #[arg(long, default_value_t = 200)]
    pub m: usize,
    /// Indices per dimension in the brute-force box; defaults to the largest
    /// value up to 30 that keeps the box within the oracle limit.
    #[arg(long)]
    pub per_dim: Option<u64>,
}
