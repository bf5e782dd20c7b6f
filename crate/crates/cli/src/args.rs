use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{Format, GenSpec};
use hbisect_core::{BalanceMode, MuMode};

#[derive(Debug, Parser)]
#[command(name = "hbisect", version, about = "Hypergraph bisection, discrepancy and spectral certificates")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "HBISECT_THREADS")]
    pub threads: Option<usize>,
    /// Omit wall-clock fields so output is reproducible byte for byte.
    #[arg(long, global = true)]
    pub no_timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random hypergraph in the canonical text format.
    Gen(GenArgs),
    /// Hyperplane-rounding bisection.
    Bisect(BisectArgs),
    /// Positive discrepancy (exact or heuristic).
    Disc(DiscArgs),
    /// Half-space probability of a vector tuple.
    Mu(MuArgs),
    /// Spectral certificates.
    Spectral(SpectralArgs),
    /// Exhaustive oracles for small instances.
    Oracle(OracleArgs),
    /// Identity suites on a random instance.
    Check(CheckArgs),
    /// Parameter sweep of bisection quality.
    Bench(BenchArgs),
}

/// Where the hypergraph comes from.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Hypergraph file in the canonical text format.
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    /// Generator spec such as `regular:n=300,r=3,d=16,seed=7`.
    #[arg(long = "gen", value_name = "SPEC")]
    pub generator: Option<GenSpec>,
}

#[derive(Debug, Args)]
#[group(id = "model", required = true, multiple = false)]
pub struct Model {
    #[arg(long)]
    pub regular: bool,
    #[arg(long)]
    pub binomial: bool,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub model: Model,
    #[arg(short)]
    pub n: usize,
    #[arg(short)]
    pub r: usize,
    /// Degree (regular model).
    #[arg(short)]
    pub d: Option<usize>,
    /// Edge probability (binomial model).
    #[arg(short)]
    pub p: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output path; the text goes to stdout when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BisectArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "greedy")]
    pub mode: BalanceMode,
    /// Accept inputs with mixed edge sizes.
    #[arg(long)]
    pub mixed: bool,
}

#[derive(Debug, Args)]
pub struct DiscArgs {
    #[command(flatten)]
    pub source: Source,
    /// Enumerate every subset.
    #[arg(long, conflicts_with = "reduction")]
    pub exhaustive: bool,
    /// Split off high-degree vertices first.
    #[arg(long)]
    pub reduction: bool,
    /// Degree threshold factor for `--reduction`.
    #[arg(long, default_value_t = hbisect_core::disc::DEFAULT_REDUCTION_C)]
    pub c: f64,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
#[group(id = "tuple", required = true, multiple = false)]
pub struct TupleSource {
    /// Whitespace-separated Gram matrix with unit diagonal.
    #[arg(long)]
    pub gram: Option<PathBuf>,
    /// Angle in radians between two unit vectors.
    #[arg(long)]
    pub angle: Option<f64>,
}

#[derive(Debug, Args)]
pub struct MuArgs {
    #[command(flatten)]
    pub tuple: TupleSource,
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Lambda2,
    Mu,
}

#[derive(Debug, Args)]
pub struct SpectralArgs {
    #[command(flatten)]
    pub source: Source,
    /// Norm exponent (default: r).
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, value_enum, default_value_t = Kind::Lambda2)]
    pub kind: Kind,
    /// Candidate family for `--kind mu`.
    #[arg(long, default_value = "diag")]
    pub mode: MuMode,
    #[arg(long, default_value_t = 0)]
    pub ascent_steps: usize,
    /// Random half-sets tried as candidates, and random ascent starts.
    #[arg(long, default_value_t = 16)]
    pub starts: usize,
    /// Try every non-empty subset as a candidate.
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    /// Exact bisection width.
    Bw,
    /// Exact discrepancy.
    Disc,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(value_enum)]
    pub which: OracleKind,
    #[command(flatten)]
    pub source: Source,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    Split,
    Shadow,
    Poly,
    Beta,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Split, Suite::Shadow, Suite::Poly, Suite::Beta];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Split => "split",
            Suite::Shadow => "shadow",
            Suite::Poly => "poly",
            Suite::Beta => "beta",
        }
    }
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Run every suite.
    #[arg(long, conflicts_with = "suite")]
    pub all: bool,
    #[arg(long, value_enum, value_delimiter = ',')]
    pub suite: Vec<Suite>,
    #[arg(short, default_value_t = 12)]
    pub n: usize,
    #[arg(short, default_value_t = 3)]
    pub r: usize,
    #[arg(short, default_value_t = 0.3)]
    pub p: f64,
    /// Random subsets per suite.
    #[arg(long, default_value_t = 8)]
    pub cases: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Comma-separated list; the empty string is an empty list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid(pub Vec<usize>);

impl std::str::FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| t.parse().map_err(|_| format!("bad grid value {t:?}")))
            .collect::<Result<_, _>>()
            .map(Grid)
    }
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(short, default_value = "300")]
    pub n: Grid,
    #[arg(short, default_value = "3")]
    pub r: Grid,
    #[arg(short, default_value = "4,16")]
    pub d: Grid,
    /// Instances per cell; seeds run from `--seed` upward.
    #[arg(long, default_value_t = 5)]
    pub seeds: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value = "greedy")]
    pub mode: BalanceMode,
    /// Also estimate disc⁺ with this many rounding trials (0 skips).
    #[arg(long, default_value_t = 0)]
    pub disc_trials: usize,
    /// Also compute a λ₂ certificate with p = r.
    #[arg(long)]
    pub spectral: bool,
}
