use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "planted",
    version,
    about = "Simulate and verify recovery of geometric planted matchings"
)]
pub struct Cli {
    /// Master seed for every random draw [default: 1, or the config's seed].
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the main output here instead of standard output.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

pub const DEFAULT_SEED: u64 = 1;

impl Cli {
    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an instance of the planted model.
    Gen(GenArgs),
    /// Compute the maximum-likelihood matching of an instance.
    Solve(SolveArgs),
    /// Closed-form thresholds, Riemann sums and exponents.
    Theory(TheoryArgs),
    /// Augmenting cycles and the augmenting-pair graph.
    #[command(subcommand)]
    Augmenting(AugmentingCommand),
    /// Exact combinatorial tables.
    #[command(subcommand)]
    Combinat(CombinatCommand),
    /// Brownian particle tracking by repeated matching.
    #[command(subcommand)]
    Track(TrackCommand),
    /// Run a Monte Carlo sweep from a JSON config.
    Sweep(SweepArgs),
    /// Run the analytic and combinatorial identity suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Planted {
    Random,
    Identity,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Number of points.
    #[arg(long)]
    pub n: usize,
    /// Dimension.
    #[arg(long)]
    pub d: usize,
    /// Noise variance.
    #[arg(long)]
    pub sigma2: f64,
    /// How the hidden permutation is drawn.
    #[arg(long, value_enum, default_value_t = Planted::Random)]
    pub planted: Planted,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Also write a binary dump of the matrices to this path.
    #[arg(long)]
    pub dump: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Instance file: `.json` parameters, `.csv` points, or a binary dump.
    #[arg(long, conflicts_with_all = ["n", "d", "sigma2"])]
    pub instance: Option<PathBuf>,
    /// Number of points, when generating in place.
    #[arg(long)]
    pub n: Option<usize>,
    /// Dimension, when generating in place.
    #[arg(long)]
    pub d: Option<usize>,
    /// Noise variance, when generating in place.
    #[arg(long)]
    pub sigma2: Option<f64>,
    /// How the hidden permutation is drawn, when generating in place.
    #[arg(long, value_enum, default_value_t = Planted::Random)]
    pub planted: Planted,
    /// Assignment solver.
    #[arg(long, default_value = "jv")]
    pub solver: String,
    /// Also cross-check against exhaustive search (n <= 10).
    #[arg(long)]
    pub brute_force: bool,
}

#[derive(Debug, Args)]
pub struct TheoryArgs {
    /// Number of points.
    #[arg(long)]
    pub n: u64,
    /// Dimension; may be fractional.
    #[arg(long)]
    pub d: f64,
    /// Noise variance.
    #[arg(long)]
    pub sigma2: f64,
    /// Smallest cycle length in the tables.
    #[arg(long, default_value_t = 2)]
    pub tmin: u32,
    /// Largest cycle length in the tables.
    #[arg(long, default_value_t = 50)]
    pub tmax: u32,
}

#[derive(Debug, Subcommand)]
pub enum AugmentingCommand {
    /// Augmenting-pair graph, its matching bound and the error cycles of one instance.
    Instance(AugInstanceArgs),
    /// List augmenting cycles of one small instance.
    Cycles(AugCyclesArgs),
    /// Monte Carlo probability that a pair is augmenting.
    EdgeProb(EdgeProbArgs),
    /// Frequency of augmenting paths and cycles of a given length.
    Subgraph(SubgraphArgs),
}

#[derive(Debug, Args)]
pub struct AugInstanceArgs {
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Args)]
pub struct AugCyclesArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Longest cycle to list.
    #[arg(long, default_value_t = 3)]
    pub tmax: usize,
    /// Stop after this many cycles.
    #[arg(long)]
    pub limit: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EdgeProbArgs {
    /// Dimension.
    #[arg(long)]
    pub d: usize,
    /// Noise variance.
    #[arg(long)]
    pub sigma2: f64,
    /// Monte Carlo samples.
    #[arg(long, default_value_t = 100_000)]
    pub trials: usize,
    /// Sampler name (scalar, two_point, naive).
    #[arg(long, default_value = "scalar")]
    pub sampler: String,
}

#[derive(Debug, Args)]
pub struct SubgraphArgs {
    /// Path length in vertices; 2 gives a single augmenting pair.
    #[arg(long)]
    pub t: usize,
    /// Dimension.
    #[arg(long)]
    pub d: usize,
    /// Noise variance.
    #[arg(long)]
    pub sigma2: f64,
    /// Number of instances.
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
}

#[derive(Debug, Subcommand)]
pub enum CombinatCommand {
    /// Number of k-matchings of the t-cycle.
    Matchings {
        /// Cycle length.
        #[arg(long)]
        t: usize,
    },
    /// Rooted spanning forests of the t-cycle by edge count.
    Forests {
        /// Cycle length.
        #[arg(long)]
        t: usize,
    },
    /// Law of the number of cycles in a union of two disjoint perfect matchings.
    CycleCounts(CycleCountsArgs),
    /// Moment generating function against its closed-form bound.
    MgfBound {
        /// Number of vertices (even, >= 4).
        #[arg(long)]
        ell: usize,
        /// Argument, at least `ell`.
        #[arg(long)]
        a: f64,
    },
}

#[derive(Debug, Args)]
pub struct CycleCountsArgs {
    /// Number of vertices (even).
    #[arg(long, conflicts_with = "config")]
    pub ell: Option<usize>,
    /// Sample instead of enumerating.
    #[arg(long)]
    pub sampled: bool,
    /// Samples in sampled mode.
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    /// JSON recipe with several sizes.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum TrackCommand {
    /// Simulate one tracking run and report per-step fixed points.
    Run(TrackRunArgs),
    /// Estimate the time until half the identities are lost.
    Tmax(TrackTmaxArgs),
}

#[derive(Debug, Args)]
pub struct TrackRunArgs {
    /// Number of particles.
    #[arg(long)]
    pub n: usize,
    /// Dimension.
    #[arg(long)]
    pub d: usize,
    /// Variance of each step.
    #[arg(long)]
    pub delta: f64,
    /// Number of steps.
    #[arg(long)]
    pub k: usize,
    /// Rescale each snapshot to unit empirical variance before matching.
    #[arg(long)]
    pub rescale: bool,
}

#[derive(Debug, Args)]
pub struct TrackTmaxArgs {
    /// JSON tracking recipe; replaces the flags below.
    #[arg(long, conflicts_with_all = ["n", "d", "deltas"])]
    pub config: Option<PathBuf>,
    /// Number of particles.
    #[arg(long)]
    pub n: Option<usize>,
    /// Dimension.
    #[arg(long)]
    pub d: Option<usize>,
    /// Comma-separated step variances.
    #[arg(long, value_delimiter = ',')]
    pub deltas: Vec<f64>,
    /// Trials per step variance.
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    /// Step cap per trial.
    #[arg(long, default_value_t = 10_000)]
    pub k_cap: usize,
    /// Rescale each snapshot to unit empirical variance before matching.
    #[arg(long)]
    pub rescale: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// JSON sweep config.
    #[arg(long)]
    pub config: PathBuf,
    /// Override the trials per cell.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Also write the per-cell JSON summary here.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Emit the error-rate curve instead of trial rows; needs a
    /// `log_ratio` dimension rule and explicit sigma2 values.
    #[arg(long)]
    pub curve: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run only the analytic or only the combinatorial checks.
    #[arg(long, value_enum)]
    pub only: Option<VerifyGroup>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyGroup {
    Analytic,
    Combinatorial,
}
