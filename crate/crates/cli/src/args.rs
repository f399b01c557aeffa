use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "whitney", version, about = "Smooth extension diagnostics for countable compact sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Working precision of the arbitrary-precision scalars, in bits.
    #[arg(long, global = true, default_value_t = 256)]
    pub precision_bits: usize,

    /// Worker threads (0: one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,

    /// Report path; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Write (x, y) plot series as CSV to this path.
    #[arg(long, global = true)]
    pub plot_data: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every criterion on a catalog sequence or a point-set file.
    Analyze(AnalyzeArgs),
    /// Local Markov factor of a point set by linear programming.
    Markov(MarkovArgs),
    /// Decompose a function in an ideal and fit the scaling of the two parts.
    Decompose(DecomposeArgs),
    /// Extend data on a finite set and sandwich its quotient norm.
    Extend(ExtendArgs),
    /// Trajectory of the test-polynomial probe for a dominating norm.
    ProbeDn(ProbeArgs),
    /// Classify the whole sequence catalog.
    Catalog(CatalogArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    PowerLog,
    ExpPower,
    InvLog,
    ExpFactorial,
    ExpGeometric,
    AlmostAccumulation,
    Custom,
}

#[derive(Clone, Debug, Args)]
pub struct SequenceArgs {
    #[arg(long, value_enum)]
    pub family: Option<FamilyName>,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Truncation length (family default when absent).
    #[arg(long)]
    pub length: Option<usize>,
    /// For `--family custom`: file with one `log a_l` per line.
    #[arg(long)]
    pub log_values: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct GridArgs {
    /// Smallest exponent i of the grid eps = 2^-i.
    #[arg(long)]
    pub eps_min_exp: Option<u32>,
    /// Largest exponent i of the grid eps = 2^-i.
    #[arg(long)]
    pub eps_max_exp: Option<u32>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub sequence: SequenceArgs,
    /// Point-set file instead of a sequence family.
    #[arg(long, conflicts_with = "family")]
    pub points: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub r: u32,
    #[arg(long, default_value_t = 2.0)]
    pub gamma: f64,
    /// Largest tuple size parameter k of the sufficient check.
    #[arg(long, default_value_t = 4)]
    pub k_max: usize,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Args)]
pub struct MarkovArgs {
    #[arg(long)]
    pub points: PathBuf,
    /// Polynomial degree k.
    #[arg(long)]
    pub degree: usize,
    /// Derivative order j.
    #[arg(long, default_value_t = 1)]
    pub deriv: usize,
    /// Evaluation point y.
    #[arg(long, allow_hyphen_values = true)]
    pub at: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FunctionName {
    /// exp(-1/x^2) sin(pi/x) for x > 0, zero otherwise.
    ReciprocalZeros,
    /// x times the partition bump.
    Bump,
    Sine,
    Zero,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    /// Zero set of the ideal; {0} u {1/j : j <= 30} when absent.
    #[arg(long)]
    pub zeros: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FunctionName::ReciprocalZeros)]
    pub function: FunctionName,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Orders k of the growth norms.
    #[arg(long, value_delimiter = ',', default_values_t = vec![3usize, 5])]
    pub k: Vec<usize>,
    #[arg(long, default_value_t = 64)]
    pub points_per_patch: usize,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Args)]
pub struct ExtendArgs {
    #[arg(long)]
    pub points: PathBuf,
    /// One value per node.
    #[arg(long)]
    pub values: PathBuf,
    /// Patches with at most n + 1 nodes are interpolated.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Norm order (defaults to n).
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    /// eps = 2^-e.
    #[arg(long, default_value_t = 8)]
    pub eps_exp: u32,
    #[arg(long, default_value_t = 64)]
    pub points_per_patch: usize,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub sequence: SequenceArgs,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub s: usize,
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 1)]
    pub d_min: usize,
    /// Last d (as far as the truncation allows when absent).
    #[arg(long)]
    pub d_max: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    /// Truncation length for every family (family defaults when absent).
    #[arg(long)]
    pub length: Option<usize>,
    #[arg(long, default_value_t = 4)]
    pub k_max: usize,
    #[command(flatten)]
    pub grid: GridArgs,
}
