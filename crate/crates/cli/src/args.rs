use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Gradient-boosted subgraph-pattern trees for graph classification
#[derive(Parser, Debug)]
#[command(name = "graphboost", version, about)]
pub struct Cli {
    /// TOML file with default hyperparameters; command-line flags win
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Worker threads (default: available parallelism)
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write the Graph-XOR benchmark dataset
    GenXor {
        #[arg(long)]
        out: PathBuf,
        /// Regroup the 18 triples at random with this seed
        #[arg(long)]
        reshuffle: Option<u64>,
    },
    /// Fit a model on a dataset and save it
    Train {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out_model: PathBuf,
        #[command(flatten)]
        fit: FitArgs,
    },
    /// Score every graph of a dataset with a saved model
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        /// TSV output (id, score, label); stdout if omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-validate a configuration or a grid
    Cv(CvArgs),
    /// Enumerate patterns with their supports
    Mine {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        max_edges: usize,
        #[arg(long, default_value_t = 1)]
        min_support: usize,
        /// Print only the N most frequent patterns
        #[arg(long)]
        top: Option<usize>,
    },
    /// Normalized pattern importance of a saved model on its training data
    Importance {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        top: Option<usize>,
    },
    /// Time and pattern counts against the maximum pattern size
    Bench(BenchArgs),
}

/// Hyperparameters. The list-valued ones take comma-separated values in
/// `cv`; other commands accept a single value.
#[derive(Args, Debug, Clone, Default)]
pub struct FitArgs {
    /// Maximum pattern size in edges (x); `inf` for unbounded
    #[arg(long, value_delimiter = ',')]
    pub max_edges: Vec<String>,
    /// Maximum tree depth (d)
    #[arg(long, value_delimiter = ',')]
    pub depth: Vec<usize>,
    /// Stepsize (η)
    #[arg(long, value_delimiter = ',')]
    pub eta: Vec<f64>,
    /// Number of trees (k, the largest evaluated in cv)
    #[arg(long)]
    pub num_trees: Option<usize>,
    #[arg(long)]
    pub min_support: Option<usize>,
    #[arg(long)]
    pub min_leaf: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub loss: Option<LossArg>,
    /// Exhaustive split search; same models, slower
    #[arg(long)]
    pub no_prune: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossArg {
    Logistic,
    Squared,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeArg {
    Proposed,
    Naive,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridArg {
    Table1,
    Table3,
}

#[derive(Args, Debug)]
pub struct CvArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub folds: Option<usize>,
    /// Preset grid; --max-edges/--depth/--eta then narrow it
    #[arg(long, value_enum)]
    pub grid: Option<GridArg>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Indicator-matrix limit for the naive mode, e.g. 512M
    #[arg(long)]
    pub memory_budget: Option<String>,
    /// Score every N-th boosting round
    #[arg(long)]
    pub snapshot_every: Option<usize>,
    /// JSON report path
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Directory for curves.tsv, by_depth.tsv and by_size.tsv
    #[arg(long)]
    pub plot_dir: Option<PathBuf>,
    #[command(flatten)]
    pub fit: FitArgs,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    pub max_edges_list: Vec<usize>,
    #[arg(long, value_enum, default_value = "proposed")]
    pub mode: ModeArg,
    #[arg(long)]
    pub folds: Option<usize>,
    #[arg(long)]
    pub memory_budget: Option<String>,
    /// TSV output; stdout if omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub fit: FitArgs,
}
