use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "msyds", version, about = "Learning thresholds of multilayer synchronous dynamical systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a Multi-Gnp network as an edge list
    Gen(GenArgs),
    /// Print a trajectory of a threshold system
    Simulate(SimulateArgs),
    /// Learn thresholds once and write the learned threshold file
    Learn(LearnArgs),
    /// Mean loss over a grid of p, training size and unknown sets
    Sweep(SweepArgs),
    /// Check the PAC guarantee at its sample size
    ValidatePac(ValidateArgs),
    /// Check the PMAC guarantee at its sample size
    ValidatePmac(ValidateArgs),
    /// Natarajan-dimension bounds and certificates
    Ndim(NdimArgs),
    /// Print the sample-size bounds
    Bounds(BoundsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Master {
    Or,
    And,
}

impl From<Master> for msyds::MasterKind {
    fn from(m: Master) -> Self {
        match m {
            Master::Or => msyds::MasterKind::Or,
            Master::And => msyds::MasterKind::And,
        }
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    /// Edge probability
    #[arg(long, conflicts_with = "avg_deg")]
    pub p: Option<f64>,
    /// Expected mean degree per layer
    #[arg(long)]
    pub avg_deg: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file (stdout if omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file with defaults for any of these flags
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Where the network comes from: a file, or a Multi-Gnp sample.
#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Edge-list file
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Vertices of a generated network (when --graph is absent)
    #[arg(long)]
    pub n: Option<usize>,
    /// Layers of a generated network
    #[arg(long)]
    pub k: Option<usize>,
    /// Edge probability of a generated network
    #[arg(long, conflicts_with = "avg_deg")]
    pub edge_prob: Option<f64>,
    /// Expected per-layer mean degree of a generated network
    #[arg(long)]
    pub avg_deg: Option<f64>,
    /// Seed for the generated network (defaults to --seed)
    #[arg(long)]
    pub graph_seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SystemArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Threshold file (`layer v tau` lines); random per trial if omitted
    #[arg(long)]
    pub thresholds: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Master::Or)]
    pub master: Master,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Initial configuration as a bit string; random if omitted
    #[arg(long)]
    pub init: Option<String>,
    /// Probability that a vertex of a random initial configuration is 0
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LearnArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// all | FILE | random:SIGMA
    #[arg(long, default_value = "all")]
    pub unknown: String,
    /// Training file of `C C'` lines; generated from the target if omitted
    #[arg(long)]
    pub training: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[arg(long, default_value_t = 100)]
    pub train_size: usize,
    #[arg(long, default_value_t = msyds::learner::DEFAULT_EVAL_SAMPLES)]
    pub eval_samples: usize,
    /// Learned threshold file (stdout if omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// all | FILE | random:SIGMA (repeatable)
    #[arg(long)]
    pub unknown: Vec<String>,
    /// Probability that a vertex is 0 (repeatable)
    #[arg(long)]
    pub p: Vec<f64>,
    /// Training set size (repeatable)
    #[arg(long)]
    pub train_size: Vec<usize>,
    #[arg(long, default_value_t = msyds::learner::DEFAULT_EVAL_SAMPLES)]
    pub eval_samples: usize,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    /// Worker threads (0 = all cores)
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// CSV output file (stdout if omitted)
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long, default_value = "all")]
    pub unknown: String,
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub delta: f64,
    /// Tolerated fraction of mispredicted unknown vertices (validate-pmac only)
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[arg(long, default_value_t = msyds::learner::DEFAULT_EVAL_SAMPLES)]
    pub eval_samples: usize,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Per-trial CSV output file
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Dfs,
    Pnn,
    Oracle,
}

#[derive(Debug, Args)]
pub struct NdimArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, value_enum)]
    pub method: Method,
    #[arg(long, default_value = "all")]
    pub unknown: String,
    /// Known thresholds (oracle only; needed unless every vertex is unknown)
    #[arg(long)]
    pub thresholds: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Master::Or)]
    pub master: Master,
    /// Layer searched by dfs on a multilayer network
    #[arg(long)]
    pub layer: Option<usize>,
    /// Candidate file for the oracle; the pnn construction is used if omitted
    #[arg(long)]
    pub candidate: Option<PathBuf>,
    #[arg(long, default_value_t = 12)]
    pub max_entries: usize,
    #[arg(long, default_value_t = 16)]
    pub max_vertices: usize,
    /// Where to write the certificate (Q-set or candidate file)
    #[arg(long)]
    pub cert: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub delta: f64,
    #[arg(long)]
    pub sigma: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Average degree of the unknown vertices in the merged graph
    #[arg(long)]
    pub davg: Option<f64>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}
