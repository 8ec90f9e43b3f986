use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(name = "degseq", version, about = "Degree sequences: exact counts, recursions, formulas and random models")]
pub struct Cli {
    /// Worker threads for data-parallel loops (default: all cores).
    #[arg(long, global = true, env = "DEGSEQ_THREADS")]
    pub threads: Option<usize>,

    /// Run every loop on the calling thread.
    #[arg(long, global = true)]
    pub sequential: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Seed for the random models.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Largest n the exact counter accepts.
    #[arg(long, global = true, default_value_t = degseq_core::exact::DEFAULT_CAP)]
    pub cap: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Command {
    /// Number of labelled graphs with a degree sequence.
    Count(SeqConstraintArgs),
    /// Probability that an edge is present.
    Prob(PairArgs),
    /// Probability that both edges of a 2-path a-v-b are present.
    Pathprob(PathArgs),
    /// Count ratio N(d - e_a) / N(d - e_b).
    Ratio(PairArgs),
    /// Whether a sequence is graphical.
    Graphical(GraphicalArgs),
    /// Evaluate an asymptotic formula.
    Asym(AsymArgs),
    /// Iterate the composed operator and measure contraction.
    Fixpoint(FixpointArgs),
    /// Draw degree sequences from a random model.
    Sample(SampleArgs),
    /// Compare two random models on a statistic.
    Compare(CompareArgs),
    /// Tail frequency of the variance statistic.
    Concentration(ConcentrationArgs),
    /// Exact degree-class probabilities of G(n,m) next to the formula.
    Table(TableArgs),
    /// Run a recipe of subcommands into an output directory.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct SeqArgs {
    /// Comma-separated degrees, e.g. 3,3,2,2.
    #[arg(long, conflicts_with = "seq_file", required_unless_present = "seq_file")]
    pub seq: Option<String>,
    /// File with one degree per line.
    #[arg(long)]
    pub seq_file: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SeqConstraintArgs {
    #[command(flatten)]
    pub seq: SeqArgs,
    /// Forbidden pair `a-b` (1-based); repeatable.
    #[arg(long)]
    pub forbid: Vec<String>,
    /// Forced pair `a-b` (1-based); repeatable.
    #[arg(long)]
    pub force: Vec<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct PairArgs {
    #[command(flatten)]
    pub base: SeqConstraintArgs,
    /// Vertices `a,b` (1-based).
    #[arg(long)]
    pub pair: String,
}

#[derive(Debug, Args, Serialize)]
pub struct PathArgs {
    #[command(flatten)]
    pub base: SeqConstraintArgs,
    /// Vertices `a,v,b` (1-based); v is the middle vertex.
    #[arg(long)]
    pub path: String,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphicalKind {
    Eg,
    Koren,
}

#[derive(Debug, Args, Serialize)]
pub struct GraphicalArgs {
    #[command(flatten)]
    pub seq: SeqArgs,
    #[arg(long, value_enum, default_value_t = GraphicalKind::Eg)]
    pub mode: GraphicalKind,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Formula {
    Binom,
    H,
    Conj,
    Regular,
    Pgr,
    Rgr,
    Pi,
    Rho,
    Edge,
    Sparse,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Section7,
    Appendix,
}

#[derive(Debug, Args, Serialize)]
pub struct AsymArgs {
    #[arg(long, value_enum)]
    pub formula: Formula,
    #[arg(long)]
    pub seq: Option<String>,
    #[arg(long)]
    pub seq_file: Option<PathBuf>,
    /// Vertices `a,b` (1-based) for the pair formulas.
    #[arg(long)]
    pub pair: Option<String>,
    /// Size, for `--formula regular`.
    #[arg(long)]
    pub n: Option<u64>,
    /// Degree, for `--formula regular`.
    #[arg(long)]
    pub d: Option<u64>,
    #[arg(long, value_enum, default_value_t = Variant::Section7)]
    pub variant: Variant,
    /// Truncation depth for the error envelope.
    #[arg(long)]
    pub k0: Option<u32>,
    /// Spread for the error envelope (default: the sequence's own).
    #[arg(long)]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Init {
    Pgr,
    Pi,
    Exact,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Pairs {
    All,
    Classes,
}

#[derive(Debug, Args, Serialize)]
pub struct FixpointArgs {
    #[arg(long)]
    pub root: String,
    #[arg(long, default_value_t = 2)]
    pub k0: u32,
    #[arg(long, default_value_t = 1)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = Init::Pgr)]
    pub init: Init,
    #[arg(long, value_enum, default_value_t = Variant::Section7)]
    pub variant: Variant,
    /// Companion start `scale · p0`; 1 disables the companion.
    #[arg(long, default_value_t = 1.01)]
    pub scale: f64,
    /// Extra radius beyond what the steps consume.
    #[arg(long, default_value_t = 0)]
    pub margin: u64,
    #[arg(long, value_enum, default_value_t = Pairs::Classes)]
    pub pairs: Pairs,
    /// Also require d_i >= s on the s-th domain.
    #[arg(long)]
    pub literal: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Model {
    Gnm,
    Gnp,
    Bp,
    Bm,
    Ep,
    EpPrime,
    Bhatp,
}

#[derive(Debug, Args, Serialize)]
pub struct ModelArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long)]
    pub p: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct SampleArgs {
    #[arg(long, value_enum)]
    pub model: Model,
    #[command(flatten)]
    pub params: ModelArgs,
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
    /// JSON-lines output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct CompareArgs {
    #[arg(long, value_enum)]
    pub model_a: Model,
    #[arg(long, value_enum)]
    pub model_b: Model,
    #[command(flatten)]
    pub params: ModelArgs,
    /// sorted | first | max | median | nk:K
    #[arg(long, default_value = "median")]
    pub statistic: String,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 200)]
    pub bootstrap: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct ConcentrationArgs {
    #[arg(long, value_enum)]
    pub model: Model,
    #[command(flatten)]
    pub params: ModelArgs,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct TableArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct ExperimentArgs {
    #[arg(long)]
    pub recipe: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}
