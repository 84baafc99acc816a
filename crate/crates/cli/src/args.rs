use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use monolab::MeasureKind;

#[derive(Debug, Parser)]
#[command(
    name = "monolab",
    version,
    about = "Entanglement measures and monogamy weights of small states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monogamy report for a three-party pure state.
    Analyze(AnalyzeArgs),
    /// CSV over a grid of Schmidt parameters or a Haar sample.
    Sweep(SweepArgs),
    /// Minimal copy count under the ratio, formula and negativity models.
    Copies(CopiesArgs),
    /// Multipartite chain bound for an N-party pure state.
    Chain(ChainArgs),
    /// Reproduction suite: one PASS/FAIL/INFO row per check.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct MeasureArgs {
    /// tangle, concurrence or negativity
    #[arg(long, default_value = "concurrence", value_parser = parse_measure)]
    pub measure: MeasureKind,
    /// Power applied to the measure.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
}

fn parse_measure(s: &str) -> Result<MeasureKind, String> {
    s.parse().map_err(|e: monolab::MonolabError| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// State shorthand (named:W3, schmidt:..., haar:2x2x2:7, power:2:named:W3),
    /// inline JSON, or @path to a file holding either.
    #[arg(long)]
    pub state: String,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub measure: MeasureArgs,
    /// Quoted E_AB and E_AC used in place of computed pair values.
    #[arg(long, num_args = 2, value_names = ["E_AB", "E_AC"])]
    pub pair_override: Option<Vec<f64>>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    Schmidt,
    Haar,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value_t = SweepKind::Schmidt)]
    pub kind: SweepKind,
    /// Lattice step 1/resolution on the squared amplitudes; 0 gives an empty grid.
    #[arg(long, default_value_t = 10)]
    pub resolution: usize,
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
    /// Keep only lambda2 >= lambda3 >= lambda4.
    #[arg(long)]
    pub canonical: bool,
    /// Keep only lambda4 = 0.
    #[arg(long)]
    pub w_slice: bool,
    /// Number of Haar states.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Local dimensions of the Haar states, e.g. 2x2x2.
    #[arg(long, default_value = "2x2x2")]
    pub dims: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub measure: MeasureArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CopiesArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Measure whose single-copy ratios feed the ratio model.
    #[command(flatten)]
    pub measure: MeasureArgs,
    #[arg(long, num_args = 2, value_names = ["E_AB", "E_AC"])]
    pub pair_override: Option<Vec<f64>>,
    /// Search limit for the ratio and formula models.
    #[arg(long, default_value_t = monolab::monogamy::DEFAULT_COPY_CAP)]
    pub m_cap: usize,
    /// Search limit for the negativity oracle (the dimension cap usually binds first).
    #[arg(long, default_value_t = monolab::monogamy::DEFAULT_COPY_CAP)]
    pub oracle_m_cap: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ChainArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub measure: MeasureArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run only rows of this group.
    #[arg(long)]
    pub filter: Option<String>,
    /// Replace a row tolerance, ROW=VALUE; repeatable.
    #[arg(long, value_name = "ROW=VALUE")]
    pub override_tol: Vec<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
    #[command(flatten)]
    pub output: OutputArgs,
}
