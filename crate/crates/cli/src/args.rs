use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rootcount::delian::DEFAULT_THETA_DEG;
use rootcount::rewrite::DEFAULT_WORD_CAP;

/// Real roots of integer polynomials by symbol rewriting and integer
/// recurrences.
#[derive(Debug, Parser)]
#[command(name = "rootcount", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one engine until it converges and print the convergence table.
    Root(RootArgs),
    /// Search integer shifts for every reachable real root.
    Roots(RootsArgs),
    /// Print the rewritten words, one per line.
    Trace(TraceArgs),
    /// Print a fixed number of rows of the recurrence table.
    Table(TableArgs),
    /// Cube doubling: colored-segment construction of 2^(1/3) as SVG.
    Delian(DelianArgs),
    /// Cross-check the engines against a floating-point root solver.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Recurrence,
    Rewrite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Explicit,
    Counts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DelianFormat {
    Table,
    Json,
    Svg,
}

#[derive(Debug, Clone, Args)]
pub struct PolyArg {
    /// Polynomial such as "2x^2+2x-1" or a coefficient list "2,2,-1"
    /// (highest degree first).
    #[arg(allow_hyphen_values = true)]
    pub polynomial: String,
}

#[derive(Debug, Clone, Args)]
pub struct ShiftArgs {
    /// Use alpha*I + beta*R instead of R.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<i64>,
}

impl ShiftArgs {
    pub fn get(&self) -> Option<(i64, i64)> {
        match (self.alpha, self.beta) {
            (None, None) => None,
            (a, b) => Some((a.unwrap_or(0), b.unwrap_or(1))),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct TolArg {
    /// Convergence tolerance, relative to max(1, |estimate|).
    #[arg(long, env = "ROOTCOUNT_TOL", default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct RootArgs {
    #[command(flatten)]
    pub poly: PolyArg,
    #[arg(long, value_enum, default_value_t = EngineArg::Recurrence)]
    pub engine: EngineArg,
    /// Rewrite engine only: keep explicit words or iterate counts.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Maximum number of table rows (j = 0 .. N-1).
    #[arg(long, alias = "budget", default_value_t = 10_000)]
    pub iters: usize,
    #[command(flatten)]
    pub tol: TolArg,
    #[command(flatten)]
    pub shift: ShiftArgs,
    /// Starting vector for the recurrence engine, e.g. "1,0".
    #[arg(long, allow_hyphen_values = true, conflicts_with = "start")]
    pub seed: Option<String>,
    /// Starting word for the rewrite engine; defaults to the first letter.
    #[arg(long, conflicts_with = "seed")]
    pub start: Option<String>,
    /// Longest word kept in explicit mode before switching to counts.
    #[arg(long, default_value_t = DEFAULT_WORD_CAP)]
    pub word_cap: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Compare the result with the floating-point root solver.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Debug, Args)]
pub struct RootsArgs {
    #[command(flatten)]
    pub poly: PolyArg,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(i64).range(0..))]
    pub alpha_max: i64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(i64).range(1..))]
    pub beta_max: i64,
    /// Row budget per shift candidate.
    #[arg(long, default_value_t = rootcount::shift::CANDIDATE_BUDGET)]
    pub budget: usize,
    #[command(flatten)]
    pub tol: TolArg,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Attach oracle dominance certificates to every accepted candidate.
    #[arg(long)]
    pub certify: bool,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[command(flatten)]
    pub poly: PolyArg,
    #[arg(long, default_value_t = 3)]
    pub steps: usize,
    /// Starting word; defaults to the first letter.
    #[arg(long)]
    pub start: Option<String>,
    #[command(flatten)]
    pub shift: ShiftArgs,
    /// Append the count vector to each line, tab separated.
    #[arg(long)]
    pub counts: bool,
    #[arg(long, default_value_t = DEFAULT_WORD_CAP)]
    pub word_cap: usize,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub poly: PolyArg,
    #[arg(long, default_value_t = 10)]
    pub rows: usize,
    #[command(flatten)]
    pub shift: ShiftArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub seed: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct DelianArgs {
    #[arg(long, default_value_t = 10)]
    pub iterations: usize,
    /// Direction of CD in degrees; snapped to a nearby rational point on the
    /// unit circle.
    #[arg(long, default_value_t = DEFAULT_THETA_DEG)]
    pub theta: f64,
    /// Length of one unit segment in pixels.
    #[arg(long, default_value_t = 20)]
    pub unit_px: u32,
    /// Write the SVG here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_WORD_CAP)]
    pub word_cap: usize,
    #[arg(long, value_enum, default_value_t = DelianFormat::Table)]
    pub format: DelianFormat,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub poly: PolyArg,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(i64).range(0..))]
    pub alpha_max: i64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(i64).range(1..))]
    pub beta_max: i64,
    #[command(flatten)]
    pub tol: TolArg,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}
