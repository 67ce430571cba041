//! Command-line model. Every flag can also be set through a `MINE_`-prefixed
//! environment variable; an explicit flag wins over the environment.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "mine", version, about = "Variable-length motif and discord discovery")]
pub struct Cli {
    /// Worker threads for the engine (default: all cores). Results do not depend on it.
    #[arg(long, global = true, env = "MINE_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Variable-length matrix profile and top motif pair over a length range.
    Motifs(MotifArgs),
    /// Ranked disjoint motif sets grown from the best motif pairs.
    MotifSets(MotifSetArgs),
    /// Top-k m-th discords of every length and their merge across lengths.
    Discords(DiscordArgs),
    /// Matrix profile of a single length.
    Mp(MpArgs),
    /// Brute-force reference results in the same document format.
    Oracle {
        #[command(subcommand)]
        job: OracleJob,
    },
    /// Times the range search against recomputing every length from scratch.
    Bench(BenchArgs),
}

#[derive(Debug, Subcommand)]
pub enum OracleJob {
    Motifs(OracleMotifArgs),
    Discords(OracleDiscordArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct IoArgs {
    /// Input file: one value per line, or a CSV file when `--column` is given.
    #[arg(long, env = "MINE_INPUT")]
    pub input: PathBuf,
    /// CSV column to read, by header name or 0-based index.
    #[arg(long, env = "MINE_COLUMN")]
    pub column: Option<String>,
    /// Output file (default: standard output).
    #[arg(long, env = "MINE_OUTPUT")]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json, env = "MINE_FORMAT")]
    pub format: Format,
    /// Include per-length pruning statistics.
    #[arg(long, env = "MINE_TRACE")]
    pub trace: bool,
    /// Leave wall times out of the document.
    #[arg(long, env = "MINE_NO_TIMING")]
    pub no_timing: bool,
}

#[derive(Debug, Args)]
pub struct RangeArgs {
    #[arg(long, env = "MINE_LMIN")]
    pub lmin: usize,
    #[arg(long, env = "MINE_LMAX")]
    pub lmax: usize,
    /// Partial-profile entries kept per window.
    #[arg(long, default_value_t = 50, env = "MINE_P")]
    pub p: usize,
}

#[derive(Debug, Args)]
pub struct MotifArgs {
    #[command(flatten)]
    pub io: IoArgs,
    #[command(flatten)]
    pub range: RangeArgs,
    /// Also report the motif pair of every length.
    #[arg(long, env = "MINE_PER_LENGTH")]
    pub per_length: bool,
}

#[derive(Debug, Args)]
pub struct MotifSetArgs {
    #[command(flatten)]
    pub io: IoArgs,
    #[command(flatten)]
    pub range: RangeArgs,
    /// Motif pairs ranked before growing sets.
    #[arg(long, default_value_t = 40, env = "MINE_TOP_K")]
    pub top_k: usize,
    /// Set radius as a multiple of the pair distance.
    #[arg(long, default_value_t = 4.0, env = "MINE_RADIUS_FACTOR")]
    pub radius_factor: f64,
    /// Drop sets with fewer members.
    #[arg(long, default_value_t = 2, env = "MINE_MIN_FREQUENCY")]
    pub min_frequency: usize,
}

#[derive(Debug, Args)]
pub struct DiscordArgs {
    #[command(flatten)]
    pub io: IoArgs,
    #[command(flatten)]
    pub range: RangeArgs,
    #[arg(long, default_value_t = 1, env = "MINE_K")]
    pub k: usize,
    #[arg(long, default_value_t = 1, env = "MINE_M")]
    pub m: usize,
    /// Also report the matrix of every length.
    #[arg(long, env = "MINE_PER_LENGTH")]
    pub per_length: bool,
}

#[derive(Debug, Args)]
pub struct MpArgs {
    #[command(flatten)]
    pub io: IoArgs,
    #[arg(long, env = "MINE_LENGTH")]
    pub length: usize,
}

#[derive(Debug, Args)]
pub struct OracleMotifArgs {
    #[command(flatten)]
    pub io: IoArgs,
    #[arg(long, env = "MINE_LMIN")]
    pub lmin: usize,
    #[arg(long, env = "MINE_LMAX")]
    pub lmax: usize,
    #[arg(long, env = "MINE_PER_LENGTH")]
    pub per_length: bool,
}

#[derive(Debug, Args)]
pub struct OracleDiscordArgs {
    #[command(flatten)]
    pub io: IoArgs,
    #[arg(long, env = "MINE_LMIN")]
    pub lmin: usize,
    #[arg(long, env = "MINE_LMAX")]
    pub lmax: usize,
    #[arg(long, default_value_t = 1, env = "MINE_K")]
    pub k: usize,
    #[arg(long, default_value_t = 1, env = "MINE_M")]
    pub m: usize,
    #[arg(long, env = "MINE_PER_LENGTH")]
    pub per_length: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub io: IoArgs,
    #[command(flatten)]
    pub range: RangeArgs,
    /// Lengths timed for the baseline, evenly spread over the range; the mean
    /// is scaled to the whole range. 0 times every length.
    #[arg(long, default_value_t = 0, env = "MINE_BASELINE_LENGTHS")]
    pub baseline_lengths: usize,
}
