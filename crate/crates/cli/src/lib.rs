//! Command-line front end: argument parsing, verb dispatch and file output.
//!
//! Every verb is a pure function of its flags and `--seed`. Samples are
//! computed in parallel but written in index order, so output bytes do not
//! depend on `--threads`.

pub mod checks;
mod commands;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] grothperm::Error),
    #[error("{0}")]
    Usage(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    /// 1 for failed checks and I/O, 2 for bad input.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 1,
            CliError::Lib(_) | CliError::Usage(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "grothperm", version, about = "Grothendieck random permutations: samplers, limit shapes and exact values")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Run seed. Sample i always draws from the stream (seed, i).
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads; output does not depend on it.
    #[arg(long, global = true, env = "GROTHPERM_THREADS")]
    pub threads: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample permutations.
    #[command(after_help = "CSV: sample,inversions,w\n  w is the one-line notation w(1) .. w(n), space separated.\n\
        With --trace, <PREFIX>.dream holds the pipe dream of sample 0 and <PREFIX>.colors.csv\n\
        has columns i,j,bottom,left,top,right (colors entering and leaving box (i, j)).")]
    Sample(SampleArgs),
    /// Averaged point density of sampled permutations.
    #[command(after_help = "PGM: P2, maxval 255, gray = round(255 * cell / largest cell); image row 0 holds the largest values.\n\
        CSV: row,col,count,mass\n  row bins values (0 = smallest), col bins positions, mass = count / (samples * n).")]
    Heatmap(HeatmapArgs),
    /// Limit height surface h°(x, y) on a grid.
    #[command(after_help = "CSV: x,y,h")]
    LimitShape(LimitShapeArgs),
    /// TASEP with an exit wall from step initial data.
    #[command(after_help = "CSV (trajectory): t,xi_1,..,xi_k  for the run drawn from stream (seed, 0).\n\
        CSV (exits): sample,i,t_exit")]
    Tasep(TasepArgs),
    /// Standardized height fluctuations against Tracy-Widom GUE.
    #[command(after_help = "CSV: sample,standardized\n  (H - n h°) / (v n^(1/3)) at (floor(n x), floor(n y)); a summary goes to stderr.")]
    Fluct(FluctArgs),
    /// Inversion scaling of the non-reduced model.
    #[command(after_help = "CSV: n,p,samples,inv_ratio,inv_se,dis_ratio,dis_se,diagonal_fraction,kappa\n  \
        ratios are divided by n^(3/2); kappa is the predicted inv_ratio.\n\
        CSV (--law I): j,probability  for the exit column of pipe I.")]
    Nonreduced(NonreducedArgs),
    /// Exact principal specializations.
    #[command(after_help = "Prints one exact rational value, or with --table N the CSV w,upsilon.")]
    Exact(ExactArgs),
    /// Best layered permutation by size.
    #[command(after_help = "CSV: n,composition,f\n  composition parts are dash separated, f = log2(upsilon) / n^2 to 5 decimals.\n\
        With --bounds, JSON [{beta, lower, upper}] for the bounds on the growth constant.")]
    OptimizeLayered(OptimizeArgs),
    /// Bumpless pipe dreams and 2-enumerated ASMs.
    #[command(after_help = "CSV (--n N): w,bpd_count,two_asm_probability,pipe_dream_probability\n\
        CSV (--clt): sample,z  with z = (w(n) - n/2) / sqrt(n/4); a summary goes to stderr.\n\
        Tiles: r = SE bump, J = NW bump, + cross, . empty, - horizontal, | vertical.")]
    Bpd(BpdArgs),
    /// Run the oracle suite and report PASS/FAIL per check.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Sampler {
    PipeDream,
    Vertex,
    Nonreduced,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    /// Re-crossing probability for the randomized reduction.
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub samples: u64,
    #[arg(long, value_enum, default_value_t = Sampler::PipeDream)]
    pub sampler: Sampler,
    /// Dump the dream and vertex colors of sample 0 under this prefix.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ImageFormat {
    Pgm,
    Csv,
}

#[derive(Debug, Args)]
pub struct HeatmapArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[arg(long, default_value_t = 100)]
    pub samples: u64,
    #[arg(long, default_value_t = 100)]
    pub grid: usize,
    #[arg(long, value_enum, default_value_t = ImageFormat::Pgm)]
    pub format: ImageFormat,
}

#[derive(Debug, Args)]
pub struct LimitShapeArgs {
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[arg(long, default_value_t = 50)]
    pub grid: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TasepRecord {
    Trajectory,
    Exits,
}

#[derive(Debug, Args)]
pub struct TasepArgs {
    /// Number of particles.
    #[arg(long)]
    pub k: usize,
    /// Wall starts at n + 1 and moves left by one per step.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[arg(long, default_value_t = 1)]
    pub samples: u64,
    #[arg(long, value_enum, default_value_t = TasepRecord::Trajectory)]
    pub record: TasepRecord,
}

#[derive(Debug, Args)]
pub struct FluctArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[arg(long, default_value_t = 0.5)]
    pub x: f64,
    #[arg(long, default_value_t = 0.5)]
    pub y: f64,
    #[arg(long, default_value_t = 500)]
    pub samples: u64,
}

#[derive(Debug, Args)]
pub struct NonreducedArgs {
    /// One or more orders.
    #[arg(long, num_args = 1.., required = true)]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[arg(long, default_value_t = 100)]
    pub samples: u64,
    /// Print the exact exit law of this pipe instead.
    #[arg(long)]
    pub law: Option<usize>,
}

fn parse_rational(s: &str) -> std::result::Result<BigRational, String> {
    s.trim().parse::<BigRational>().map_err(|e| format!("{s:?} is not a rational number: {e}"))
}

#[derive(Debug, Args)]
#[group(id = "target", required = true, multiple = false)]
pub struct ExactTarget {
    /// w0(k; n) = identity on k letters times the reversal of n.
    #[arg(long, num_args = 2, value_names = ["K", "N"], group = "target")]
    pub w0: Option<Vec<usize>>,
    /// Layered permutation of a dash-separated composition.
    #[arg(long, group = "target")]
    pub layered: Option<String>,
    /// Any permutation of order at most 7, by enumeration.
    #[arg(long, group = "target")]
    pub perm: Option<String>,
    /// Every permutation of order N.
    #[arg(long, group = "target")]
    pub table: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[command(flatten)]
    pub target: ExactTarget,
    /// β as an integer or a fraction a/b.
    #[arg(long, default_value = "1", value_parser = parse_rational)]
    pub beta: BigRational,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long, required_unless_present = "bounds")]
    pub n: Option<usize>,
    /// Print every size from 1 to n.
    #[arg(long)]
    pub all: bool,
    #[arg(long)]
    pub bounds: bool,
}

#[derive(Debug, Args)]
pub struct BpdArgs {
    #[arg(long, required_unless_present = "example")]
    pub n: Option<usize>,
    /// Print the double-crossing example.
    #[arg(long)]
    pub example: bool,
    /// Central limit samples of w(n) at order n.
    #[arg(long)]
    pub clt: bool,
    #[arg(long, default_value_t = 2000)]
    pub samples: u64,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Use the full acceptance sizes (slow).
    #[arg(long)]
    pub full: bool,
}

/// Output sink: `--out` or stdout.
pub(crate) fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn run(cli: Cli) -> Result<()> {
    if let Some(t) = cli.common.threads {
        grothperm::mc::set_thread_budget(t);
    }
    commands::dispatch(&cli.common, cli.command)
}
