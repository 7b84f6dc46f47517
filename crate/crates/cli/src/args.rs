use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qpdeg_core::reduction::Preset;
use qpdeg_core::{LevelPair, Sign};

#[derive(Debug, Parser)]
#[command(
    name = "qpdeg",
    version,
    about = "Spectra and engineered degeneracies of (q,p)-deformed oscillators"
)]
pub struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write to this file (atomically) instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Root-finding / refinement tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Fixed number of decimals (1..=12) for CSV numbers.
    #[arg(long, global = true)]
    pub rounding: Option<u32>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectrum of a one-parameter reduction at a given p (or q for lines).
    Spectrum(SpectrumArgs),
    /// Fit a reduction relation through (1,1) and two points on p = p0.
    Fit(FitArgs),
    /// Roots q of E_{n+k} = E_n at fixed p.
    Solve(SolveArgs),
    /// Sample degeneracy curves over a p grid.
    Trace(TraceArgs),
    /// Points where two degeneracy curves cross.
    Intersect(IntersectArgs),
    /// Recompute the published tables and degeneracy sets and compare.
    Reproduce(ReproduceArgs),
}

/// A reduction relation given by preset, file or explicit parameters.
#[derive(Debug, Args, Default)]
pub struct RelationArgs {
    /// td (p=q), ak (p=1), linear-a or linear-b.
    #[arg(long, value_parser = parse_preset)]
    pub preset: Option<Preset>,

    /// JSON relation as written by `fit`.
    #[arg(long, value_name = "FILE")]
    pub relation: Option<PathBuf>,

    #[arg(long, value_name = "ALPHA,BETA,GAMMA", value_delimiter = ',')]
    pub parabola: Option<Vec<f64>>,

    #[arg(
        long,
        value_name = "A,B,C,R",
        value_delimiter = ',',
        allow_hyphen_values = true
    )]
    pub hyperbola: Option<Vec<f64>>,

    #[arg(long, value_name = "MU,NU,RHO,EPS", value_delimiter = ',')]
    pub ellipse: Option<Vec<f64>>,

    #[arg(
        long,
        value_name = "ALPHA,BETA",
        value_delimiter = ',',
        allow_hyphen_values = true
    )]
    pub line: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub relation: RelationArgs,

    /// Value of p at which the relation is inverted.
    #[arg(long, conflicts_with = "q")]
    pub p: Option<f64>,

    /// Value of q for line relations, p taken from the line.
    #[arg(long)]
    pub q: Option<f64>,

    #[arg(long, default_value_t = 12)]
    pub nmax: u32,

    /// Levels below this index use --low, the rest --high.
    #[arg(long, default_value_t = 0)]
    pub threshold: u32,

    #[arg(long, default_value = "+", value_parser = parse_sign, allow_hyphen_values = true)]
    pub low: Sign,

    #[arg(long, default_value = "+", value_parser = parse_sign, allow_hyphen_values = true)]
    pub high: Sign,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConicKind {
    Parabola,
    Hyperbola,
    Ellipse,
    Line,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    pub kind: ConicKind,

    /// Degenerate level pair `n:k` (twice); roots at p0 become the fit points.
    /// For `line`, the line goes through a crossing of the two curves.
    #[arg(long, value_parser = parse_pair)]
    pub pair: Vec<LevelPair>,

    #[arg(long)]
    pub q1: Option<f64>,

    #[arg(long)]
    pub q2: Option<f64>,

    /// Common ordinate of the fit points (for `line`: the point's p).
    #[arg(long)]
    pub p0: Option<f64>,

    /// Hyperbola radius.
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,

    /// Ellipse aspect parameter.
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,

    /// Which crossing (ordered by q, from 1) a `line --pair --pair` fit uses.
    #[arg(long, default_value_t = 1)]
    pub crossing: usize,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, value_parser = parse_pair, required = true)]
    pub pair: Vec<LevelPair>,

    #[arg(long)]
    pub p0: f64,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[arg(long, value_parser = parse_pair)]
    pub pair: Vec<LevelPair>,

    /// Number of p samples in [0.01, 1].
    #[arg(long, default_value_t = 512)]
    pub grid: usize,

    /// Optional reduction relation drawn on top of the curves.
    #[command(flatten)]
    pub relation: RelationArgs,

    /// Extra point to mark, `q,p` or `q,p,label`.
    #[arg(long, value_parser = parse_mark)]
    pub mark: Vec<(f64, f64, String)>,

    /// Mark the crossings of the first two curves as A, B, ...
    #[arg(long)]
    pub crossings: bool,
}

#[derive(Debug, Args)]
pub struct IntersectArgs {
    #[arg(long, value_parser = parse_pair)]
    pub pair: Vec<LevelPair>,

    /// Number of p samples along the first curve.
    #[arg(long, default_value_t = 4096)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Only the numbered parameter table (1..=5).
    #[arg(long)]
    pub table: Option<u32>,

    /// Only these artifacts (e.g. T1, PMIN, CROSSINGS, T4-SPECTRUM).
    #[arg(long)]
    pub artifact: Vec<String>,
}

fn parse_pair(s: &str) -> Result<LevelPair, String> {
    s.parse().map_err(|e: qpdeg_core::Error| e.to_string())
}

fn parse_preset(s: &str) -> Result<Preset, String> {
    s.parse().map_err(|e: qpdeg_core::Error| e.to_string())
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    s.parse().map_err(|e: qpdeg_core::Error| e.to_string())
}

fn parse_mark(s: &str) -> Result<(f64, f64, String), String> {
    let parts: Vec<&str> = s.splitn(3, ',').collect();
    if parts.len() < 2 {
        return Err(format!("expected q,p[,label], got {s:?}"));
    }
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    let label = parts
        .get(2)
        .map_or_else(|| format!("({},{})", parts[0], parts[1]), |l| l.to_string());
    Ok((num(parts[0])?, num(parts[1])?, label))
}
