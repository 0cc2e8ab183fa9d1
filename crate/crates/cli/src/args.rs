use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use predhead::metrics::MatchCriterion;
use predhead::segment::CommaPolicy;

/// Tools for inline predicate-head annotation corpora.
///
/// Exit status: 0 success, 1 validation errors, 2 usage or I/O error,
/// 3 malformed input. A `phk.toml` in the working directory supplies
/// defaults; flags take precedence.
#[derive(Debug, Parser)]
#[command(name = "phk", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse inline files and print one standoff record per document.
    Parse(ParseArgs),
    /// Check annotations against the guideline rules.
    Validate(ValidateArgs),
    /// Propose labeling units for raw text, one per output line.
    Segment(SegmentArgs),
    /// Convert between inline, standoff and column formats.
    Convert(ConvertArgs),
    /// Corpus statistics.
    Stats(StatsArgs),
    /// Agreement between two annotations of the same units.
    Agree(AgreeArgs),
}

#[derive(Debug, Args)]
pub struct ParseArgs {
    /// Inline files (`-` for stdin).
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    /// Only check; print nothing on stdout.
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    /// Treat warnings as errors.
    #[arg(long)]
    pub strict: bool,
    #[arg(long, value_enum)]
    pub format: Option<ReportFormat>,
}

#[derive(Debug, Args)]
pub struct SegmentArgs {
    /// Raw text file (`-` for stdin).
    pub rawfile: PathBuf,
    #[arg(long, value_enum)]
    pub commas: Option<Commas>,
    /// Conjunction lexicon, one entry per line.
    #[arg(long)]
    pub conj: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[arg(long, value_enum)]
    pub to: Target,
    /// Input files in any supported format (detected from content).
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<TableFormat>,
}

#[derive(Debug, Args)]
pub struct AgreeArgs {
    pub file_a: PathBuf,
    pub file_b: PathBuf,
    #[arg(long = "match", value_enum)]
    pub criterion: Option<Match>,
    /// Compare RAI elements as COM.
    #[arg(long)]
    pub normalize_rai: bool,
    #[arg(long, value_enum)]
    pub format: Option<TableFormat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Text,
    Records,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableFormat {
    Table,
    Records,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Commas {
    Candidate,
    Hard,
    Ignore,
}

impl From<Commas> for CommaPolicy {
    fn from(c: Commas) -> Self {
        match c {
            Commas::Candidate => CommaPolicy::Candidate,
            Commas::Hard => CommaPolicy::Hard,
            Commas::Ignore => CommaPolicy::Ignore,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Inline,
    Standoff,
    Columns,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Match {
    Exact,
    Type,
    Head,
}

impl From<Match> for MatchCriterion {
    fn from(m: Match) -> Self {
        match m {
            Match::Exact => MatchCriterion::Exact,
            Match::Type => MatchCriterion::TypeOnly,
            Match::Head => MatchCriterion::HeadOverlap,
        }
    }
}
