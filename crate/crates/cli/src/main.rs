//! `credrank` command-line driver.
//!
//! Every failure prints one JSON line on stderr,
//! `{"error": ..., "kind": ..., "exit_code": ...}`, and exits with 2 for
//! configuration and usage problems, 3 for unreadable or malformed inputs,
//! 4 when a computed score breaks a range invariant and 1 otherwise.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use credrank::corpus::Period;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "credrank", version, about = "Domain-based credibility ranking for social-post corpora")]
struct Cli {
    /// Pipeline configuration (JSON).
    #[arg(long, global = true, value_name = "F")]
    config: Option<PathBuf>,
    /// Only report errors.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load JSONL users, posts and replies into a checked corpus directory.
    Ingest {
        #[arg(long, value_name = "F")]
        users: PathBuf,
        #[arg(long, value_name = "F")]
        posts: PathBuf,
        #[arg(long, value_name = "F")]
        replies: PathBuf,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Apply the cleansing rules to a corpus directory.
    Cleanse {
        #[arg(long = "in", value_name = "DIR")]
        input: PathBuf,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        #[command(flatten)]
        flags: CleanseFlags,
    },
    /// Partition a cleansed corpus and write every score artifact.
    Score {
        #[arg(long = "in", value_name = "DIR")]
        input: PathBuf,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        #[command(flatten)]
        flags: ScoreFlags,
    },
    /// Print the top of one domain ranking from a score directory.
    Rank {
        #[arg(long = "in", value_name = "DIR")]
        input: PathBuf,
        #[arg(long, value_name = "NAME")]
        domain: String,
        #[arg(long, value_name = "Q")]
        top: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Retrieve anomalous users from a score directory.
    Anomalies {
        #[arg(long = "in", value_name = "DIR")]
        input: PathBuf,
        /// twt, url or indegree.
        #[arg(long)]
        criterion: String,
        #[arg(long, value_name = "K")]
        top: usize,
        /// `user_id,label` CSV; adds a precision curve.
        #[arg(long, value_name = "F")]
        labels: Option<PathBuf>,
        /// Write results and the precision curve here instead of stdout.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
        /// Leave out users that have no credibility row at all.
        #[arg(long)]
        exclude_unrankable: bool,
    },
    /// Score rankings against a graded ground truth.
    Eval {
        #[arg(long, value_name = "F")]
        truth: PathBuf,
        /// `method,domain,rank,user_id` CSV files or score directories.
        #[arg(long, value_name = "F", num_args = 1.., required = true)]
        rankings: Vec<PathBuf>,
        #[arg(long, default_value_t = 150)]
        q: usize,
        /// Divide recall by the cutoff instead of the ground-truth size.
        #[arg(long)]
        strict_paper_metrics: bool,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Generate a seeded synthetic corpus with planted roles.
    Synth {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_name = "F")]
        spec: Option<PathBuf>,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Ingest, cleanse, partition, score and rank in one go.
    Run {
        #[arg(long = "in", value_name = "DIR")]
        input: PathBuf,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        #[command(flatten)]
        cleanse: CleanseFlags,
        #[command(flatten)]
        score: ScoreFlags,
    },
}

#[derive(Debug, Clone, Default, Args)]
struct CleanseFlags {
    #[arg(long, value_name = "N")]
    min_posts: Option<usize>,
    /// One host per line; replaces the shipped list.
    #[arg(long, value_name = "F")]
    media_blocklist: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
struct ScoreFlags {
    #[arg(long, value_name = "X")]
    rho: Option<f64>,
    #[arg(long, value_name = "I")]
    window: Option<usize>,
    #[arg(long, value_name = "month|week|day")]
    period: Option<Period>,
    #[arg(long, value_name = "a,b,c,d,e,f")]
    weights: Option<String>,
    #[arg(long, value_name = "X")]
    log_base: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                e.exit();
            }
            let rendered = e.to_string();
            let msg = rendered.lines().next().unwrap_or_default().trim_start_matches("error: ");
            return fail(CliError::config(msg));
        }
    };

    let level = if cli.quiet { "off" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();

    match commands::dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e),
    }
}

fn fail(e: CliError) -> ExitCode {
    eprintln!("{}", e.to_json_line());
    ExitCode::from(e.kind.exit_code() as u8)
}
