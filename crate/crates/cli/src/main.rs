//! `edlogic` command-line front-end.
//!
//! Exit status: 0 for a positive answer (consistent, entailed, true),
//! 1 for a negative one, 2 for any error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "edlogic", version, about = "Expected-distance spaces and logic")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Config {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Maximum number of distinct propositions per query.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    atom_budget: u64,
    /// Maximum number of points in a witness model.
    #[arg(long, global = true, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    model_cap: u64,
    /// Maximum literal count of a DNF expansion.
    #[arg(long, global = true, default_value_t = 4096, value_parser = clap::value_parser!(u64).range(1..))]
    dnf_cap: u64,
    /// Include the witness model in the report.
    #[arg(long, global = true)]
    emit_model: bool,
    /// Write the witness model to this file (implies --emit-model).
    #[arg(long, global = true, value_name = "PATH")]
    model_out: Option<PathBuf>,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    /// Doubt table to mass table.
    ToMass,
    /// Mass table to doubt table.
    FromMass,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether a formula has a model.
    Check {
        /// The formula; omit when using --file.
        formula: Option<String>,
        /// Read formulas from a file, one per line, taken as a conjunction.
        #[arg(long, short)]
        file: Option<PathBuf>,
    },
    /// Decide whether premises entail a goal.
    Entail {
        /// The goal formula.
        goal: String,
        /// File with one premise per line.
        #[arg(long)]
        premises: Option<PathBuf>,
        /// An inline premise; may be repeated.
        #[arg(long = "premise")]
        premise: Vec<String>,
    },
    /// Evaluate a formula in a model.
    Eval {
        /// Space file, optionally carrying a "valuation" object.
        space: PathBuf,
        /// The formula.
        formula: String,
        /// Valuation file: {"point": ["P", ..], ..}.
        #[arg(long)]
        valuation: Option<PathBuf>,
        /// Extra propositions that are false everywhere, comma-separated.
        #[arg(long, value_delimiter = ',')]
        declare: Vec<String>,
    },
    /// Print ed, es, ea and er of an event.
    Measures {
        /// Space file.
        space: PathBuf,
        /// Points of the event; none means the empty event.
        points: Vec<String>,
        /// Use the whole frame as the event.
        #[arg(long, conflicts_with = "points")]
        full: bool,
    },
    /// Convert between doubt and mass tables.
    Mobius {
        /// Set-function file.
        input: PathBuf,
        #[arg(long, value_enum)]
        direction: Direction,
        /// Output file; stdout when omitted.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Expand a product space.
    Product {
        /// Component space files, or a single product file.
        spaces: Vec<PathBuf>,
        /// Joint distribution file: {"a|b": "1/4", ..}.
        #[arg(long)]
        joint: Option<PathBuf>,
        /// Output file; stdout when omitted.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Generate a random valid space from --seed.
    RandomSpace {
        /// Number of points.
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..=64))]
        points: u64,
        /// Output file; stdout when omitted.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command, &cli.config) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
