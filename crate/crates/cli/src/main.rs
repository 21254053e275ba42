//! `roundelim`: graph generation, self-reduction runs, lemma searches and
//! the round bound, emitting JSON, JSONL or CSV.
//!
//! Exit codes: 0 ok, 2 input or domain error, 3 enumeration budget, 4 usage.
//! Every flag can also be set through `ROUNDELIM_<FLAG>`.

mod commands;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{BoundArgs, GenArgs, OracleArgs, SelfReduceArgs};

#[derive(Parser)]
#[command(name = "roundelim", version, about = "Round elimination experiments for b-grabbing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Random delta-regular graph plus girth and independence diagnostics.
    Gen(GenArgs),
    /// Derive a baseline one round faster until radius 0; trajectory CSV and audit JSON.
    Selfreduce(SelfReduceArgs),
    /// Randomized search of one lemma check; verdicts as JSON lines.
    Oracle(OracleArgs),
    /// Evaluate the round lower bound for given badness and degree.
    Bound(BoundArgs),
}

/// Failure classes, mapped onto exit codes.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Budget(String),
    Usage(String),
}

impl From<roundelim::Error> for Failure {
    fn from(e: roundelim::Error) -> Self {
        match e {
            roundelim::Error::BudgetTooLarge { .. } => {
                Failure::Budget(format!("{e}; raise --cap or use --mode mc"))
            }
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 4 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Gen(a) => commands::gen(a),
        Command::Selfreduce(a) => commands::selfreduce(a),
        Command::Oracle(a) => commands::oracle(a),
        Command::Bound(a) => commands::bound(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(4)
        }
    }
}
