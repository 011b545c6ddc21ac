//! scamsift: detect fraudulent dating profiles from the command line.
//!
//! Subcommands mirror the staged methodology: `ingest` normalizes a raw
//! scrape into the canonical corpus, `stats` describes it, `train` builds a
//! model bundle, `evaluate` produces the results tables on a held-out set,
//! `predict` scores unlabeled profiles and `tune` recommends a decision
//! threshold for a chosen precision/recall trade-off.
//!
//! Exit codes: 0 success, 2 input error, 3 data degeneracy, 4 leakage guard.

mod commands;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use scamsift_core::Error;

#[derive(Parser)]
#[command(name = "scamsift", version, about = "Romance-scam profile detection toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a raw JSON-lines scrape, explode 'or'-valued records, attach
    /// captions from a sidecar, and write the canonical corpus.
    Ingest(commands::IngestArgs),
    /// Per-class corpus statistics (demographics, word counts, captions).
    Stats(commands::StatsArgs),
    /// Split, cross-validate, train all models and persist a bundle.
    Train(commands::TrainArgs),
    /// Score a labeled held-out set: results table, ROC, tag recall,
    /// feature rankings.
    Evaluate(commands::EvaluateArgs),
    /// Score profiles (labels optional) as JSON-lines decisions.
    Predict(commands::PredictArgs),
    /// Sweep the ensemble decision threshold to maximize F_beta.
    Tune(commands::TuneArgs),
}

/// Exit code contract shared by all subcommands.
fn exit_code_for(error: &anyhow::Error) -> u8 {
    match error.downcast_ref::<Error>() {
        Some(Error::Leakage { .. }) => 4,
        Some(
            Error::DegenerateClass
            | Error::EmptyTraining
            | Error::EmptyCorpus
            | Error::EmptyEvaluation
            | Error::EmptyReference
            | Error::SingleClass
            | Error::Undefined
            | Error::Fold(_)
            | Error::Ratio { .. }
            | Error::NonConvergence(_),
        ) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    commands::init_thread_pool();
    let result = match cli.command {
        Command::Ingest(args) => commands::ingest(args),
        Command::Stats(args) => commands::stats(args),
        Command::Train(args) => commands::train(args),
        Command::Evaluate(args) => commands::evaluate(args),
        Command::Predict(args) => commands::predict(args),
        Command::Tune(args) => commands::tune(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error:#}");
            ExitCode::from(exit_code_for(&error))
        }
    }
}
