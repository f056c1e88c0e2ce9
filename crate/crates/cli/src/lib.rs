//! Front end for the synchronizing-automata toolkit: single-automaton reports,
//! batch experiments and the acceptance suite behind the `synchro` binary.

pub mod batch;
pub mod report;
pub mod verify;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] synchro_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("configuration: {0}")]
    Config(String),
    #[error("report: {0}")]
    Report(String),
}

pub use report::{analyze, AnalysisConfig, AnalysisReport};
