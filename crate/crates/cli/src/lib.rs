//! Command line front end for the curve counts: problem files, dispatch to
//! the floor diagram, lattice path and brute-force algorithms,
//! cross-checking, and JSON, DOT and plain-text output.

mod emit;
mod problem;
mod report;
mod run;

use thiserror::Error;

use crcount_floor::FloorError;
use crcount_lattice_paths::LatticePathError;
use crcount_oracle::OracleError;

pub use emit::{emit, Format};
pub use problem::{parse_problem, Algorithm, CrossRatioSpec, DegreeSpec, Length, ProblemError, ProblemFile};
pub use report::{AlgorithmCount, Record, RecordKind, ResultReport, UnlabeledCount, SCHEMA_VERSION};
pub use run::{applicable, default_algorithm, relabeling_factor, run_count, RunOptions, RunOutput};

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const VALIDATION: i32 = 2;
    pub const MISMATCH: i32 = 3;
    pub const RESOURCE_LIMIT: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("algorithm {algorithm} does not apply: {reason}")]
    Inapplicable { algorithm: Algorithm, reason: String },
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Floor(#[from] FloorError),
    #[error(transparent)]
    LatticePath(#[from] LatticePathError),
    #[error(transparent)]
    Oracle(OracleError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::TooLarge(_) | OracleError::RetriesExhausted(_) => CliError::ResourceLimit(e.to_string()),
            e => CliError::Oracle(e),
        }
    }
}

impl From<crcount_core::CoreError> for CliError {
    fn from(e: crcount_core::CoreError) -> Self {
        CliError::Problem(ProblemError::Degree(e))
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Problem(_) | CliError::Inapplicable { .. } | CliError::Io { .. } => exit::VALIDATION,
            CliError::ResourceLimit(_) => exit::RESOURCE_LIMIT,
            _ => exit::FAILURE,
        }
    }
}
