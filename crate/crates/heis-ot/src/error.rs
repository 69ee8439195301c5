//! Crate-wide error type.
//!
//! Errors are grouped by which stage of a computation rejects the input:
//! geometric domain errors (center-line singularities, bad parameters),
//! measure validation, and solver failures. The CLI maps these onto its
//! exit codes (1 validation, 2 solver, 3 check failure).

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The point lies on the (translated) center line, where the geodesic
    /// parameterization is not unique and the distance is not smooth.
    #[error("point on the center line: {0}")]
    CenterLine(String),

    #[error("parameter out of range: {0}")]
    BadParameter(String),

    #[error("malformed coordinates: {0}")]
    BadCoordinates(String),

    #[error("invalid measure: {0}")]
    BadMeasure(String),

    #[error("point outside quantization coverage (distance {dist:.3e} > 1/m = {radius:.3e})")]
    OutsideCoverage { dist: f64, radius: f64 },

    #[error("atom outside histogram grid: {0}")]
    OutsideGrid(String),

    #[error("cost function produced a non-finite value at pair ({i}, {j})")]
    NonFiniteCost { i: usize, j: usize },

    #[error("marginal weights do not balance: source sums to {supply}, target to {demand}")]
    UnbalancedMarginals { supply: f64, demand: f64 },

    #[error("second marginal leaves the compact set K: {0}")]
    MarginalOutsideK(String),

    #[error("solver failed to converge: {0}")]
    SolverStall(String),

    #[error("empty search schedule")]
    EmptySchedule,

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

impl Error {
    /// Exit code class used by the CLI: 1 validation, 2 solver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SolverStall(_) | Error::NonFiniteCost { .. } => 2,
            _ => 1,
        }
    }
}
