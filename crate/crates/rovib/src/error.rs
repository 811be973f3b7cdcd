//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("rejected input: {0}")]
    RejectedInput(String),

    #[error("unknown molecule '{0}'")]
    UnknownMolecule(String),

    #[error("registry parse failure at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("molecule '{molecule}' is missing mandatory field '{field}'")]
    MissingField { molecule: String, field: String },

    #[error("potential pole at r = {r} (denominator below threshold)")]
    Pole { r: f64 },

    #[error("parameter domain error: {0}")]
    Domain(String),

    #[error("degenerate geometry: centrifugal matching system is singular")]
    DegenerateGeometry,

    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),

    #[error("no bound state: {0}")]
    NoBoundState(String),

    #[error("invalid radial state: {0}")]
    InvalidState(String),

    #[error("grid too coarse: eigenvalues not converged, retry with at least {suggested_points} points")]
    Resolution { suggested_points: usize },

    #[error("level lists not aligned: {left} analytic vs {right} numeric")]
    Alignment { left: usize, right: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
