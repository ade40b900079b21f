use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e}, threshold {threshold:e})")]
    NotPositiveDefinite { min_eigenvalue: f64, threshold: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("contraction bound {0} is not below one")]
    ContractionNotLessThanOne(f64),

    #[error("spectrum is not real")]
    NonRealSpectrum,

    #[error("spectrum is empty")]
    EmptySpectrum,

    #[error("zero lies in the spectrum")]
    ZeroInSpectrum,

    #[error("kappa_minus = {0} must exceed -1")]
    KappaMinusNotAboveMinusOne(f64),

    #[error("kappa = {0} must lie in [0, 1)")]
    KappaOutOfRange(f64),

    #[error("alpha = {0} must lie in the admissible range")]
    AlphaOutOfRange(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("LAPACK routine {routine} failed with info = {info}")]
    Lapack { routine: &'static str, info: i32 },

    #[error("solver check failed: {0}")]
    Solver(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Process exit status used by the `kg` binary.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } => 2,
            Error::Validation(_)
            | Error::DimensionMismatch(_)
            | Error::InvalidArgument(_)
            | Error::AlphaOutOfRange(_)
            | Error::KappaOutOfRange(_)
            | Error::KappaMinusNotAboveMinusOne(_) => 3,
            Error::Io { .. } => 5,
            _ => 4,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
