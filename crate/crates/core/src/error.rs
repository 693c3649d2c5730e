use thiserror::Error;

use crate::spectra::Criterion;

/// Errors produced by the spectral, counting and classification routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid family specification: {0}")]
    InvalidSpec(String),

    /// Only the leading asymptotic term is known for this factor.
    #[error("dimension {k}: eigenvalues are approximate-only (leading term {leading:e})")]
    ApproximateOnly { k: usize, leading: f64 },

    #[error("series diverges at dimension {k}")]
    Divergent { k: usize },

    #[error("no finite truncation: series diverges at dimension {k}")]
    NoFiniteTruncation { k: usize },

    #[error("dimension {k}: tabulated factor has no tail model, cannot certify tolerance")]
    NoTailModel { k: usize },

    #[error("request of {requested} exceeds cap {cap}")]
    Cap { requested: u64, cap: u64 },

    #[error("criterion {criterion} is not supported for the {family} family")]
    UnsupportedCriterion {
        family: &'static str,
        criterion: Criterion,
    },

    #[error("undecidable from finite data: {0}")]
    Undecidable(String),

    #[error("not strongly polynomially tractable (A_* = 0)")]
    NotSpt,

    #[error("not quasi-polynomially tractable (B = 0)")]
    NotQpt,

    #[error("no closed form available: {0}")]
    NoClosedForm(String),

    #[error("kernel is available in matrix form only")]
    MatrixFormOnly,

    #[error("kernel matrix is not positive semi-definite (eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("value overflows the representable range: {0}")]
    Overflow(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
