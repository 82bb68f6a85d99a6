use qheis_core::CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("field has no sampled values")]
    MissingValues,
    #[error("field is in the {found} domain, expected {expected}")]
    WrongDomain { expected: &'static str, found: &'static str },
    #[error("non-finite sample at flat index {0}")]
    NonFiniteSample(usize),
    #[error("spectrum is not radial: off-block residual {residual:.3e} exceeds {tol:.3e}")]
    NotRadial { residual: f64, tol: f64 },
    #[error("radial synthesis tail {tail:.3e} exceeds budget {tol:.3e}")]
    TruncationBudgetExceeded { tail: f64, tol: f64 },
    #[error("exponents must satisfy mu + nu = 2, got {mu} + {nu}")]
    BadExponents { mu: f64, nu: f64 },
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("malformed file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
