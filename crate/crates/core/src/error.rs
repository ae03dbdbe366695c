use thiserror::Error;

use crate::group::ModelKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("group model mismatch: {0:?} vs {1:?}")]
    ModelMismatch(ModelKind, ModelKind),
    #[error("jet depth budget exceeded: requested depth {requested}, maximum is {max}")]
    DepthExceeded { requested: u8, max: u8 },
    #[error("field is not flagged positive; logarithm-based operation refused")]
    NotPositive,
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
    #[error("semigroup estimate is not positive ({0}); too few paths or unsuitable function")]
    NonPositiveEstimate(f64),
    #[error("explicit scheme unstable: dt = {dt} exceeds bound {bound}")]
    StabilityViolated { dt: f64, bound: f64 },
    #[error("boundary flux {flux:.3e} exceeds threshold {threshold:.3e}; enlarge the box")]
    BoundaryFlux { flux: f64, threshold: f64 },
    #[error("quadrature did not converge: estimate {value}, error {error}")]
    QuadratureFailed { value: f64, error: f64 },
    #[error("integrand singular at s = {0}")]
    Singular(f64),
    #[error("profile defect: {0}")]
    ProfileDefect(String),
    #[error("divergent integral: {0}")]
    Divergent(String),
    #[error("fit rejected: {0}")]
    FitRejected(String),
    #[error("path optimization did not converge: endpoint residual {0:.3e}")]
    NotConverged(f64),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
