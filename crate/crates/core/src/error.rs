use thiserror::Error;

use crate::oracle::ValueCertificate;

#[derive(Debug, Error)]
pub enum Error {
    /// Caller violated a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("index ({i}, {j}) out of range for a {n}x{d} instance")]
    IndexOutOfRange { i: usize, j: usize, n: usize, d: usize },

    #[error("row {row} has l{p}-norm {norm}, outside the unit ball")]
    RowOutsideBall { row: usize, p: f64, norm: f64 },

    /// Sampling was requested from the zero vector.
    #[error("cannot sample from the zero vector")]
    ZeroVector,

    /// A p-norm gradient step was requested with a zero gradient.
    #[error("zero gradient")]
    ZeroGradient,

    #[error("oracle did not reach gap {tol} within {iterations} iterations (best gap {gap})", gap = .certificate.gap, iterations = .certificate.iterations_used)]
    NotConverged {
        tol: f64,
        certificate: Box<ValueCertificate<f64>>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
