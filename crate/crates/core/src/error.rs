use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0} is not a prime >= 5")]
    NotAdmissiblePrime(u64),

    #[error("singular curve: 4a^3 + 27b^2 = 0 mod {p} for (a, b) = ({a}, {b})")]
    SingularCurve { a: u64, b: u64, p: u64 },

    #[error("Gamma pole in numerator at argument {0}: the closed form diverges")]
    NumeratorPole(i64),

    #[error("corrupt cache {path}: {reason}")]
    CorruptCache { path: PathBuf, reason: String },

    #[error("invalid histogram for p = {p}: {reason}")]
    InvalidHistogram { p: u64, reason: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
