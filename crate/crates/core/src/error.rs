use thiserror::Error;

use crate::record::TrajectoryRecord;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("grid of {got} points is too small, need at least {required}")]
    GridTooSmall { required: usize, got: usize },

    /// The solver produced NaN or infinity; `partial` holds the samples taken up to `last_valid_time`.
    #[error("non-finite state encountered after t = {last_valid_time}")]
    NonFinite {
        last_valid_time: f64,
        partial: Box<TrajectoryRecord>,
    },

    #[error("Picard iteration is not contracting (residuals: {residuals:?})")]
    NonContraction { residuals: Vec<f64> },

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
