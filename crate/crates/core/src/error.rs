use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A value lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The marginal effect with respect to the subscribing share diverges at beta = 1.
    #[error("marginal effect is singular at beta = 1")]
    Singular,

    /// Malformed user input (scenario files, CLI arguments, order logs).
    #[error("invalid input: {0}")]
    Input(String),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    /// True for errors caused by the numerical domain rather than by malformed input.
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::Singular)
    }
}
