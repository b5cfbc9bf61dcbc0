use thiserror::Error;

/// Error type shared by every module of the crate.
///
/// The variants split into two families that callers (notably the CLI)
/// treat differently: everything except [`Error::Numeric`] ultimately stems
/// from the input (a file, an expression, an observable that violates a
/// contract), while `Numeric` signals an internal algorithm failure such as
/// eigensolver non-convergence.
#[derive(Debug, Error)]
pub enum Error {
    /// Expression or document syntax error, with a 1-based source position.
    #[error("syntax error at line {line}, column {col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },

    /// Malformed or inconsistent scenario document.
    #[error("invalid scenario: {0}")]
    Scenario(String),

    /// Invalid argument outside the scenario format (bad spin, bad tolerance, ...).
    #[error("invalid input: {0}")]
    Input(String),

    /// Shape mismatch or dimension-cap overflow.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// A documented precondition did not hold (non-Hermitian operator,
    /// non-commuting set, incomplete basis, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Internal numeric failure (non-convergence, residual blow-up).
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    /// True for errors that indicate an internal numeric breakdown rather
    /// than a problem with the input.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Numeric(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
