use thiserror::Error;

/// Errors raised by the exact classification pipeline.
///
/// Variants fall in two groups: rejections of user input (a non-Fano tuple, a
/// weight that is not positive, a Futaki pairing that does not vanish) and
/// internal contradictions between two computations that must agree. The
/// latter are bugs and [`Error::is_internal`] reports them as such.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("NotFano: {0}")]
    NotFano(String),

    #[error("NotDivisible: remainder {remainder} is nonzero")]
    NotDivisible { remainder: String },

    #[error("InvariantViolation: {0}")]
    InvariantViolation(String),

    #[error("UnsupportedWeight: {0}")]
    UnsupportedWeight(String),

    #[error("NotPositive: Mabuchi constant {mabuchi_constant} is not below 1")]
    NotPositive { mabuchi_constant: String },

    #[error("FutakiNonzero: weighted Futaki pairing is {value}, not 0")]
    FutakiNonzero { value: String },

    #[error("BracketFailure: f({lo}) and f({hi}) have the same sign")]
    BracketFailure { lo: String, hi: String },

    #[error("NoConvergence: {0}")]
    NoConvergence(String),

    #[error("OracleMismatch: {what}: {left} != {right}")]
    OracleMismatch {
        what: String,
        left: String,
        right: String,
    },

    #[error("VerdictMismatch: {0}")]
    VerdictMismatch(String),

    #[error("Parse: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors that indicate a bug or a broken invariant rather than
    /// rejected input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::NotDivisible { .. }
                | Error::InvariantViolation(_)
                | Error::BracketFailure { .. }
                | Error::NoConvergence(_)
                | Error::OracleMismatch { .. }
                | Error::VerdictMismatch(_)
        )
    }

    pub(crate) fn mismatch(
        what: impl Into<String>,
        left: impl ToString,
        right: impl ToString,
    ) -> Self {
        Error::OracleMismatch {
            what: what.into(),
            left: left.to_string(),
            right: right.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
