use thiserror::Error;

/// Errors raised by the numeric kernels and the experiment drivers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the mathematical domain of a function.
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    /// Space or experiment parameters rejected before any computation.
    #[error("invalid parameters: {0}")]
    Parameter(String),

    /// Measure specification failed validation; `field` is a JSON-style path.
    #[error("invalid measure spec at {field}: {message}")]
    InvalidSpec { field: String, message: String },

    /// Malformed measure JSON (syntax or type mismatch).
    #[error("measure spec parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// Request exceeds a configured resource cap.
    #[error("resource limit: requested {requested} {what}, cap is {cap}")]
    Resource {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    /// A truncation is too short for the requested accuracy.
    #[error("precision error: {0}")]
    Precision(String),

    /// A regression or log-space computation hit a zero value.
    #[error("degenerate data: {0}")]
    Degenerate(String),

    /// Two quadrature routes that must agree did not.
    #[error("quadrature failure: {0}")]
    Quadrature(String),
}

impl Error {
    /// True for errors caused by bad input rather than numeric breakdown.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Domain { .. }
                | Error::Parameter(_)
                | Error::InvalidSpec { .. }
                | Error::Parse { .. }
                | Error::Resource { .. }
        )
    }

    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            func,
            detail: detail.into(),
        }
    }

    pub(crate) fn spec(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidSpec {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
