use std::fmt;

/// Exit codes: 2 for bad input, 3 for numerical failure.
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Numeric(m) => f.write_str(m),
        }
    }
}

impl From<genhilbert::Error> for CliError {
    fn from(e: genhilbert::Error) -> Self {
        if e.is_validation() {
            CliError::Validation(e.to_string())
        } else {
            CliError::Numeric(e.to_string())
        }
    }
}
