use std::fmt;

/// A failed command; the variant picks the exit status.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad arguments or input files. Exit status 1.
    Validation(String),
    /// Blow-up, singular or inconsistent solve. Exit status 2.
    Numerical(String),
}

impl CliError {
    pub fn schema(field: &str, reason: &str) -> Self {
        CliError::Validation(format!("field `{field}`: {reason}"))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ghc_core::Error> for CliError {
    fn from(e: ghc_core::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}
