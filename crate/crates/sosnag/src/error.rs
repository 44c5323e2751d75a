use std::fmt;

/// Failures of a command, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad command line (exit code 2).
    Usage(String),
    /// Unreadable or malformed input data (exit code 1).
    Input(String),
    /// The computation itself failed (exit code 1).
    Domain(sosnag_core::Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Input(msg) => write!(f, "bad input: {msg}"),
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<sosnag_core::Error> for CliError {
    fn from(e: sosnag_core::Error) -> Self {
        CliError::Domain(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
