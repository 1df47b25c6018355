use std::fmt;

/// Failure classes, each with its own process exit status.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(kg5d::Error),
    Io(std::io::Error),
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Numerical(e) => match e {
                kg5d::Error::QuadratureNonConvergence { .. }
                | kg5d::Error::SeriesNonConvergence { .. }
                | kg5d::Error::NoBracket { .. }
                | kg5d::Error::RootNonConvergence { .. }
                | kg5d::Error::Overflow { .. } => 3,
                _ => 2,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<kg5d::Error> for CliError {
    fn from(e: kg5d::Error) -> Self {
        CliError::Numerical(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}
