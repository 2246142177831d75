use std::path::PathBuf;

use thiserror::Error;

/// Process exit statuses.
pub mod exit {
    pub const OK: u8 = 0;
    pub const IO: u8 = 1;
    pub const COMPARISON: u8 = 2;
    pub const USAGE: u8 = 3;
    pub const NUMERICAL: u8 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(hermite_scaling::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("{0} comparison(s) failed")]
    Comparison(usize),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) => exit::USAGE,
            Self::Numerical(_) => exit::NUMERICAL,
            Self::Io { .. } | Self::Csv { .. } => exit::IO,
            Self::Comparison(_) => exit::COMPARISON,
        }
    }
}

// Precondition violations are the caller's fault; everything else is a
// numerical failure.
impl From<hermite_scaling::Error> for CliError {
    fn from(e: hermite_scaling::Error) -> Self {
        match e {
            hermite_scaling::Error::InvalidArgument(_) | hermite_scaling::Error::Domain(_) => {
                Self::Usage(e.to_string())
            }
            _ => Self::Numerical(e),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
