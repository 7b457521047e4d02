use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Validation(String),

    #[error(transparent)]
    Core(#[from] nhspec_core::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// 2 validation, 3 convergence or failed numerical self-check, 4 I/O.
    pub fn exit_code(&self) -> u8 {
        use nhspec_core::Error as E;
        match self {
            Self::Validation(_) => 2,
            Self::Core(E::Convergence { .. } | E::Consistency(_)) => 3,
            Self::Core(_) => 2,
            Self::Io { .. } => 4,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
