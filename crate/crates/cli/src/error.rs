use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] qcwalk::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    /// 1 usage error, 2 computation or I/O error, 3 verification failure.
    pub fn exit_code(&self) -> u8 {
        use qcwalk::Error as E;
        match self {
            CliError::Usage(_) => 1,
            CliError::Compute(e) => match e {
                E::EmptyGraph
                | E::EndpointOutOfRange(..)
                | E::SelfLoop(_)
                | E::DuplicateEdge(..)
                | E::InvalidSize { .. }
                | E::UnreachableDegree { .. }
                | E::NodeOutOfRange { .. }
                | E::UnknownKind(_)
                | E::Parse { .. }
                | E::InvalidGrid(_) => 1,
                _ => 2,
            },
            CliError::Io { .. } => 2,
            CliError::Verification(_) => 3,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}
