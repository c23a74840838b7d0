use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: serde_json::Error },

    #[error("{}: {source}", path.display())]
    Invalid { path: PathBuf, source: mmdist::Error },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] mmdist::Error),
}

impl CliError {
    /// 2 for input errors, 3 for exhausted budgets.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(mmdist::Error::InstanceTooLarge { .. } | mmdist::Error::Uncertified(_)) => 3,
            _ => 2,
        }
    }
}
