use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Input(String),

    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] rro_core::Error),
}

impl CliError {
    /// 2 usage, 3 input, 4 fit failure, 5 enumeration cap, 1 anything else.
    pub fn exit_code(&self) -> u8 {
        use rro_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Input(_) | CliError::Read { .. } => 3,
            CliError::Write { .. } => 1,
            CliError::Core(e) => match e.root() {
                E::SampleTooSmall { .. } | E::NonFiniteValue { .. } => 3,
                E::FitFailed { .. }
                | E::MomentMatchFailed { .. }
                | E::CalibrationFailed { .. }
                | E::InfeasibleStart(_) => 4,
                E::EnumerationCapExceeded { .. } => 5,
                E::Domain(_) => 2,
                E::Context { .. } => 1,
            },
        }
    }
}
