use std::path::PathBuf;

/// Errors of the runner, grouped by the exit status they map to.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("config error: {0}")]
    Config(String),
    #[error("config error: {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] pressurekit_core::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// 2 for anything wrong with the inputs, 1 for failures of the computation itself.
    pub fn exit_code(&self) -> u8 {
        use pressurekit_core::Error as E;
        match self {
            Error::Config(_) | Error::Read { .. } => 2,
            Error::Core(
                E::InvalidSystem(_)
                | E::InvalidPotential(_)
                | E::InvalidMeasure(_)
                | E::NonErgodic
                | E::InvalidEpsilon(_)
                | E::DeltaOutOfRange(_)
                | E::DepthCapTooSmall { .. }
                | E::TooLarge { .. }
                | E::InvalidArgument(_)
                | E::InadmissibleWord(_)
                | E::SeparationViolated(_),
            ) => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
