use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(zenolab_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) | CliError::Csv(_) => 1,
        }
    }
}

impl From<zenolab_core::Error> for CliError {
    fn from(e: zenolab_core::Error) -> Self {
        use zenolab_core::Error as E;
        match e {
            E::InvalidParameter(_)
            | E::Domain(_)
            | E::DivergentMoment { .. }
            | E::InvalidState(_)
            | E::InsufficientModes { .. }
            | E::RecurrenceWindowExceeded { .. }
            | E::OddKickCount(_)
            | E::WindowTooShort { .. } => CliError::Config(e.to_string()),
            E::DivergentIntegral
            | E::NoConvergence { .. }
            | E::NoCrossing { .. }
            | E::NoRelaxation
            | E::NonPositiveProbability { .. } => CliError::Numerical(e),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
