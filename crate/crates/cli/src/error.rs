use magnomech::gaussian::GaussianError;
use magnomech::linalg::LinalgError;
use magnomech::sweep::SweepError;
use thiserror::Error;

/// Failure of a command, carrying its process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("derivation error: {0}")]
    Derivation(String),
    #[error("unstable: largest real part of the drift spectrum is {max_real_eig:.6e} (units of omega_b)")]
    Unstable { max_real_eig: f64 },
    #[error("unphysical covariance matrix: {0}")]
    Unphysical(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("validity check failed: {0}")]
    Validity(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Derivation(_) => 3,
            CliError::Unstable { .. } => 4,
            CliError::Unphysical(_) => 5,
            CliError::Io(_) => 6,
            CliError::Validity(_) => 7,
        }
    }
}

impl From<SweepError> for CliError {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::InvalidSpec(_) | SweepError::UnknownPreset(_) => CliError::Config(e.to_string()),
            SweepError::Gaussian(GaussianError::Unphysical { .. }) => CliError::Unphysical(e.to_string()),
            SweepError::Linalg(LinalgError::Unstable { .. }) | SweepError::NoStablePoint { .. } => {
                CliError::Derivation(e.to_string())
            }
            SweepError::Csv(_) | SweepError::Io(_) => CliError::Io(e.to_string()),
            _ => CliError::Derivation(e.to_string()),
        }
    }
}
