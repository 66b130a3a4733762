use thiserror::Error;

/// Process exit code for a run in which every check passed.
pub const EXIT_PASS: i32 = 0;
/// Some asserted invariant failed.
pub const EXIT_INVARIANT: i32 = 2;
/// Structural, schema, usage or resource error.
pub const EXIT_ERROR: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config schema: {0}")]
    Schema(String),
    #[error("{0}")]
    Core(#[from] graphwh::Error),
    #[error("io: {0}")]
    Io(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("unknown command {0:?}")]
    UnknownCommand(String),
}

impl CliError {
    /// Machine-readable error code carried in reports.
    pub fn code(&self) -> String {
        match self {
            CliError::Schema(_) => "schema".into(),
            CliError::Io(_) => "io".into(),
            CliError::Usage(_) => "usage".into(),
            CliError::UnknownCommand(_) => "unknown_command".into(),
            CliError::Core(e) => match e {
                graphwh::Error::Structural(s) => format!("structural.{}", s.axiom()),
                graphwh::Error::EnumerationCap { .. } => "enumeration_cap".into(),
                graphwh::Error::DCapExceeded { .. } => "d_cap".into(),
                graphwh::Error::AverageOutsideUnitBall { .. } | graphwh::Error::SingularAverage { .. } => {
                    "inadmissible_parameters".into()
                }
                graphwh::Error::InvalidVertex { .. }
                | graphwh::Error::InvalidElement { .. }
                | graphwh::Error::IdentityLetter { .. } => "invalid_letter".into(),
                graphwh::Error::DimensionMismatch { .. } | graphwh::Error::NonFinite { .. } => "dimension".into(),
                _ => "numeric".into(),
            },
        }
    }
}
