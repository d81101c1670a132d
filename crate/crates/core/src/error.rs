use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of a scalar kernel.
    #[error("domain error: {0}")]
    Domain(String),

    /// A phase-space function was evaluated on one of its poles.
    #[error("singular point: {0}")]
    SingularPoint(String),

    /// A point or state lies outside the region covered by a chart.
    #[error("chart domain error: {0}")]
    ChartDomain(String),

    /// The requested decomposition variant does not exist on this space.
    #[error("variant unavailable: {0}")]
    VariantUnavailable(String),

    /// A Hamiltonian specification failed validation.
    #[error("invalid hamiltonian spec: {0}")]
    InvalidSpec(String),

    /// The adaptive integrator could not make progress.
    #[error("step failure at t = {t}: {reason}")]
    StepFailure { t: f64, reason: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
