use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the region where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A truncated series did not settle below its tail threshold.
    #[error("series did not converge: final increment {increment:e} exceeds {tail_tol:e} at order {max_order}")]
    NonConvergence {
        increment: f64,
        tail_tol: f64,
        max_order: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Short machine-readable tag used in reports and exit-code mapping.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::NonConvergence { .. } => "non_convergence",
            Error::InvalidArgument(_) => "invalid_argument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
