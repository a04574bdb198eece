//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two paths that must share a grid do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// The operation is restricted (typically to one-dimensional paths).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A value that must sit on a lattice slice does not.
    #[error("off-lattice value {value} at step {step}")]
    OffLattice { step: usize, value: f64 },

    /// The lattice cannot carry the requested martingale dynamics.
    #[error("infeasible model: {0}")]
    Infeasible(String),

    /// A functional that must be concave along vertical perturbations is not.
    #[error("concavity violation: {0}")]
    ConcavityViolation(String),

    /// A size cap was exceeded (path trees, exact LP mode).
    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    /// Invalid configuration input.
    #[error("config error: {0}")]
    Config(String),

    /// The simplex failed to certify its solution.
    #[error("lp solve error: {0}")]
    Lp(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
