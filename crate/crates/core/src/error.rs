use thiserror::Error;

/// Errors raised by the circular filtering library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A complex argument lies outside the supported evaluation range.
    #[error("argument outside working range: {0}")]
    Range(String),

    /// A first circular moment with modulus 0 or >= 1 cannot be matched by a
    /// wrapped normal or von Mises density.
    #[error("degenerate circular moment |m1| = {modulus}")]
    DegenerateMoment { modulus: f64 },

    /// The renormalized product of two densities is uniform (antipodal von
    /// Mises cancellation).
    #[error("degenerate product: concentration vectors cancel")]
    DegenerateProduct,

    /// The (|m1|, |m2|) pair admits no five-component symmetric approximation.
    #[error("infeasible moments for five-component sampling: {0}")]
    InfeasibleMoments(String),

    /// Every sampled likelihood value vanished.
    #[error("likelihood is zero at every sample position")]
    ZeroLikelihood,

    /// The progressive update could not advance.
    #[error("progressive update stalled: {0}")]
    ProgressionStall(String),

    /// Particle weights collapsed.
    #[error("particle weights degenerated")]
    ParticleDegeneracy,

    /// Generic numerical breakdown (non-positive covariance, projection at the
    /// origin, NaN, ...).
    #[error("numerical error: {0}")]
    Numerical(String),

    /// The requested combination of state representation and operation is not
    /// supported.
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
