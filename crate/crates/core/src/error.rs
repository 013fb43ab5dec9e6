use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or operation received an invalid parameter.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Field or cochain lengths do not match the grid or complex they are
    /// used with.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// Only the second-order diagonal-norm SBP operators are provided.
    #[error("unsupported SBP order {0}: only order 2 is available")]
    UnsupportedOrder(usize),

    /// The Newton iteration of an implicit step did not reach its tolerance.
    #[error(
        "Newton iteration did not converge: residual {residual:.3e} after \
         {iterations} iterations (tolerance {tolerance:.3e})"
    )]
    NewtonDiverged {
        residual: f64,
        iterations: usize,
        tolerance: f64,
    },

    /// A non-finite value was produced while stepping.
    #[error("non-finite value encountered at step {step}")]
    NonFinite { step: usize },

    /// A system specification is internally inconsistent.
    #[error("invalid system: {0}")]
    InvalidSystem(String),
}
