use thiserror::Error;

/// Errors surfaced by the model layer.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A constructor or operation received an out-of-domain value.
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    /// The steady-state solver could not reach the required residual.
    #[error("steady-state solver did not converge (relative residual {residual:.3e})")]
    SolverResidual { residual: f64 },

    /// A linear system came out singular (e.g. Γ_m = 0 exactly).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Finite-difference step collapsed below representable resolution.
    #[error("finite-difference step underflow (step {0:.3e} rad/s)")]
    StepUnderflow(f64),
}

impl Error {
    pub fn parameter(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
