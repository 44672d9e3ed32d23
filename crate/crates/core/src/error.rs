use thiserror::Error;

/// Errors raised by the numerical library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CasimirError {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The model cannot supply a zero-frequency reflection rule.
    #[error("prescription required: {0}")]
    PrescriptionRequired(String),

    /// Tabulated data lacks a low-frequency extrapolation that carries significant weight.
    #[error("extrapolation required: low-frequency tail carries {tail_share:.3e} of the dispersion integral")]
    ExtrapolationRequired { tail_share: f64 },

    /// Unsupported geometry for the requested quantity.
    #[error("unsupported geometry: {0}")]
    UnsupportedGeometry(String),

    /// Quadrature or series did not reach the requested tolerance.
    #[error("no convergence: best estimate {best:.6e}, achieved relative error {achieved:.3e} (requested {requested:.3e})")]
    NonConvergence {
        best: f64,
        achieved: f64,
        requested: f64,
    },

    /// Malformed input data (tables, bounds, maps).
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, CasimirError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(CasimirError::Domain(msg.into()))
}

impl CasimirError {
    /// Process exit status for the command-line front end: 3 for numerical
    /// failures, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CasimirError::NonConvergence { .. } | CasimirError::ExtrapolationRequired { .. } => 3,
            _ => 2,
        }
    }
}
