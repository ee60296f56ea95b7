use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite result: {0}")]
    NonFinite(String),

    #[error("function evaluation failed at node {index} (x = {x}): value {value}")]
    Evaluation { index: usize, x: f64, value: f64 },

    #[error("eigenvalue iteration did not converge for index {index}")]
    NoConvergence { index: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unknown name `{name}`; available: {}", .available.join(", "))]
    UnknownName {
        name: String,
        available: Vec<String>,
    },

    #[error("rate fit failed: {0}")]
    Fit(String),

    #[error("no finite-rho prediction: {0}")]
    NoPrediction(String),
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > -1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "alpha must be finite and > -1, got {alpha}"
        )))
    }
}
