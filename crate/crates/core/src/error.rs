use thiserror::Error;

pub type Result<T> = std::result::Result<T, MocError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MocError {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("matrix entry {index} is not finite")]
    NonFinite { index: usize },

    #[error("{property} check failed: residual {residual:.3e} exceeds {tolerance:.3e}")]
    Classification {
        property: &'static str,
        residual: f64,
        tolerance: f64,
    },

    #[error("{solver} did not converge (best residual {best_residual:.3e})")]
    Convergence {
        solver: &'static str,
        best_residual: f64,
    },

    #[error("capacity exceeded: {what} needs {needed} items, cap is {cap}")]
    Capacity {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("membership carries no certificate")]
    MissingCertificate,

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
}

impl MocError {
    /// Stable machine-readable code, used by reports and exit statuses.
    pub fn code(&self) -> &'static str {
        match self {
            MocError::Dimension(_) => "dimension",
            MocError::NonFinite { .. } => "non_finite",
            MocError::Classification { .. } => "classification",
            MocError::Convergence { .. } => "convergence",
            MocError::Capacity { .. } => "capacity",
            MocError::EmptyInput(_) => "empty_input",
            MocError::InvalidTolerance(_) => "invalid_tolerance",
            MocError::MissingCertificate => "missing_certificate",
            MocError::InvalidPermutation(_) => "invalid_permutation",
        }
    }
}

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(MocError::InvalidTolerance(tol))
    }
}
