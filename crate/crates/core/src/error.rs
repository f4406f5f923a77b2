use thiserror::Error;

/// Everything that can go wrong while building or checking a spectrum.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectraError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("negative radicand for {which}: {value}")]
    NegativeRadicand { which: &'static str, value: f64 },

    #[error("energy must be negative, got {0}")]
    NonNegativeEnergy(f64),

    #[error("structure function not positive at x = {x}: {value}")]
    PositivityViolation { x: f64, value: f64 },

    #[error("so(6) labels must satisfy mu1 >= mu2 >= mu3, got ({mu1}, {mu2}, {mu3})")]
    OrderingViolation { mu1: f64, mu2: f64, mu3: f64 },

    #[error("pole of the diagonal part at n = {n} ((n+u)^2 = 1/4)")]
    DiagonalPole { n: usize },

    #[error("Jacobi parameters must exceed -1, got a = {a}, b = {b}")]
    DomainError { a: f64, b: f64 },

    #[error("1F1(-{n}, {b}; x) has a pole in its truncated series")]
    ParameterPole { n: usize, b: f64 },

    #[error("polynomial index {index} is not a non-negative integer")]
    IndexError { index: f64 },

    #[error("eigenvalue {level} not converged: fine mesh {fine}, extrapolated {extrapolated}")]
    ConvergenceFailure {
        level: usize,
        fine: f64,
        extrapolated: f64,
    },

    #[error("no intersection for levels ({n1}, {n2}) in kappa range [{lo}, {hi}]")]
    NoIntersection { n1: usize, n2: usize, lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, SpectraError>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> SpectraError {
    SpectraError::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
