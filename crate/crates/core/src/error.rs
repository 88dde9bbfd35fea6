use thiserror::Error;

use crate::C64;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("nome |p| = {0} is outside the supported disc |p| < 0.9")]
    NomeTooLarge(f64),
    #[error("theta series did not reach tolerance within {0} terms")]
    NonConvergent(usize),
    #[error("invalid elliptic parameters: {0}")]
    InvalidParams(&'static str),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("dynamical pole: f({shift}) vanishes (basis state {state:#b})")]
    DynamicalPole { state: usize, shift: C64 },
    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("operation requires the trigonometric regime")]
    RegimeMismatch,
    #[error("singular coefficient: {0} vanishes")]
    SingularCoefficient(&'static str),
    #[error("coincident points: {0}")]
    CoincidentPoints(&'static str),
    #[error("R_{index} nearly vanishes at a residue assignment")]
    SingularR { index: usize },
    #[error("interpolation grid is degenerate")]
    GridDegenerate,
    #[error("x0 interpolation is ill-conditioned: held-out residual {0:e}")]
    InterpolationIllConditioned(f64),
    #[error("declared degree {declared} is below the polynomial degree {actual}")]
    DegreeMismatch { declared: usize, actual: usize },
    #[error("variable index {0} out of range")]
    IndexError(usize),
}
