use thiserror::Error;

use crate::geometry::Dim;

/// Errors raised by the geometry, quadrature and transform layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch { expected: Dim, found: Dim },

    #[error("point {0:?} is not strictly inside the unit ball")]
    OutsideBall([f64; 3]),

    #[error("isometry pushed a point outside the closed ball (|x| = {0})")]
    Escaped(f64),

    #[error("c-function has a pole at lambda = 0")]
    Pole,

    #[error("c-function fit is ill-conditioned (|det| = {det:e}) at radii ({r1}, {r2})")]
    FitIllConditioned { det: f64, r1: f64, r2: f64 },

    #[error("function is not K-invariant (angular spread {0:e})")]
    NotKInvariant(f64),

    #[error("off-grid evaluation requires an analytic descriptor")]
    NoAnalyticForm,

    #[error("exponent out of range: |Im lambda| * R = {0} exceeds the guard")]
    Range(f64),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("type fit failed: {0}")]
    Fit(String),

    #[error("unsupported operation: {0}")]
    Unsupported(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
