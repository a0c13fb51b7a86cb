//! Harmonic analysis on real hyperbolic space `H^d`, `d ∈ {2, 3}`, in the
//! Poincaré ball: Busemann functions and isometries, spherical functions and
//! the c-function, sampled test functions, the Helgason and Poisson
//! transforms, the joint-eigenspace transform `(H_x f)(λ) = (f × φ_λ)(x)`,
//! and numerical checks of their identities.

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod geometry;
pub mod paley_wiener;
pub mod quadrature;
pub mod sampling;
pub mod scenario;
pub mod spectral;
pub mod transforms;

pub use error::{Error, Result};
pub use geometry::{BoundaryPoint, Dim, Isometry, Point};
pub use quadrature::{BoundaryGrid, BoundarySize, RadialGrid, SpectralGrid};
pub use sampling::{BumpSpec, Profile, SampledFunction, SamplingGrids};
pub use spectral::CFitConfig;
pub use transforms::{JeftEvaluator, TransformField};
