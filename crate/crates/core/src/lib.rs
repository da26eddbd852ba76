//! Cross cap singularities of maps `ℝ² → ℝ³`.
//!
//! The crate computes the canonical normal form of a cross cap, its intrinsic
//! invariants (from the map and from the induced metric alone), builds
//! isometric deformation families of degenerate quadratic cross caps from
//! spherical curves, redeploys ruled surfaces along new rulings, and checks
//! the polar curvature asymptotics near the singular point.
//!
//! All math is generic over [`Scalar`] (`f32` or `f64`); the type aliases at
//! the crate root fix `f64`, which is what the tolerances are calibrated for.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod deformation;
pub mod error;
pub mod invariants;
pub mod jet;
pub mod normalform;
pub mod numerics;
pub mod ruled;
pub mod scalar;
pub mod surface;
pub mod vec3;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Jet = jet::Jet2<f64>;
pub type VecJet = jet::Jet3<f64>;
pub type Surface = surface::SurfaceMap<f64>;
pub type Vector = vec3::Vec3<f64>;
pub type Matrix = vec3::Mat3<f64>;
pub type NormalForm = normalform::NormalForm<f64>;
pub type IntrinsicTriple = invariants::IntrinsicTriple<f64>;
pub type ComboQuadruple = invariants::ComboQuadruple<f64>;
pub type SphericalCurve = deformation::SphericalCurve<f64>;
pub type DeformationFamily = deformation::DeformationFamily<f64>;
pub type RuledSurface = ruled::RuledSurface<f64>;
pub type FrameCoefficients = ruled::FrameCoefficients<f64>;
