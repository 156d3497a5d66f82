//! Jacobi elliptic and theta functions, the elliptic solutions of the
//! semi-discrete and discrete sine-Gordon equations, and the discrete curves,
//! semi-discrete surfaces and discrete K-surfaces built from them.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64`. The [`verify`] suites run in `f64` only.

pub mod elliptic;
pub mod error;
pub mod frames;
pub mod ksurf;
pub mod linalg;
pub mod real;
pub mod sg;
pub mod surfaces;
pub mod tau;
pub mod theta;
pub mod verify;

pub use error::{Error, Result};
pub use real::Real;

pub type Modulus = elliptic::EllipticModulus<f64>;
pub type Vec3 = linalg::Vec3<f64>;
pub type Frame = frames::Frame<f64>;
pub type Su2 = frames::Su2<f64>;
pub type HalfAngle = sg::HalfAngle<f64>;
pub type SemiDiscreteParams = sg::SemiDiscreteParams<f64>;
pub type DiscreteParams = sg::DiscreteParams<f64>;
pub type SurfaceParams = surfaces::SurfaceParams<f64>;
pub type CurveSnapshot = surfaces::CurveSnapshot<f64>;
pub type TauContext = tau::TauContext<f64>;
pub type KParams = ksurf::KParams<f64>;
pub type KGrid = ksurf::KGrid<f64>;
