//! Numerics for the five-dimensional picture of the Klein-Gordon equation.
//!
//! Every routine is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64` for the common case.

pub mod canonical;
pub mod error;
pub mod geometry;
pub mod numerics;
pub mod reduction;
pub mod scalar;
pub mod specfun;
pub mod spectrum;

pub use error::{Error, Result};
pub use scalar::{CompensatedSum, Real};

pub type Complex64 = num_complex::Complex<f64>;
pub type Scales = spectrum::ScaleSet<f64>;
pub type Scales32 = spectrum::ScaleSet<f32>;
pub type Tol = numerics::Tolerance<f64>;
pub type RealGrid = numerics::GridField<f64, f64>;
pub type ComplexGrid = numerics::GridField<Complex64, f64>;
pub type Partition = canonical::PartitionResult<f64>;
pub type Curve = canonical::DensityCurve<f64>;
pub type Metric = geometry::MetricPatch<f64>;
pub type Convergence = numerics::ConvergenceReport<f64>;
