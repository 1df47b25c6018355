use thiserror::Error;

/// Errors raised by the numerical kernels and the physics layers above them.
///
/// Payloads are carried as `f64` so the type stays independent of the scalar
/// a computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("quadrature did not converge: estimate {estimate:e}, error bound {error_bound:e}")]
    QuadratureNonConvergence { estimate: f64, error_bound: f64 },

    #[error("series did not converge after {terms} terms: partial sum {partial:e}, tail bound {tail_bound:e}")]
    SeriesNonConvergence {
        partial: f64,
        tail_bound: f64,
        terms: usize,
    },

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo:e}, f(hi) = {f_hi:e}")]
    NoBracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("root finder exhausted {iterations} iterations; bracket [{lo}, {hi}]")]
    RootNonConvergence { lo: f64, hi: f64, iterations: usize },

    #[error("grid axis {axis} has {points} points, at least {required} needed")]
    GridTooSmall {
        axis: usize,
        points: usize,
        required: usize,
    },

    #[error("grid shape mismatch: {0}")]
    Shape(String),

    #[error("Laguerre recurrence overflow at degree {n}, x = {x}")]
    Overflow { n: usize, x: f64 },

    #[error("argument r = {r} lies within {margin} of the turning point r = 4")]
    TurningPoint { r: f64, margin: f64 },

    #[error("asymptotic form requested below its validity floor: n = {n} < {floor}")]
    AsymptoticFloor { n: usize, floor: usize },

    #[error("square root turns complex: lambda*/Lambda = {ratio} exceeds the critical value {critical}")]
    ComplexRegime { ratio: f64, critical: f64 },

    #[error("gauge condition violated: divergence {divergence:e} exceeds {tolerance:e}")]
    Gauge { divergence: f64, tolerance: f64 },

    #[error("unstable step: {0}")]
    Stability(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
