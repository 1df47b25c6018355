//! Shared numerical kernels: quadrature, series summation, root finding and
//! finite-difference stencils on uniform grids.

mod convergence;
mod fd;
mod grid;
mod quad;
mod root;
mod series;

pub use convergence::ConvergenceReport;
pub use fd::{fd_derivative, fd_mixed};
pub use grid::{Boundary, FieldValue, GridField};
pub use quad::{integrate, integrate_with_error, Quadrature};
pub use root::{find_root, find_root_with, RootMethod};
pub use series::{sum_series, SeriesReport};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Stopping rule shared by the iterative kernels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerance<T> {
    pub rel: T,
    pub abs: T,
    pub max_iter: usize,
}

impl<T: Real> Tolerance<T> {
    pub fn new(rel: T, abs: T, max_iter: usize) -> Result<Self> {
        let tol = Self { rel, abs, max_iter };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        let finite_nonneg = |x: T| x.is_finite() && x >= T::zero();
        if !finite_nonneg(self.rel) || !finite_nonneg(self.abs) {
            return Err(Error::InvalidInput(
                "tolerances must be finite and non-negative".into(),
            ));
        }
        if self.rel == T::zero() && self.abs == T::zero() {
            return Err(Error::InvalidInput(
                "at least one of rel, abs must be positive".into(),
            ));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidInput("max_iter must be at least 1".into()));
        }
        Ok(())
    }

    /// Acceptance threshold `max(abs, rel * |scale|)`.
    #[inline]
    pub fn threshold(&self, scale: T) -> T {
        self.abs.max(self.rel * scale.abs())
    }

    pub fn with_rel(mut self, rel: T) -> Self {
        self.rel = rel;
        self
    }

    pub fn with_abs(mut self, abs: T) -> Self {
        self.abs = abs;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }
}

impl<T: Real> Default for Tolerance<T> {
    fn default() -> Self {
        Self {
            rel: T::lit(1e-10),
            abs: T::lit(1e-14),
            max_iter: 2000,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_rejects_degenerate_settings() {
        assert!(Tolerance::<f64>::new(0.0, 0.0, 10).is_err());
        assert!(Tolerance::<f64>::new(1e-8, 0.0, 0).is_err());
        assert!(Tolerance::<f64>::new(-1.0, 1e-3, 5).is_err());
        assert!(Tolerance::<f64>::new(0.0, 1e-3, 1).is_ok());
    }

    #[test]
    fn threshold_takes_the_looser_bound() {
        let tol = Tolerance::<f64>::new(1e-3, 1e-6, 1).unwrap();
        assert_eq!(tol.threshold(10.0), 1e-2);
        assert_eq!(tol.threshold(1e-6), 1e-6);
    }
}
