use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Residuals measured on a sequence of refined steps.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport<T> {
    pub steps: Vec<T>,
    pub residuals: Vec<T>,
    /// Observed order between consecutive refinements.
    pub orders: Vec<T>,
}

impl<T: Real> ConvergenceReport<T> {
    pub fn new(steps: Vec<T>, residuals: Vec<T>) -> Result<Self> {
        if steps.len() != residuals.len() || steps.len() < 2 {
            return Err(Error::Shape(format!(
                "need matching step/residual lists of length >= 2, got {} and {}",
                steps.len(),
                residuals.len()
            )));
        }
        let orders = steps
            .windows(2)
            .zip(residuals.windows(2))
            .map(|(h, r)| (r[0] / r[1]).ln() / (h[0] / h[1]).ln())
            .collect();
        Ok(Self { steps, residuals, orders })
    }

    /// Smallest observed order; NaN orders (zero residuals) count as failing.
    pub fn min_order(&self) -> T {
        self.orders
            .iter()
            .fold(T::infinity(), |acc, &p| if p.is_nan() { T::neg_infinity() } else { acc.min(p) })
    }

    /// True when every refinement either reaches `order` or lands at or
    /// below `floor`. Identities that hold exactly in the discretisation
    /// stay at rounding level and have no meaningful order.
    pub fn meets_order(&self, order: T, floor: T) -> bool {
        self.orders
            .iter()
            .zip(&self.residuals[1..])
            .all(|(&p, &r)| r <= floor || p >= order)
    }

    pub fn finest_residual(&self) -> T {
        *self.residuals.last().expect("at least two residuals")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_decay_has_order_two() {
        let h = vec![0.1f64, 0.05, 0.025];
        let r: Vec<f64> = h.iter().map(|x| 3.0 * x * x).collect();
        let rep = ConvergenceReport::new(h, r).unwrap();
        assert!((rep.min_order() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rounding_floor_counts_as_converged() {
        let rep = ConvergenceReport::new(vec![0.1f64, 0.05, 0.025], vec![1e-15, 2e-15, 1e-15]).unwrap();
        assert!(!(rep.min_order() >= 1.9));
        assert!(rep.meets_order(1.9, 1e-12));
        let slow = ConvergenceReport::new(vec![0.1f64, 0.05], vec![1e-2, 6e-3]).unwrap();
        assert!(!slow.meets_order(1.9, 1e-12));
    }

    #[test]
    fn rejects_short_or_mismatched_input() {
        assert!(ConvergenceReport::new(vec![0.1f64], vec![1.0]).is_err());
        assert!(ConvergenceReport::new(vec![0.1f64, 0.05], vec![1.0]).is_err());
    }
}
