//! Series summation driven by caller-supplied remainder bounds.

use serde::Serialize;

use super::Tolerance;
use crate::scalar::{CompensatedSum, Real};

/// Outcome of [`sum_series`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesReport<T> {
    pub value: T,
    pub terms_used: usize,
    pub tail_bound: T,
    pub converged: bool,
}

impl<T: Real> SeriesReport<T> {
    /// A finite sum with no remainder.
    pub fn exact(value: T, terms_used: usize) -> Self {
        Self {
            value,
            terms_used,
            tail_bound: T::zero(),
            converged: true,
        }
    }
}

/// Sums `term(1) + term(2) + ...`, stopping at the first `n` where
/// `tail_bound(n)`, an upper bound on `|sum_{k>n} term(k)|`, drops under
/// `tol.threshold(partial_sum)`.
///
/// Exhausting `tol.max_iter` terms is not an error: the report comes back with
/// `converged = false` and the best partial sum.
pub fn sum_series<T, F, B>(term: F, tail_bound: B, tol: &Tolerance<T>) -> SeriesReport<T>
where
    T: Real,
    F: Fn(usize) -> T,
    B: Fn(usize) -> T,
{
    let mut acc = CompensatedSum::new();
    let mut last_bound = T::infinity();
    for n in 1..=tol.max_iter.max(1) {
        acc.add(term(n));
        let bound = tail_bound(n).abs();
        last_bound = bound;
        if bound <= tol.threshold(acc.value()) {
            return SeriesReport {
                value: acc.value(),
                terms_used: n,
                tail_bound: bound,
                converged: true,
            };
        }
    }
    SeriesReport {
        value: acc.value(),
        terms_used: tol.max_iter.max(1),
        tail_bound: last_bound,
        converged: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol(rel: f64, abs: f64, max_iter: usize) -> Tolerance<f64> {
        Tolerance::new(rel, abs, max_iter).unwrap()
    }

    #[test]
    fn zero_series_stops_immediately() {
        let r = sum_series(|_| 0.0, |_| 0.0, &tol(1e-10, 1e-12, 10));
        assert_eq!(r.value, 0.0);
        assert_eq!(r.terms_used, 1);
        assert!(r.converged);
    }

    #[test]
    fn exhausted_budget_is_reported() {
        let r = sum_series(
            |n| 1.0 / (n as f64).powi(2),
            |n| 1.0 / n as f64,
            &tol(1e-12, 0.0, 50),
        );
        assert!(!r.converged);
        assert_eq!(r.terms_used, 50);
        assert!((r.tail_bound - 0.02).abs() < 1e-15);
    }

    #[test]
    fn converged_report_satisfies_its_own_threshold() {
        let t = tol(1e-9, 0.0, 100_000);
        let r = sum_series(
            |n| 1.0 / (n as f64).powi(4),
            |n| 1.0 / (3.0 * (n as f64).powi(3)),
            &t,
        );
        assert!(r.converged);
        assert!(r.tail_bound <= t.threshold(r.value));
    }
}
