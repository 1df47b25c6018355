use std::cell::RefCell;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{integrate_with_error, Quadrature, Tolerance};
use crate::scalar::Real;
use crate::specfun::whittaker_m_half;

/// Integrates a fallible integrand, surfacing the first evaluation error.
pub(crate) fn integrate_fallible<T, F>(f: F, a: T, b: T, tol: &Tolerance<T>) -> Result<Quadrature<T>>
where
    T: Real,
    F: Fn(T) -> Result<T>,
{
    let failure = RefCell::new(None);
    let q = integrate_with_error(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                T::zero()
            }
        },
        a,
        b,
        tol,
    );
    match failure.into_inner() {
        Some(e) => Err(e),
        None => q,
    }
}

fn check_index(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput("level index n must be >= 1".into()));
    }
    Ok(())
}

fn check_radius<T: Real>(r: T) -> Result<()> {
    if !(r.is_finite() && r >= T::zero()) {
        return Err(Error::InvalidInput(format!("radius must be finite and >= 0, got {r}")));
    }
    Ok(())
}

/// Radial level density
/// `D_n(r) = 4 r^2 / (n^3 rho^3) [M'^2 - M M''](2r / (n rho))` with
/// `M = M_{n,1/2}`. Integrates to `n^2` over `[0, inf)`.
pub fn dn_density<T: Real>(n: usize, r: T, rho: T) -> Result<T> {
    check_index(n)?;
    check_radius(r)?;
    if !(rho > T::zero() && rho.is_finite()) {
        return Err(Error::InvalidInput(format!("rho must be positive, got {rho}")));
    }
    let nf = T::from_count(n);
    let x = T::lit(2.0) * r / (nf * rho);
    let w = whittaker_m_half(n, x)?;
    let k = r / rho;
    Ok((T::lit(4.0) * k * k / (nf * nf * nf * rho) * w.wronskian_combo).max(T::zero()))
}

/// `D_n(r n^2)` in units where `rho / 2 = 1`:
/// `(r^2 n / 2) [M'^2 - M M''](r n)`. Integrates to 1.
pub fn dn_scaled<T: Real>(n: usize, r: T) -> Result<T> {
    check_index(n)?;
    check_radius(r)?;
    let nf = T::from_count(n);
    let w = whittaker_m_half(n, r * nf)?;
    Ok((r * r * nf * T::lit(0.5) * w.wronskian_combo).max(T::zero()))
}

/// Large-`n` limit of [`dn_scaled`]: `r^{3/2} sqrt(4 - r) / (4 pi)` on
/// `[0, 4)`, zero beyond.
pub fn universal_d<T: Real>(r: T) -> T {
    let four = T::lit(4.0);
    if !(r > T::zero()) || r >= four {
        return T::zero();
    }
    r * r.sqrt() * (four - r).sqrt() / (four * T::PI())
}

/// `n^2 int_0^{R/n^2} D(r) dr`, the degeneracy left inside radius `R`
/// (units `rho / 2 = 1`) in the universal approximation.
pub fn universal_trapped_degeneracy<T: Real>(n: usize, radius: T, tol: &Tolerance<T>) -> Result<T> {
    check_index(n)?;
    check_radius(radius)?;
    let nf = T::from_count(n);
    let upper = (radius / (nf * nf)).min(T::lit(4.0));
    let q = integrate_with_error(universal_d, T::zero(), upper, tol)?;
    Ok(nf * nf * q.value)
}

/// Large-`n` form `R^{5/2} / (5 pi n^3)` of [`universal_trapped_degeneracy`].
pub fn degeneracy_tail_limit<T: Real>(n: usize, radius: T) -> T {
    let nf = T::from_count(n);
    radius.powf(T::lit(2.5)) / (T::lit(5.0) * T::PI() * nf * nf * nf)
}

/// `int_0^{R} D_n(r) dr` for `R` in units of `rho / 2`, computed as
/// `n^2 int_0^{R/n^2} dn_scaled`. Lies in `[0, n^2]`.
pub fn trapped_degeneracy<T: Real>(n: usize, radius: T, tol: &Tolerance<T>) -> Result<T> {
    check_index(n)?;
    check_radius(radius)?;
    let nf = T::from_count(n);
    let upper = radius / (nf * nf);
    // The scaled density is concentrated on [0, 4]; split there so the
    // oscillatory part and the exponential tail are resolved separately.
    let four = T::lit(4.0);
    let mut total = T::zero();
    let mut lo = T::zero();
    for hi in [upper.min(four), upper] {
        if hi > lo {
            total += integrate_fallible(|r| dn_scaled(n, r), lo, hi, tol)?.value;
            lo = hi;
        }
    }
    Ok((nf * nf * total).min(nf * nf).max(T::zero()))
}

/// Integral over `[0, inf)` with the truncation error made explicit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Normalization<T> {
    pub value: T,
    /// Quadrature error estimate over the integrated range.
    pub quadrature_error: T,
    /// Bound on the neglected `int_{upper}^inf`.
    pub tail_bound: T,
    pub upper: T,
}

/// Integrates `f` over consecutive chunks of length `chunk` until the
/// geometric decay of the chunk integrals bounds the remainder below
/// `tol.threshold(total)`.
fn integrate_to_infinity<T, F>(f: F, chunk: T, tol: &Tolerance<T>) -> Result<Normalization<T>>
where
    T: Real,
    F: Fn(T) -> Result<T>,
{
    let mut total = T::zero();
    let mut error = T::zero();
    let mut prev = T::infinity();
    let mut lo = T::zero();
    for _ in 0..64 {
        let hi = lo + chunk;
        let q = integrate_fallible(&f, lo, hi, tol)?;
        total += q.value;
        error += q.error;
        lo = hi;
        let ratio = q.value / prev;
        let first = prev.is_infinite();
        prev = q.value;
        // Past the turning point each chunk shrinks by a fixed factor, so
        // the remainder is at most q * ratio / (1 - ratio).
        if !first && ratio < T::lit(0.5) {
            let tail = q.value * ratio / (T::one() - ratio);
            if tail <= tol.threshold(total) {
                return Ok(Normalization { value: total, quadrature_error: error, tail_bound: tail, upper: lo });
            }
        }
    }
    Err(Error::QuadratureNonConvergence {
        estimate: total.to_f64_lossy(),
        error_bound: prev.to_f64_lossy(),
    })
}

/// `int_0^inf D_n(r) dr`, expected to equal `n^2`. Chunks have length
/// `8 n^2 rho`.
pub fn density_normalization<T: Real>(n: usize, rho: T, tol: &Tolerance<T>) -> Result<Normalization<T>> {
    check_index(n)?;
    let nf = T::from_count(n);
    integrate_to_infinity(|r| dn_density(n, r, rho), T::lit(8.0) * nf * nf * rho, tol)
}

/// `int_0^inf D_n(r n^2) dr`, expected to equal 1.
pub fn scaled_normalization<T: Real>(n: usize, tol: &Tolerance<T>) -> Result<Normalization<T>> {
    check_index(n)?;
    integrate_to_infinity(|r| dn_scaled(n, r), T::lit(16.0), tol)
}

/// Samples of `D_n(r n^2)` on a grid of `r` (units `rho / 2 = 1`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityCurve<T> {
    pub n: usize,
    pub samples: Vec<(T, T)>,
}

/// Rescaled densities for each `n` on a common grid within `[0, 5]`.
pub fn figure1_curves<T: Real>(n_list: &[usize], r_grid: &[T]) -> Result<Vec<DensityCurve<T>>> {
    if let Some(&r) = r_grid.iter().find(|&&r| !(r >= T::zero() && r <= T::lit(5.0))) {
        return Err(Error::InvalidInput(format!("figure grid point {r} outside [0, 5]")));
    }
    n_list
        .iter()
        .map(|&n| {
            let samples = r_grid
                .iter()
                .map(|&r| Ok((r, dn_scaled(n, r)?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(DensityCurve { n, samples })
        })
        .collect()
}

/// Uniform grid with `points` samples on `[lo, hi]`.
pub fn uniform_grid<T: Real>(lo: T, hi: T, points: usize) -> Vec<T> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / T::from_count(points - 1);
            (0..points).map(|i| lo + step * T::from_count(i)).collect()
        }
    }
}

/// `max |D_n(r n^2) - D(r)|` over the given grid.
pub fn universal_sup_distance<T: Real>(n: usize, r_grid: &[T]) -> Result<T> {
    r_grid.iter().try_fold(T::zero(), |acc, &r| {
        Ok(acc.max((dn_scaled(n, r)? - universal_d(r)).abs()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance<f64> {
        Tolerance::new(1e-12, 0.0, 4000).unwrap()
    }

    #[test]
    fn ground_level_closed_forms() {
        for r in [0.0f64, 0.3, 1.0, 2.7, 9.0] {
            let exact = 4.0 * r * r * (-2.0 * r).exp();
            assert!((dn_density(1, r, 1.0).unwrap() - exact).abs() < 1e-14);
            let scaled = r * r * (-r).exp() / 2.0;
            assert!((dn_scaled(1, r).unwrap() - scaled).abs() < 1e-14);
        }
    }

    #[test]
    fn density_vanishes_at_origin() {
        for n in [1, 2, 7, 100, 1000] {
            assert_eq!(dn_density(n, 0.0f64, 1.5).unwrap(), 0.0);
            assert_eq!(dn_scaled(n, 0.0f64).unwrap(), 0.0);
        }
    }

    #[test]
    fn physical_and_scaled_forms_agree() {
        let rho = 3.0f64;
        for n in [1usize, 4, 13] {
            for r in [0.2f64, 1.1, 3.5, 4.4] {
                let nn = (n * n) as f64;
                let phys = dn_density(n, r * nn * rho / 2.0, rho).unwrap() * rho / 2.0;
                let scaled = dn_scaled(n, r).unwrap();
                assert!((phys - scaled).abs() <= 1e-12 * scaled.abs().max(1e-300), "{n} {r} {phys} {scaled}");
            }
        }
    }

    #[test]
    fn second_level_normalizes_to_four() {
        let q = density_normalization(2, 1.0f64, &tol()).unwrap();
        assert!((q.value - 4.0).abs() < 1e-8, "{}", q.value);
        assert!(q.tail_bound < 1e-10);
    }

    #[test]
    fn universal_function_values() {
        assert!((universal_d(2.0f64) - std::f64::consts::FRAC_1_PI).abs() < 1e-15);
        assert_eq!(universal_d(4.0f64), 0.0);
        assert_eq!(universal_d(7.5f64), 0.0);
        assert_eq!(universal_d(0.0f64), 0.0);
        let q = integrate_with_error(universal_d, 0.0f64, 4.0, &tol()).unwrap();
        assert!((q.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn trapped_degeneracy_bounds() {
        for n in [1usize, 3, 20] {
            let nn = (n * n) as f64;
            let full = trapped_degeneracy(n, 1e4, &tol()).unwrap();
            assert!((full - nn).abs() < 1e-8 * nn);
            let part = trapped_degeneracy(n, 2.0, &tol()).unwrap();
            assert!(part > 0.0 && part < nn);
        }
    }

    #[test]
    fn universal_tail_approaches_limit() {
        let radius = 9.0f64;
        let mut last = f64::INFINITY;
        for n in [30usize, 60, 120] {
            let v = universal_trapped_degeneracy(n, radius, &tol()).unwrap();
            let lim = degeneracy_tail_limit(n, radius);
            let rel = (v - lim).abs() / lim;
            assert!(rel < last);
            last = rel;
        }
        assert!(last < 1e-3);
    }

    #[test]
    fn figure_curves_start_at_zero() {
        let grid = uniform_grid(0.0f64, 5.0, 101);
        let curves = figure1_curves(&[1, 10, 100], &grid).unwrap();
        for c in &curves {
            assert_eq!(c.samples[0].1, 0.0);
            assert!(c.samples.iter().all(|&(_, v)| v >= 0.0));
        }
        for &(r, v) in &curves[0].samples {
            assert!((v - r * r * (-r).exp() / 2.0).abs() < 1e-10);
        }
        assert!(figure1_curves(&[1], &[5.5f64]).is_err());
    }
}
