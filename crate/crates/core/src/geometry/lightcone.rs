use serde::Serialize;

use super::potential::{eta, lorentz_divergence, verify_gauge, Gauge, Potential};
use crate::error::Result;
use crate::numerics::ConvergenceReport;
use crate::scalar::Real;

const FIFTH: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LightconeReport<T> {
    pub step: T,
    /// Max over the points of `|composed - expanded|`.
    pub max_residual: T,
    /// Max of `|composed|`, for scale.
    pub max_operator: T,
}

fn shifted<T: Real>(x: &[T; 5], axis: usize, by: T) -> [T; 5] {
    let mut y = *x;
    y[axis] = y[axis] + by;
    y
}

fn spacetime<T: Real>(x: &[T; 5]) -> [T; 4] {
    [x[0], x[1], x[2], x[3]]
}

/// Central first difference along `axis`.
fn d1<T: Real, F: Fn(&[T; 5]) -> T>(f: &F, x: &[T; 5], axis: usize, h: T) -> T {
    (f(&shifted(x, axis, h)) - f(&shifted(x, axis, -h))) / (T::lit(2.0) * h)
}

/// Central second difference along `axis`.
fn d2<T: Real, F: Fn(&[T; 5]) -> T>(f: &F, x: &[T; 5], axis: usize, h: T) -> T {
    (f(&shifted(x, axis, h)) - T::lit(2.0) * f(x) + f(&shifted(x, axis, -h))) / (h * h)
}

/// Central mixed difference `d_a d_b`, `a != b`.
fn d11<T: Real, F: Fn(&[T; 5]) -> T>(f: &F, x: &[T; 5], a: usize, b: usize, h: T) -> T {
    let pp = f(&shifted(&shifted(x, a, h), b, h));
    let pm = f(&shifted(&shifted(x, a, h), b, -h));
    let mp = f(&shifted(&shifted(x, a, -h), b, h));
    let mm = f(&shifted(&shifted(x, a, -h), b, -h));
    (pp - pm - mp + mm) / (T::lit(4.0) * h * h)
}

/// Second derivative along the direction `u` (unit-free, not normalised).
fn directional2<T: Real, F: Fn(&[T; 5]) -> T>(f: &F, x: &[T; 5], u: &[T; 5], h: T) -> T {
    let at = |s: T| {
        let y: [T; 5] = std::array::from_fn(|i| x[i] + s * u[i]);
        f(&y)
    };
    (at(h) - T::lit(2.0) * at(T::zero()) + at(-h)) / (h * h)
}

/// Compares the factored operator
/// `(d^mu - a A^mu d_5)(d_mu - a A_mu d_5) f + d_5^2 f`, built by composing
/// first-difference operators, with its expansion in light-cone variables
/// `y^0 = x^5 - x^0`, `y^5 = (x^0 + x^5)/2`:
///
/// `2 d_{y0} d_{y5} f + 2a A_0 d_0 d_5 f - a^2 A_0^2 d_5^2 f
///  + sum_j (d_j^2 f - 2a A_j d_j d_5 f + a^2 A_j^2 d_5^2 f) - a (d_mu A^mu) d_5 f`.
///
/// `a` is `q/c^2`. The declared `gauge` is checked on the sample points
/// before anything is evaluated.
pub fn lightcone_em_expansion_residual<T, F, P>(
    field: F,
    potential: &P,
    coupling: T,
    gauge: Gauge,
    points: &[[T; 5]],
    step: T,
) -> Result<LightconeReport<T>>
where
    T: Real,
    F: Fn(&[T; 5]) -> T,
    P: Potential<T> + ?Sized,
{
    let scale = points.iter().fold(T::one(), |s, x| {
        potential.gradient(&spacetime(x)).iter().flatten().fold(s, |s, g| s.max(g.abs()))
    });
    verify_gauge(potential, gauge, points.iter().map(spacetime), T::lit(1e-10) * scale)?;

    let a = coupling;
    let h = step;
    let two = T::lit(2.0);
    // (d_mu - a A_mu d_5) g at y, for any g.
    let cov = |g: &dyn Fn(&[T; 5]) -> T, y: &[T; 5], mu: usize| -> T {
        let am = potential.value(&spacetime(y))[mu];
        d1(&g, y, mu, h) - a * am * d1(&g, y, FIFTH, h)
    };

    // Light-cone basis vectors in x coordinates: d_{y0} = (-d_0 + d_5)/2,
    // d_{y5} = d_0 + d_5. Their product is recovered by polarisation.
    let e0: [T; 5] = [-T::lit(0.5), T::zero(), T::zero(), T::zero(), T::lit(0.5)];
    let e5: [T; 5] = [T::one(), T::zero(), T::zero(), T::zero(), T::one()];
    let sum: [T; 5] = std::array::from_fn(|i| e0[i] + e5[i]);
    let diff: [T; 5] = std::array::from_fn(|i| e0[i] - e5[i]);

    let mut report = LightconeReport { step, max_residual: T::zero(), max_operator: T::zero() };
    for x in points {
        let mut composed = d2(&field, x, FIFTH, h);
        for mu in 0..4 {
            let inner = |y: &[T; 5]| cov(&field, y, mu);
            composed = composed + eta::<T>(mu) * cov(&inner, x, mu);
        }

        let xs = spacetime(x);
        let av = potential.value(&xs);
        let div = lorentz_divergence(&potential.gradient(&xs));
        let f55 = d2(&field, x, FIFTH, h);
        let y05 = (directional2(&field, x, &sum, h) - directional2(&field, x, &diff, h)) / T::lit(4.0);
        let mut expanded = two * y05
            + two * a * av[0] * d11(&field, x, 0, FIFTH, h)
            - a * a * av[0] * av[0] * f55
            - a * div * d1(&field, x, FIFTH, h);
        for j in 1..4 {
            expanded = expanded + d2(&field, x, j, h) - two * a * av[j] * d11(&field, x, j, FIFTH, h)
                + a * a * av[j] * av[j] * f55;
        }

        report.max_residual = report.max_residual.max((composed - expanded).abs());
        report.max_operator = report.max_operator.max(composed.abs());
    }
    Ok(report)
}

/// [`lightcone_em_expansion_residual`] at `levels` steps halving from
/// `base_step`.
pub fn lightcone_convergence<T, F, P>(
    field: F,
    potential: &P,
    coupling: T,
    gauge: Gauge,
    points: &[[T; 5]],
    base_step: T,
    levels: usize,
) -> Result<ConvergenceReport<T>>
where
    T: Real,
    F: Fn(&[T; 5]) -> T,
    P: Potential<T> + ?Sized,
{
    let mut steps = Vec::with_capacity(levels);
    let mut residuals = Vec::with_capacity(levels);
    let mut h = base_step;
    for _ in 0..levels {
        residuals.push(lightcone_em_expansion_residual(&field, potential, coupling, gauge, points, h)?.max_residual);
        steps.push(h);
        h = h * T::lit(0.5);
    }
    ConvergenceReport::new(steps, residuals)
}
