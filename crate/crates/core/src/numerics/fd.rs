//! Second-order finite-difference derivatives along grid axes.

use super::grid::{Boundary, FieldValue, GridField};
use crate::error::{Error, Result};
use crate::scalar::Real;

const MIN_POINTS: usize = 5;

/// First (`order = 1`) or second (`order = 2`) derivative along `axis`.
///
/// Central differences in the interior; periodic grids wrap around, other
/// grids use second-order one-sided stencils at the two faces.
pub fn fd_derivative<T, S>(field: &GridField<S, T>, axis: usize, order: u8) -> Result<GridField<S, T>>
where
    T: Real,
    S: FieldValue<T>,
{
    if axis >= field.ndim() {
        return Err(Error::Shape(format!(
            "axis {axis} out of range for a {}-d grid",
            field.ndim()
        )));
    }
    if order != 1 && order != 2 {
        return Err(Error::InvalidInput(format!(
            "derivative order must be 1 or 2, got {order}"
        )));
    }
    let n = field.shape()[axis];
    if n < MIN_POINTS {
        return Err(Error::GridTooSmall {
            axis,
            points: n,
            required: MIN_POINTS,
        });
    }

    let h = field.step()[axis];
    let stride = field.stride(axis);
    let src = field.values();
    let mut out = vec![S::zero(); src.len()];
    let periodic = field.boundary() == Boundary::Periodic;
    let half = T::lit(0.5);
    let inv_h = T::one() / h;
    let inv_h2 = inv_h * inv_h;
    let two = T::lit(2.0);

    // Every line along `axis` starts at an index whose `axis` coordinate is 0.
    let block = stride * n;
    for base_block in (0..src.len()).step_by(block) {
        for offset in 0..stride {
            let start = base_block + offset;
            let at = |i: usize| src[start + i * stride];
            for i in 0..n {
                let value = if i > 0 && i + 1 < n || periodic {
                    let ip = if i + 1 < n { i + 1 } else { 0 };
                    let im = if i > 0 { i - 1 } else { n - 1 };
                    if order == 1 {
                        (at(ip) - at(im)) * (half * inv_h)
                    } else {
                        (at(ip) - at(i) * two + at(im)) * inv_h2
                    }
                } else {
                    // One-sided, second order; `sign` flips the stencil at the far face.
                    let (f0, f1, f2, f3, sign) = if i == 0 {
                        (at(0), at(1), at(2), at(3), T::one())
                    } else {
                        (at(n - 1), at(n - 2), at(n - 3), at(n - 4), -T::one())
                    };
                    if order == 1 {
                        (f1 * T::lit(4.0) - f0 * T::lit(3.0) - f2) * (half * inv_h * sign)
                    } else {
                        (f0 * two - f1 * T::lit(5.0) + f2 * T::lit(4.0) - f3) * inv_h2
                    }
                };
                out[start + i * stride] = value;
            }
        }
    }
    field.with_values(out)
}

/// Mixed second derivative along two distinct axes, as the composition of
/// two first derivatives (the standard cross stencil in the interior).
pub fn fd_mixed<T, S>(field: &GridField<S, T>, a: usize, b: usize) -> Result<GridField<S, T>>
where
    T: Real,
    S: FieldValue<T>,
{
    if a == b {
        return fd_derivative(field, a, 2);
    }
    fd_derivative(&fd_derivative(field, a, 1)?, b, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(n: usize, h: f64, boundary: Boundary, f: impl Fn(f64) -> f64) -> GridField<f64, f64> {
        GridField::from_fn(&[n], &[h], &[0.0], boundary, |x| f(x[0])).unwrap()
    }

    #[test]
    fn second_derivative_of_quadratic_is_exact_everywhere() {
        let g = line(9, 0.3, Boundary::Absorbing, |x| x * x);
        let d2 = fd_derivative(&g, 0, 2).unwrap();
        for v in d2.values() {
            assert!((v - 2.0).abs() < 1e-11, "{v}");
        }
        let d1 = fd_derivative(&g, 0, 1).unwrap();
        for (i, v) in d1.values().iter().enumerate() {
            assert!((v - 2.0 * 0.3 * i as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_field_has_zero_derivative() {
        let g = line(7, 0.1, Boundary::Absorbing, |_| 3.5);
        for order in [1, 2] {
            assert!(fd_derivative(&g, 0, order).unwrap().max_abs() < 1e-12);
        }
    }

    #[test]
    fn too_few_points() {
        let g = line(4, 0.1, Boundary::Absorbing, |x| x);
        assert!(matches!(
            fd_derivative(&g, 0, 1),
            Err(Error::GridTooSmall { points: 4, .. })
        ));
    }

    #[test]
    fn sine_converges_at_second_order() {
        let errs: Vec<f64> = [0.1, 0.05, 0.025]
            .iter()
            .map(|&h| {
                let n = (2.0f64 / h).round() as usize + 1;
                let g = line(n, h, Boundary::Absorbing, f64::sin);
                let d = fd_derivative(&g, 0, 1).unwrap();
                d.values()
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v - (i as f64 * h).cos()).abs())
                    .fold(0.0, f64::max)
            })
            .collect();
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order >= 1.9, "order {order}");
        }
    }

    #[test]
    fn periodic_wraps() {
        let n = 32;
        let h = std::f64::consts::TAU / n as f64;
        let g = line(n, h, Boundary::Periodic, f64::sin);
        let d2 = fd_derivative(&g, 0, 2).unwrap();
        // Exact symbol of the 3-point Laplacian on a Fourier mode.
        let symbol = (2.0 * (h.cos() - 1.0)) / (h * h);
        for (i, v) in d2.values().iter().enumerate() {
            assert!((v - symbol * (i as f64 * h).sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn mixed_derivative_of_bilinear_term() {
        let g = GridField::<f64, f64>::from_fn(
            &[6, 7],
            &[0.2, 0.3],
            &[0.0, 0.0],
            Boundary::Absorbing,
            |x| x[0] * x[1] + x[0] * x[0],
        )
        .unwrap();
        let m = fd_mixed(&g, 0, 1).unwrap();
        for v in m.values() {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }
}
