//! Multi-dimensional FFTs over periodic grids and their wavenumbers.

use num_complex::Complex;
use rustfft::{FftDirection, FftNum, FftPlanner};

use crate::error::{Error, Result};
use crate::numerics::{Boundary, FieldValue, GridField};
use crate::scalar::Real;

/// Scalar usable by the spectral routines.
pub trait SpectralReal: Real + FftNum {}
impl<T: Real + FftNum> SpectralReal for T {}

pub(crate) fn require_periodic<S: FieldValue<T>, T: Real>(field: &GridField<S, T>) -> Result<()> {
    if field.boundary() != Boundary::Periodic {
        return Err(Error::InvalidInput("spectral evolution needs a periodic grid".into()));
    }
    Ok(())
}

/// In-place transform along every axis. The inverse is normalised so that
/// forward followed by inverse is the identity.
pub(crate) fn fft_nd<T: SpectralReal>(values: &mut [Complex<T>], shape: &[usize], direction: FftDirection) {
    let mut planner = FftPlanner::<T>::new();
    let total = values.len();
    let mut line = Vec::new();
    for axis in 0..shape.len() {
        let n = shape[axis];
        if n == 1 {
            continue;
        }
        let stride: usize = shape[axis + 1..].iter().product();
        let fft = planner.plan_fft(n, direction);
        line.resize(n, Complex::new(T::zero(), T::zero()));
        for block in (0..total).step_by(stride * n) {
            for offset in 0..stride {
                let start = block + offset;
                for (i, v) in line.iter_mut().enumerate() {
                    *v = values[start + i * stride];
                }
                fft.process(&mut line);
                for (i, v) in line.iter().enumerate() {
                    values[start + i * stride] = *v;
                }
            }
        }
    }
    if direction == FftDirection::Inverse {
        let scale = T::from_count(total).recip();
        for v in values.iter_mut() {
            *v = *v * scale;
        }
    }
}

/// Angular wavenumbers `2 pi m / (n h)` in FFT order, `m` in `[-n/2, n/2)`.
pub fn wavenumbers<T: Real>(n: usize, step: T) -> Vec<T> {
    let base = T::TAU() / (T::from_count(n) * step);
    (0..n)
        .map(|i| {
            let m = if 2 * i < n { i as f64 } else { i as f64 - n as f64 };
            base * T::lit(m)
        })
        .collect()
}

/// `|k|^2` for every node of the grid, in FFT order.
pub(crate) fn k_squared<T: Real>(shape: &[usize], step: &[T]) -> Vec<T> {
    let ks: Vec<Vec<T>> = shape.iter().zip(step).map(|(&n, &h)| wavenumbers(n, h)).collect();
    let total: usize = shape.iter().product();
    let mut out = vec![T::zero(); total];
    for (flat, slot) in out.iter_mut().enumerate() {
        let mut rem = flat;
        let mut s = T::zero();
        for axis in (0..shape.len()).rev() {
            let i = rem % shape[axis];
            rem /= shape[axis];
            s += ks[axis][i] * ks[axis][i];
        }
        *slot = s;
    }
    out
}

/// Spectral first derivative along `axis`; the Nyquist mode is dropped.
pub fn spectral_derivative<T: SpectralReal>(
    field: &GridField<Complex<T>, T>,
    axis: usize,
) -> Result<GridField<Complex<T>, T>> {
    require_periodic(field)?;
    if axis >= field.ndim() {
        return Err(Error::Shape(format!("axis {axis} out of range for a {}-d grid", field.ndim())));
    }
    let shape = field.shape().to_vec();
    let n = shape[axis];
    let stride = field.stride(axis);
    let ks = wavenumbers(n, field.step()[axis]);
    let mut v = field.values().to_vec();
    fft_nd(&mut v, &shape, FftDirection::Forward);
    for (flat, x) in v.iter_mut().enumerate() {
        let i = (flat / stride) % n;
        let k = if n.is_multiple_of(2) && i == n / 2 { T::zero() } else { ks[i] };
        *x = *x * Complex::new(T::zero(), k);
    }
    fft_nd(&mut v, &shape, FftDirection::Inverse);
    field.with_values(v)
}
