//! Diffusion `d_u psi = (c Lambda / 2) lap psi` on periodic grids.

use num_complex::Complex;
use rustfft::FftDirection;
use serde::Serialize;

use super::schrodinger::Trajectory;
use super::spectral::{fft_nd, k_squared, require_periodic, SpectralReal};
use crate::error::{Error, Result};
use crate::numerics::GridField;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiffusionScheme {
    /// Exact heat-kernel multiplier.
    Spectral,
    /// Forward Euler with the standard `2d + 1`-point Laplacian.
    Explicit,
}

/// Evolves non-negative data over `[0, span]` in `steps` steps with
/// `c_lambda = c Lambda`.
pub fn evolve_fokker_planck<T: SpectralReal>(
    psi0: &GridField<T, T>,
    span: T,
    c_lambda: T,
    steps: usize,
    scheme: DiffusionScheme,
) -> Result<Trajectory<T, T>> {
    require_periodic(psi0)?;
    if steps == 0 || !(span.is_finite() && span >= T::zero()) {
        return Err(Error::InvalidInput("need at least one step over a finite non-negative span".into()));
    }
    if !(c_lambda.is_finite() && c_lambda > T::zero()) {
        return Err(Error::InvalidInput("c Lambda must be positive".into()));
    }
    if psi0.values().iter().any(|v| *v < T::zero()) {
        return Err(Error::InvalidInput("initial density has negative samples".into()));
    }
    let diffusion = c_lambda * T::lit(0.5);
    let du = span / T::from_count(steps);
    let times: Vec<T> = (0..=steps).map(|j| du * T::from_count(j)).collect();
    let frames = match scheme {
        DiffusionScheme::Spectral => spectral_frames(psi0, diffusion, &times)?,
        DiffusionScheme::Explicit => explicit_frames(psi0, diffusion, du, steps)?,
    };
    Ok(Trajectory { times, frames })
}

fn spectral_frames<T: SpectralReal>(psi0: &GridField<T, T>, diffusion: T, times: &[T]) -> Result<Vec<GridField<T, T>>> {
    let shape = psi0.shape().to_vec();
    let k2 = k_squared(&shape, psi0.step());
    let mut hat: Vec<Complex<T>> = psi0.values().iter().map(|&v| Complex::new(v, T::zero())).collect();
    fft_nd(&mut hat, &shape, FftDirection::Forward);
    let mut frames = vec![psi0.clone()];
    for &u in &times[1..] {
        let mut v: Vec<Complex<T>> = hat.iter().zip(&k2).map(|(c, &k)| c * (-diffusion * k * u).exp()).collect();
        fft_nd(&mut v, &shape, FftDirection::Inverse);
        frames.push(psi0.with_values(v.into_iter().map(|c| c.re).collect())?);
    }
    Ok(frames)
}

fn explicit_frames<T: Real>(psi0: &GridField<T, T>, diffusion: T, du: T, steps: usize) -> Result<Vec<GridField<T, T>>> {
    let shape = psi0.shape().to_vec();
    let rates: Vec<T> = psi0.step().iter().map(|&h| diffusion * du / (h * h)).collect();
    let total: T = rates.iter().copied().sum();
    if total > T::lit(0.5) {
        return Err(Error::Stability(format!(
            "explicit diffusion step needs D du sum(1/h^2) <= 1/2, got {}",
            total.to_f64_lossy()
        )));
    }
    let strides: Vec<usize> = (0..shape.len()).map(|a| psi0.stride(a)).collect();
    let mut frames = vec![psi0.clone()];
    let mut cur = psi0.values().to_vec();
    for _ in 0..steps {
        let mut next = vec![T::zero(); cur.len()];
        for (flat, out) in next.iter_mut().enumerate() {
            let mut v = cur[flat] * (T::one() - T::lit(2.0) * total);
            for axis in 0..shape.len() {
                let n = shape[axis];
                let i = (flat / strides[axis]) % n;
                let base = flat - i * strides[axis];
                let up = base + ((i + 1) % n) * strides[axis];
                let down = base + ((i + n - 1) % n) * strides[axis];
                v += rates[axis] * (cur[up] + cur[down]);
            }
            *out = v;
        }
        cur = next;
        frames.push(psi0.with_values(cur.clone())?);
    }
    Ok(frames)
}

/// `sum psi * cell_volume`.
pub fn total_mass<T: Real>(field: &GridField<T, T>) -> T {
    field.values().iter().copied().sum::<T>() * field.cell_volume()
}

/// Largest relative change of [`total_mass`] between consecutive frames.
pub fn max_mass_drift<T: Real>(trajectory: &Trajectory<T, T>) -> T {
    let m0 = total_mass(&trajectory.frames[0]);
    trajectory
        .frames
        .windows(2)
        .map(|w| (total_mass(&w[1]) - total_mass(&w[0])).abs() / m0)
        .fold(T::zero(), T::max)
}

/// Per-axis variance `sigma0^2 + c Lambda u` of diffusing Gaussian data.
pub fn diffusion_variance<T: Real>(sigma0: T, c_lambda: T, u: T) -> T {
    sigma0 * sigma0 + c_lambda * u
}

/// One-dimensional heat kernel with diffusion constant `c Lambda / 2`.
pub fn heat_kernel<T: Real>(x: T, c_lambda: T, u: T) -> T {
    let four_du = T::lit(2.0) * c_lambda * u;
    (-x * x / four_du).exp() / (T::PI() * four_du).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Boundary;
    use crate::reduction::schrodinger::position_variance;

    fn gaussian(n: usize, length: f64, sigma: f64) -> GridField<f64, f64> {
        let h = length / n as f64;
        GridField::from_fn(&[n], &[h], &[0.0], Boundary::Periodic, |x| {
            let d = x[0] - length / 2.0;
            (-d * d / (2.0 * sigma * sigma)).exp()
        })
        .unwrap()
    }

    #[test]
    fn mass_is_conserved() {
        let g = GridField::from_fn(&[24, 24], &[0.5; 2], &[0.0; 2], Boundary::Periodic, |x: &[f64]| {
            (-(x[0] - 6.0).powi(2) - 0.5 * (x[1] - 5.0).powi(2)).exp()
        })
        .unwrap();
        for scheme in [DiffusionScheme::Spectral, DiffusionScheme::Explicit] {
            let t = evolve_fokker_planck(&g, 1.0, 0.5, 20, scheme).unwrap();
            assert!(max_mass_drift(&t) < 1e-10, "{scheme:?}");
        }
    }

    #[test]
    fn variance_grows_linearly() {
        let (c_lambda, sigma) = (0.8, 1.2);
        let g = gaussian(512, 80.0, sigma);
        let t = evolve_fokker_planck(&g, 5.0, c_lambda, 5, DiffusionScheme::Spectral).unwrap();
        for (u, f) in t.times.iter().zip(&t.frames) {
            let var = position_variance(f, 0, |v| *v);
            assert!((var - diffusion_variance(sigma, c_lambda, *u)).abs() < 1e-6, "{u} {var}");
        }
    }

    #[test]
    fn explicit_scheme_keeps_positivity_and_matches_kernel() {
        let (n, length, c_lambda) = (401, 40.0, 1.0);
        let h = length / n as f64;
        let mid = n / 2;
        let mut g = GridField::zeros(&[n], &[h], &[-(mid as f64) * h], Boundary::Periodic).unwrap();
        g.values_mut()[mid] = 1.0 / h;
        let du = 0.4 * h * h / c_lambda;
        let steps = (2.0 / du).ceil() as usize;
        let t = evolve_fokker_planck(&g, 2.0, c_lambda, steps, DiffusionScheme::Explicit).unwrap();
        assert!(t.frames.iter().all(|f| f.values().iter().all(|v| *v >= 0.0)));
        let end = t.last();
        let peak = heat_kernel(0.0, c_lambda, 2.0);
        for (flat, v) in end.values().iter().enumerate() {
            let x = end.coords(flat)[0];
            assert!((v - heat_kernel(x, c_lambda, 2.0)).abs() < 1e-2 * peak, "{x} {v}");
        }
    }

    #[test]
    fn unstable_step_is_refused() {
        let g = gaussian(64, 10.0, 1.0);
        let r = evolve_fokker_planck(&g, 10.0, 1.0, 5, DiffusionScheme::Explicit);
        assert!(matches!(r, Err(Error::Stability(_))));
        let neg = g.map(|v| v - 0.5);
        assert!(evolve_fokker_planck(&neg, 1.0, 1.0, 5, DiffusionScheme::Spectral).is_err());
    }
}
