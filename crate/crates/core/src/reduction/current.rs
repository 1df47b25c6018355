use num_complex::Complex;

use super::schrodinger::Trajectory;
use super::spectral::{spectral_derivative, SpectralReal};
use crate::error::{Error, Result};
use crate::numerics::GridField;

/// Density `j_tau = |Psi|^2` and flux `j_k = nu Im(Psi^* d_k Psi)`.
/// The pair does not transform as a four-vector; no boost is offered.
#[derive(Debug, Clone, PartialEq)]
pub struct CurrentField<T> {
    pub j_tau: GridField<T, T>,
    pub j_k: Vec<GridField<T, T>>,
}

/// Currents of one frame, with spectral spatial derivatives.
pub fn currents<T: SpectralReal>(psi: &GridField<Complex<T>, T>, nu: T) -> Result<CurrentField<T>> {
    let j_tau = psi.map(|v| v.norm_sqr());
    // Real and imaginary parts are differentiated separately so that a real
    // field gives an identically zero flux.
    let re = psi.map(|v| Complex::new(v.re, T::zero()));
    let im = psi.map(|v| Complex::new(v.im, T::zero()));
    let mut j_k = Vec::with_capacity(psi.ndim());
    for axis in 0..psi.ndim() {
        let (d_re, d_im) = (spectral_derivative(&re, axis)?, spectral_derivative(&im, axis)?);
        let flux = psi
            .values()
            .iter()
            .zip(d_re.values().iter().zip(d_im.values()))
            .map(|(p, (dr, di))| nu * (p.re * di.re - p.im * dr.re))
            .collect();
        j_k.push(psi.with_values(flux)?);
    }
    Ok(CurrentField { j_tau, j_k })
}

/// Currents of every frame and `max |d_tau j_tau + d_k j_k|` over the
/// interior frames, with a central difference in `tau`.
pub fn current_and_continuity<T: SpectralReal>(
    trajectory: &Trajectory<Complex<T>, T>,
    nu: T,
) -> Result<(Vec<CurrentField<T>>, T)> {
    if trajectory.frames.len() < 3 {
        return Err(Error::InvalidInput("continuity needs at least three frames".into()));
    }
    let fields = trajectory.frames.iter().map(|f| currents(f, nu)).collect::<Result<Vec<_>>>()?;
    let dt2 = trajectory.time_step() * T::lit(2.0);
    let mut worst = T::zero();
    for j in 1..fields.len() - 1 {
        let mut div: Vec<T> = vec![T::zero(); fields[j].j_tau.len()];
        for (axis, flux) in fields[j].j_k.iter().enumerate() {
            let as_complex = flux.map(|v| Complex::new(v, T::zero()));
            let d = spectral_derivative(&as_complex, axis)?;
            for (acc, v) in div.iter_mut().zip(d.values()) {
                *acc += v.re;
            }
        }
        let (next, prev) = (fields[j + 1].j_tau.values(), fields[j - 1].j_tau.values());
        for i in 0..div.len() {
            worst = worst.max(((next[i] - prev[i]) / dt2 + div[i]).abs());
        }
    }
    Ok((fields, worst))
}
