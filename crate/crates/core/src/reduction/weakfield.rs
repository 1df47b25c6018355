use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{fd_derivative, Boundary, GridField};
use crate::scalar::Real;
use crate::spectrum::ScaleSet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeakFieldReport<T> {
    /// `max |H psi - E psi|` over the retained interior nodes.
    pub max_residual: T,
    /// `max |V psi|` over the same nodes, for scale.
    pub max_potential_term: T,
    /// `max |V| / (2 m c^2)`: size of the dropped `A_0^2` term relative to
    /// the kept linear one.
    pub weak_field_ratio: T,
    pub excise_radius: T,
    pub points: usize,
}

/// `a = hbar / (m c Z alpha)`.
pub fn bohr_radius<T: Real>(scales: &ScaleSet<T>) -> Result<T> {
    let za = scales.z_alpha();
    if !(za > T::zero()) {
        return Err(Error::InvalidInput("Bohr radius needs Z alpha > 0".into()));
    }
    Ok(scales.hbar / (scales.mass * scales.c * za))
}

/// Non-relativistic ground-state energy `-m c^2 (Z alpha)^2 / 2`.
pub fn bohr_energy<T: Real>(scales: &ScaleSet<T>) -> T {
    let za = scales.z_alpha();
    -scales.mc2() * za * za * T::lit(0.5)
}

/// `V(x) = -Z alpha hbar c / |x|`, i.e. `(m q) A_0` for a point charge at
/// the origin.
pub fn coulomb_energy<T: Real>(scales: &ScaleSet<T>) -> impl Fn(&[T]) -> T {
    let k = scales.z_alpha() * scales.hbar * scales.c;
    move |x: &[T]| -k / x.iter().map(|v| *v * *v).sum::<T>().sqrt()
}

/// `exp(-|x| / a)` on a 3D grid.
pub fn hydrogen_ground_state<T: Real>(shape: &[usize], step: &[T], origin: &[T], scales: &ScaleSet<T>) -> Result<GridField<Complex<T>, T>> {
    let a = bohr_radius(scales)?;
    GridField::from_fn(shape, step, origin, Boundary::Absorbing, |x| {
        let r = x.iter().map(|v| *v * *v).sum::<T>().sqrt();
        Complex::new((-r / a).exp(), T::zero())
    })
}

/// Applies `-(hbar^2 / 2m) lap + V - E` to a stationary `psi` (vector
/// potential zero, so Coulomb gauge holds trivially). Nodes closer than
/// `excise` to the origin, default two grid steps, and the outer layer of
/// the grid are skipped.
pub fn weakfield_schrodinger_residual<T, V>(
    psi: &GridField<Complex<T>, T>,
    potential_energy: V,
    energy: T,
    scales: &ScaleSet<T>,
    excise: Option<T>,
) -> Result<WeakFieldReport<T>>
where
    T: Real,
    V: Fn(&[T]) -> T,
{
    scales.validate()?;
    let h_max = psi.step().iter().copied().fold(T::zero(), T::max);
    let excise = excise.unwrap_or(T::lit(2.0) * h_max);
    let mut lap = vec![Complex::new(T::zero(), T::zero()); psi.len()];
    for axis in 0..psi.ndim() {
        let d2 = fd_derivative(psi, axis, 2)?;
        for (acc, v) in lap.iter_mut().zip(d2.values()) {
            *acc = *acc + *v;
        }
    }
    let kinetic = -scales.hbar * scales.hbar / (T::lit(2.0) * scales.mass);
    let mut report = WeakFieldReport {
        max_residual: T::zero(),
        max_potential_term: T::zero(),
        weak_field_ratio: T::zero(),
        excise_radius: excise,
        points: 0,
    };
    for (flat, value) in psi.values().iter().enumerate() {
        if !psi.is_interior(flat, 1) {
            continue;
        }
        let x = psi.coords(flat);
        if x.iter().map(|v| *v * *v).sum::<T>().sqrt() < excise {
            continue;
        }
        let v = potential_energy(&x);
        let residual = lap[flat] * kinetic + *value * (v - energy);
        report.max_residual = report.max_residual.max(residual.norm());
        report.max_potential_term = report.max_potential_term.max((*value * v).norm());
        report.weak_field_ratio = report.weak_field_ratio.max(v.abs() / (T::lit(2.0) * scales.mc2()));
        report.points += 1;
    }
    if report.points == 0 {
        return Err(Error::InvalidInput("no grid node outside the excised ball".into()));
    }
    Ok(report)
}
