use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Physical scales and couplings of the hydrogenic problem.
///
/// Only independent inputs are stored; every other quantity is derived on
/// demand so the consistency relations (`lambda*/lambda = Z alpha`,
/// `rho lambda* = Lambda^2`, `eta0 = u M c^2 / hbar`, `V = 4 pi R^3 / 3`)
/// hold by construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaleSet<T> {
    pub hbar: T,
    pub c: T,
    /// Particle mass m.
    pub mass: T,
    /// Fine-structure constant.
    pub alpha: T,
    /// Nuclear charge number.
    pub z: u32,
    /// Statistical length Lambda = hbar / (M c) = 2 / (beta zeta c).
    pub stat_length: T,
    /// Time quantum u.
    pub time_quantum: T,
    /// Cavity radius R.
    pub cavity_radius: T,
}

impl<T: Real> ScaleSet<T> {
    /// Natural units `hbar = c = m = 1` (so `lambda = mc^2 = 1`), with
    /// `Lambda = 1`, `eta0 = 1` and `R = 10`.
    pub fn natural(alpha: T, z: u32) -> Self {
        Self {
            hbar: T::one(),
            c: T::one(),
            mass: T::one(),
            alpha,
            z,
            stat_length: T::one(),
            time_quantum: T::one(),
            cavity_radius: T::lit(10.0),
        }
    }

    /// Sets `Lambda` so that `lambda* / Lambda = ratio`. Needs `Z alpha > 0`.
    pub fn with_star_ratio(mut self, ratio: T) -> Result<Self> {
        let star = self.lambda_star();
        if !(ratio > T::zero()) || star <= T::zero() {
            return Err(Error::InvalidInput(
                "lambda*/Lambda must be positive and requires Z alpha > 0".into(),
            ));
        }
        self.stat_length = star / ratio;
        Ok(self)
    }

    pub fn with_stat_length(mut self, stat_length: T) -> Self {
        self.stat_length = stat_length;
        self
    }

    /// Sets the time quantum from `eta0 = u M c^2 / hbar = u c / Lambda`.
    pub fn with_eta0(mut self, eta0: T) -> Self {
        self.time_quantum = eta0 * self.stat_length / self.c;
        self
    }

    pub fn with_time_quantum(mut self, u: T) -> Self {
        self.time_quantum = u;
        self
    }

    /// Free-particle choice `u = 2 m / zeta`.
    pub fn with_drag(mut self, zeta: T) -> Self {
        self.time_quantum = T::lit(2.0) * self.mass / zeta;
        self
    }

    pub fn with_cavity_radius(mut self, radius: T) -> Self {
        self.cavity_radius = radius;
        self
    }

    /// Cavity radius given in units of `rho / 2`. Needs `lambda* > 0`.
    pub fn with_cavity_radius_half_rho(mut self, radius: T) -> Result<Self> {
        let rho = self.rho()?;
        self.cavity_radius = radius * rho * T::lit(0.5);
        Ok(self)
    }

    /// Sets R from a cavity volume.
    pub fn with_volume(mut self, volume: T) -> Self {
        self.cavity_radius = (volume * T::lit(3.0) / (T::lit(4.0) * T::PI())).cbrt();
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("hbar", self.hbar),
            ("c", self.c),
            ("mass", self.mass),
            ("stat_length", self.stat_length),
            ("time_quantum", self.time_quantum),
            ("cavity_radius", self.cavity_radius),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > T::zero()) {
                return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.alpha.is_finite() && self.alpha >= T::zero()) {
            return Err(Error::InvalidInput(format!(
                "alpha must be non-negative, got {}",
                self.alpha
            )));
        }
        Ok(())
    }

    /// `Z alpha`.
    pub fn z_alpha(&self) -> T {
        T::from_count(self.z as usize) * self.alpha
    }
    /// Rest energy m c^2.
    pub fn mc2(&self) -> T {
        self.mass * self.c * self.c
    }
    /// Compton wavelength hbar / (m c).
    pub fn lambda(&self) -> T {
        self.hbar / (self.mass * self.c)
    }
    /// Metric length `lambda* = q Z e / c^2 = Z alpha lambda`.
    pub fn lambda_star(&self) -> T {
        self.z_alpha() * self.lambda()
    }
    /// `lambda* / Lambda`.
    pub fn star_ratio(&self) -> T {
        self.lambda_star() / self.stat_length
    }
    /// Statistical mass M = hbar / (Lambda c).
    pub fn stat_mass(&self) -> T {
        self.hbar / (self.stat_length * self.c)
    }
    /// M c^2.
    pub fn stat_rest_energy(&self) -> T {
        self.stat_mass() * self.c * self.c
    }
    /// eta0 = u M c^2 / hbar.
    pub fn eta0(&self) -> T {
        self.time_quantum * self.stat_rest_energy() / self.hbar
    }
    /// Drag coefficient implied by `u = 2 m / zeta`.
    pub fn zeta(&self) -> T {
        T::lit(2.0) * self.mass / self.time_quantum
    }
    /// Inverse temperature from `Lambda = 2 / (beta zeta c)`.
    pub fn beta(&self) -> T {
        T::lit(2.0) / (self.stat_length * self.zeta() * self.c)
    }
    /// rho = Lambda^2 / lambda*. Undefined without coupling.
    pub fn rho(&self) -> Result<T> {
        let star = self.lambda_star();
        if star <= T::zero() {
            return Err(Error::InvalidInput("rho = Lambda^2/lambda* needs Z alpha > 0".into()));
        }
        Ok(self.stat_length * self.stat_length / star)
    }
    /// Cavity volume 4 pi R^3 / 3.
    pub fn volume(&self) -> T {
        T::lit(4.0) * T::PI() * self.cavity_radius.powi(3) / T::lit(3.0)
    }
    /// `u c Lambda / V^{2/3}`, the Gaussian damping parameter of the
    /// continuum sum; equals `eta0 (Lambda^3 / V)^{2/3}`.
    pub fn damping(&self) -> T {
        self.time_quantum * self.c * self.stat_length / self.volume().powf(T::lit(2.0) / T::lit(3.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_relations_hold() {
        let s = ScaleSet::natural(1.0f64 / 137.035_999, 3)
            .with_star_ratio(0.02)
            .unwrap()
            .with_eta0(2.5)
            .with_cavity_radius(7.0);
        s.validate().unwrap();
        assert!((s.lambda_star() / s.lambda() - s.z_alpha()).abs() < 1e-12);
        assert!((s.rho().unwrap() * s.lambda_star() - s.stat_length.powi(2)).abs() < 1e-12);
        assert!((s.eta0() - 2.5).abs() < 1e-12);
        assert!((s.star_ratio() - 0.02).abs() < 1e-15);
        assert!((s.volume() - 4.0 * std::f64::consts::PI * 343.0 / 3.0).abs() < 1e-9);
        let u = s.time_quantum;
        assert!((s.eta0() - u * s.stat_mass() * s.c * s.c / s.hbar).abs() < 1e-12);
        // Lambda = 2 / (beta zeta c)
        assert!((2.0 / (s.beta() * s.zeta() * s.c) - s.stat_length).abs() < 1e-12);
    }

    #[test]
    fn drag_sets_free_particle_time_quantum() {
        let s = ScaleSet::natural(0.01f64, 1).with_drag(4.0);
        assert!((s.time_quantum - 0.5).abs() < 1e-15);
        assert!((s.zeta() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn uncoupled_set_has_no_rho() {
        let s = ScaleSet::natural(0.0f64, 1);
        assert!(s.rho().is_err());
        assert!(s.with_star_ratio(0.1).is_err());
    }

    #[test]
    fn damping_follows_from_eta0_and_volume() {
        let s = ScaleSet::natural(0.01f64, 1).with_eta0(1.0).with_volume(1e3);
        assert!((s.damping() - 1e-2).abs() < 1e-14);
    }

    #[test]
    fn validation_rejects_nonpositive_scales() {
        let mut s = ScaleSet::natural(0.01f64, 1);
        s.cavity_radius = 0.0;
        assert!(s.validate().is_err());
    }
}
