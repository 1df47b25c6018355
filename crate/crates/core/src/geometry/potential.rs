use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Minkowski signature `diag(-1, 1, 1, 1)`.
pub fn eta<T: Real>(mu: usize) -> T {
    if mu == 0 {
        -T::one()
    } else {
        T::one()
    }
}

/// Gauge condition a potential is declared to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Gauge {
    /// `d_mu A^mu = 0`.
    Lorentz,
    /// `d_j A^j = 0`.
    Coulomb,
    None,
}

/// Electromagnetic four-potential `A_mu(x)` (lower index) with its
/// derivative table.
pub trait Potential<T: Real> {
    fn value(&self, x: &[T; 4]) -> [T; 4];
    /// `d[nu][mu] = d_nu A_mu`.
    fn gradient(&self, x: &[T; 4]) -> [[T; 4]; 4];
    fn gauge(&self) -> Gauge;
}

/// `d_mu A^mu = eta^{mu mu} d_mu A_mu`.
pub fn lorentz_divergence<T: Real>(grad: &[[T; 4]; 4]) -> T {
    (0..4).map(|mu| eta::<T>(mu) * grad[mu][mu]).fold(T::zero(), |a, b| a + b)
}

/// `d_j A^j`.
pub fn coulomb_divergence<T: Real>(grad: &[[T; 4]; 4]) -> T {
    grad[1][1] + grad[2][2] + grad[3][3]
}

/// Checks `gauge` on the given points; `Gauge::None` always passes.
pub fn verify_gauge<T: Real, P: Potential<T> + ?Sized>(
    potential: &P,
    gauge: Gauge,
    points: impl IntoIterator<Item = [T; 4]>,
    tolerance: T,
) -> Result<T> {
    let div = |g: &[[T; 4]; 4]| match gauge {
        Gauge::Lorentz => lorentz_divergence(g),
        Gauge::Coulomb => coulomb_divergence(g),
        Gauge::None => T::zero(),
    };
    let mut worst = T::zero();
    for x in points {
        worst = worst.max(div(&potential.gradient(&x)).abs());
    }
    if worst > tolerance {
        return Err(Error::Gauge { divergence: worst.to_f64_lossy(), tolerance: tolerance.to_f64_lossy() });
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroPotential;

impl<T: Real> Potential<T> for ZeroPotential {
    fn value(&self, _: &[T; 4]) -> [T; 4] {
        [T::zero(); 4]
    }
    fn gradient(&self, _: &[T; 4]) -> [[T; 4]; 4] {
        [[T::zero(); 4]; 4]
    }
    fn gauge(&self) -> Gauge {
        Gauge::Lorentz
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ConstantPotential<T>(pub [T; 4]);

impl<T: Real> Potential<T> for ConstantPotential<T> {
    fn value(&self, _: &[T; 4]) -> [T; 4] {
        self.0
    }
    fn gradient(&self, _: &[T; 4]) -> [[T; 4]; 4] {
        [[T::zero(); 4]; 4]
    }
    fn gauge(&self) -> Gauge {
        Gauge::Lorentz
    }
}

/// Static point charge `A = (Ze / r, 0, 0, 0)`, `r = |x^j|`. Satisfies both
/// gauges away from the origin.
#[derive(Debug, Clone, Copy)]
pub struct CoulombPotential<T> {
    /// `Z e`.
    pub strength: T,
}

impl<T: Real> Potential<T> for CoulombPotential<T> {
    fn value(&self, x: &[T; 4]) -> [T; 4] {
        let r = (x[1] * x[1] + x[2] * x[2] + x[3] * x[3]).sqrt();
        [self.strength / r, T::zero(), T::zero(), T::zero()]
    }
    fn gradient(&self, x: &[T; 4]) -> [[T; 4]; 4] {
        let r2 = x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
        let r3 = r2 * r2.sqrt();
        let mut g = [[T::zero(); 4]; 4];
        for j in 1..4 {
            g[j][0] = -self.strength * x[j] / r3;
        }
        g
    }
    fn gauge(&self) -> Gauge {
        Gauge::Lorentz
    }
}

/// `A_mu = d_mu chi` with `chi = a cos(k x^0) cos(k x^1)`, which solves the
/// wave equation, so the potential is Lorentz and flat.
#[derive(Debug, Clone, Copy)]
pub struct PureGauge<T> {
    pub amplitude: T,
    pub wavenumber: T,
}

impl<T: Real> PureGauge<T> {
    pub fn chi(&self, x: &[T; 4]) -> T {
        let k = self.wavenumber;
        self.amplitude * (k * x[0]).cos() * (k * x[1]).cos()
    }
}

impl<T: Real> Potential<T> for PureGauge<T> {
    fn value(&self, x: &[T; 4]) -> [T; 4] {
        let (a, k) = (self.amplitude, self.wavenumber);
        let (s0, c0) = (k * x[0]).sin_cos();
        let (s1, c1) = (k * x[1]).sin_cos();
        [-a * k * s0 * c1, -a * k * c0 * s1, T::zero(), T::zero()]
    }
    fn gradient(&self, x: &[T; 4]) -> [[T; 4]; 4] {
        let (a, k) = (self.amplitude, self.wavenumber);
        let (s0, c0) = (k * x[0]).sin_cos();
        let (s1, c1) = (k * x[1]).sin_cos();
        let akk = a * k * k;
        let mut g = [[T::zero(); 4]; 4];
        g[0][0] = -akk * c0 * c1;
        g[1][0] = akk * s0 * s1;
        g[0][1] = akk * s0 * s1;
        g[1][1] = -akk * c0 * c1;
        g
    }
    fn gauge(&self) -> Gauge {
        Gauge::Lorentz
    }
}

/// One trigonometric mode `c cos(k.x + phi) + s sin(k.x + phi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrigMode<T> {
    pub k: [T; 4],
    pub phase: T,
    pub cos_amp: [T; 4],
    pub sin_amp: [T; 4],
}

/// Sum of trigonometric modes with an exact analytic derivative table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrigPotential<T> {
    pub modes: Vec<TrigMode<T>>,
    pub gauge: Gauge,
}

impl<T: Real> TrigPotential<T> {
    /// Unconstrained random modes.
    pub fn random(modes: usize, amplitude: f64, wave_scale: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let modes = (0..modes)
            .map(|_| {
                let k = draw4(&mut rng, wave_scale);
                let phase = T::lit(rng.random_range(0.0..std::f64::consts::TAU));
                TrigMode { k, phase, cos_amp: draw4(&mut rng, amplitude), sin_amp: draw4(&mut rng, amplitude) }
            })
            .collect();
        Self { modes, gauge: Gauge::None }
    }

    /// `A_mu = eta^{nu sigma} d_sigma B_{nu mu}` with antisymmetric
    /// trigonometric `B`, so `d_mu A^mu = 0` identically.
    pub fn random_lorentz(modes: usize, amplitude: f64, wave_scale: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let modes = (0..modes)
            .map(|_| {
                let k: [T; 4] = draw4(&mut rng, wave_scale);
                let phase = T::lit(rng.random_range(0.0..std::f64::consts::TAU));
                let mut b = [[T::zero(); 4]; 4];
                for nu in 0..4 {
                    for mu in nu + 1..4 {
                        let v = T::lit(rng.random_range(-amplitude..amplitude));
                        b[nu][mu] = v;
                        b[mu][nu] = -v;
                    }
                }
                // B = b sin(theta): d_sigma B_{nu mu} = b_{nu mu} k_sigma cos(theta).
                let mut cos_amp = [T::zero(); 4];
                for (mu, c) in cos_amp.iter_mut().enumerate() {
                    *c = (0..4).map(|nu| eta::<T>(nu) * b[nu][mu] * k[nu]).fold(T::zero(), |a, x| a + x);
                }
                TrigMode { k, phase, cos_amp, sin_amp: [T::zero(); 4] }
            })
            .collect();
        Self { modes, gauge: Gauge::Lorentz }
    }

    /// Arbitrary `A_0`, spatial part a curl, so `d_j A^j = 0` identically.
    pub fn random_coulomb(modes: usize, amplitude: f64, wave_scale: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let modes = (0..modes)
            .map(|_| {
                let k: [T; 4] = draw4(&mut rng, wave_scale);
                let phase = T::lit(rng.random_range(0.0..std::f64::consts::TAU));
                let w: [T; 4] = draw4(&mut rng, amplitude);
                // W sin(theta) has curl (k x w) cos(theta).
                let curl = [
                    T::zero(),
                    k[2] * w[3] - k[3] * w[2],
                    k[3] * w[1] - k[1] * w[3],
                    k[1] * w[2] - k[2] * w[1],
                ];
                let mut sin_amp = [T::zero(); 4];
                sin_amp[0] = T::lit(rng.random_range(-amplitude..amplitude));
                TrigMode { k, phase, cos_amp: curl, sin_amp }
            })
            .collect();
        Self { modes, gauge: Gauge::Coulomb }
    }

    fn theta(mode: &TrigMode<T>, x: &[T; 4]) -> T {
        (0..4).map(|mu| mode.k[mu] * x[mu]).fold(mode.phase, |a, b| a + b)
    }
}

fn draw4<T: Real>(rng: &mut ChaCha8Rng, scale: f64) -> [T; 4] {
    std::array::from_fn(|_| T::lit(rng.random_range(-scale..scale)))
}

impl<T: Real> Potential<T> for TrigPotential<T> {
    fn value(&self, x: &[T; 4]) -> [T; 4] {
        let mut a = [T::zero(); 4];
        for m in &self.modes {
            let (s, c) = Self::theta(m, x).sin_cos();
            for mu in 0..4 {
                a[mu] += m.cos_amp[mu] * c + m.sin_amp[mu] * s;
            }
        }
        a
    }
    fn gradient(&self, x: &[T; 4]) -> [[T; 4]; 4] {
        let mut g = [[T::zero(); 4]; 4];
        for m in &self.modes {
            let (s, c) = Self::theta(m, x).sin_cos();
            for nu in 0..4 {
                for mu in 0..4 {
                    g[nu][mu] += m.k[nu] * (m.sin_amp[mu] * c - m.cos_amp[mu] * s);
                }
            }
        }
        g
    }
    fn gauge(&self) -> Gauge {
        self.gauge
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_gradient<P: Potential<f64>>(p: &P, x: &[f64; 4]) -> [[f64; 4]; 4] {
        let h = 1e-5;
        let mut g = [[0.0; 4]; 4];
        for nu in 0..4 {
            let (mut xp, mut xm) = (*x, *x);
            xp[nu] += h;
            xm[nu] -= h;
            let (ap, am) = (p.value(&xp), p.value(&xm));
            for mu in 0..4 {
                g[nu][mu] = (ap[mu] - am[mu]) / (2.0 * h);
            }
        }
        g
    }

    fn sample_points() -> Vec<[f64; 4]> {
        (0..10).map(|i| {
            let t = i as f64;
            [0.3 * t - 1.0, 0.7 + 0.1 * t, -0.2 * t, 0.5 + 0.05 * t * t]
        }).collect()
    }

    fn assert_gradient_matches<P: Potential<f64>>(p: &P) {
        for x in sample_points() {
            let (g, fd) = (p.gradient(&x), fd_gradient(p, &x));
            for nu in 0..4 {
                for mu in 0..4 {
                    assert!((g[nu][mu] - fd[nu][mu]).abs() < 1e-7, "{nu}{mu}: {} {}", g[nu][mu], fd[nu][mu]);
                }
            }
        }
    }

    #[test]
    fn analytic_gradients_match_differences() {
        assert_gradient_matches(&CoulombPotential { strength: 0.7 });
        assert_gradient_matches(&PureGauge { amplitude: 0.4, wavenumber: 1.3 });
        assert_gradient_matches(&TrigPotential::<f64>::random(3, 0.5, 2.0, 7));
        assert_gradient_matches(&TrigPotential::<f64>::random_lorentz(3, 0.5, 2.0, 8));
        assert_gradient_matches(&TrigPotential::<f64>::random_coulomb(3, 0.5, 2.0, 9));
    }

    #[test]
    fn constructed_gauges_hold() {
        let pts = sample_points;
        let lorentz = TrigPotential::<f64>::random_lorentz(4, 1.0, 2.0, 1);
        assert!(verify_gauge(&lorentz, Gauge::Lorentz, pts(), 1e-13).is_ok());
        let coulomb = TrigPotential::<f64>::random_coulomb(4, 1.0, 2.0, 2);
        assert!(verify_gauge(&coulomb, Gauge::Coulomb, pts(), 1e-13).is_ok());
        assert!(verify_gauge(&coulomb, Gauge::Lorentz, pts(), 1e-6).is_err());
        let pure = PureGauge { amplitude: 0.3, wavenumber: 2.0 };
        assert!(verify_gauge(&pure, Gauge::Lorentz, pts(), 1e-13).is_ok());
        let point = CoulombPotential { strength: 1.0 };
        assert!(verify_gauge(&point, Gauge::Lorentz, pts(), 1e-13).is_ok());
        assert!(verify_gauge(&point, Gauge::Coulomb, pts(), 1e-13).is_ok());
    }

    #[test]
    fn pure_gauge_is_gradient_of_chi() {
        let p = PureGauge { amplitude: 0.4, wavenumber: 1.3 };
        let h = 1e-5;
        for x in sample_points() {
            let a = p.value(&x);
            for mu in 0..4 {
                let (mut xp, mut xm) = (x, x);
                xp[mu] += h;
                xm[mu] -= h;
                assert!(((p.chi(&xp) - p.chi(&xm)) / (2.0 * h) - a[mu]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn seeded_draws_are_reproducible() {
        let a = TrigPotential::<f64>::random_lorentz(3, 1.0, 1.0, 42);
        let b = TrigPotential::<f64>::random_lorentz(3, 1.0, 1.0, 42);
        assert_eq!(a, b);
    }
}
