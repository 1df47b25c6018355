use num_complex::Complex;
use serde::Serialize;

use super::potential::{eta, lorentz_divergence, Potential};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Complex scalar field on spacetime with analytic first and second
/// derivatives.
pub trait ComplexField<T: Real> {
    fn value(&self, x: &[T; 4]) -> Complex<T>;
    /// `d_mu psi`.
    fn gradient(&self, x: &[T; 4]) -> [Complex<T>; 4];
    /// `d_mu d_nu psi`.
    fn hessian(&self, x: &[T; 4]) -> [[Complex<T>; 4]; 4];
}

/// `a exp(i p_mu x^mu)` (components summed without the metric).
#[derive(Debug, Clone, Copy)]
pub struct PlaneWave<T> {
    pub amplitude: T,
    pub momentum: [T; 4],
}

impl<T: Real> PlaneWave<T> {
    /// `eta^{mu nu} p_mu p_nu`.
    pub fn momentum_square(&self) -> T {
        (0..4).map(|mu| eta::<T>(mu) * self.momentum[mu] * self.momentum[mu]).fold(T::zero(), |a, b| a + b)
    }
}

impl<T: Real> ComplexField<T> for PlaneWave<T> {
    fn value(&self, x: &[T; 4]) -> Complex<T> {
        let phase = (0..4).map(|mu| self.momentum[mu] * x[mu]).fold(T::zero(), |a, b| a + b);
        Complex::from_polar(self.amplitude, phase)
    }
    fn gradient(&self, x: &[T; 4]) -> [Complex<T>; 4] {
        let v = self.value(x);
        std::array::from_fn(|mu| v * Complex::new(T::zero(), self.momentum[mu]))
    }
    fn hessian(&self, x: &[T; 4]) -> [[Complex<T>; 4]; 4] {
        let v = self.value(x);
        std::array::from_fn(|mu| std::array::from_fn(|nu| v * (-self.momentum[mu] * self.momentum[nu])))
    }
}

/// Stationary trial state `exp(-a r - i E x^0)`, `r = |x^j|`.
#[derive(Debug, Clone, Copy)]
pub struct HydrogenLike<T> {
    pub decay: T,
    pub energy: T,
}

impl<T: Real> ComplexField<T> for HydrogenLike<T> {
    fn value(&self, x: &[T; 4]) -> Complex<T> {
        let r = (x[1] * x[1] + x[2] * x[2] + x[3] * x[3]).sqrt();
        Complex::from_polar((-self.decay * r).exp(), -self.energy * x[0])
    }
    fn gradient(&self, x: &[T; 4]) -> [Complex<T>; 4] {
        let v = self.value(x);
        let r = (x[1] * x[1] + x[2] * x[2] + x[3] * x[3]).sqrt();
        let mut g = [Complex::new(T::zero(), T::zero()); 4];
        g[0] = v * Complex::new(T::zero(), -self.energy);
        for j in 1..4 {
            g[j] = v * (-self.decay * x[j] / r);
        }
        g
    }
    fn hessian(&self, x: &[T; 4]) -> [[Complex<T>; 4]; 4] {
        let v = self.value(x);
        let r = (x[1] * x[1] + x[2] * x[2] + x[3] * x[3]).sqrt();
        let a = self.decay;
        let mut h = [[Complex::new(T::zero(), T::zero()); 4]; 4];
        h[0][0] = v * (-self.energy * self.energy);
        for j in 1..4 {
            let mixed = v * Complex::new(T::zero(), self.energy * a * x[j] / r);
            h[0][j] = mixed;
            h[j][0] = mixed;
            for k in 1..4 {
                let delta = if j == k { T::one() } else { T::zero() };
                let radial = a * a * x[j] * x[k] / (r * r) - a * (delta / r - x[j] * x[k] / (r * r * r));
                h[j][k] = v * radial;
            }
        }
        h
    }
}

/// Couplings of the Fourier-reduced equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KgCouplings<T> {
    /// `1 / lambda = m c / hbar`.
    pub inverse_compton: T,
    /// `k = q m / (c hbar)`, i.e. `e / (c hbar)`.
    pub charge: T,
}

/// Max-norms over the sample points of the reduced operators and of the
/// gaps between their three evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KgFourierReport<T> {
    /// `|(d - ikA)^2 psi - psi/lambda^2 - 2ik (d.A) psi|`.
    pub reduced: T,
    /// `|(d - ikA)^2 psi - psi/lambda^2|`, minimal coupling.
    pub minimal: T,
    /// Gap between the reduced form and minimal coupling.
    pub defect_vs_minimal: T,
    /// Gap between the reduced form and the five-dimensional expansion
    /// with `d_5 -> i/lambda`.
    pub defect_vs_fifth: T,
    pub max_divergence: T,
}

/// Applies the Fourier-reduced operator to `psi` at each point and checks it
/// against minimal coupling and against the 5D operator
/// `d^mu d_mu + 2 N^mu d_mu d_5 + (d_mu N^mu) d_5 + (N.N + 1) d_5^2`
/// acting on `psi e^{i x^5 / lambda}`. Requires Lorentz gauge.
pub fn kg_fourier_residual<T, F, P>(psi: &F, potential: &P, couplings: KgCouplings<T>, points: &[[T; 4]]) -> Result<KgFourierReport<T>>
where
    T: Real,
    F: ComplexField<T> + ?Sized,
    P: Potential<T> + ?Sized,
{
    let m = couplings.inverse_compton;
    let k = couplings.charge;
    if !(m > T::zero()) {
        return Err(Error::InvalidInput("inverse Compton wavelength must be positive".into()));
    }
    // q/c^2 = k lambda.
    let kappa = k / m;
    let i = Complex::new(T::zero(), T::one());
    let mut report = KgFourierReport {
        reduced: T::zero(),
        minimal: T::zero(),
        defect_vs_minimal: T::zero(),
        defect_vs_fifth: T::zero(),
        max_divergence: T::zero(),
    };
    let mut scale = T::one();
    for x in points {
        let a = potential.value(x);
        let grad_a = potential.gradient(x);
        let div_a = lorentz_divergence(&grad_a);
        report.max_divergence = report.max_divergence.max(div_a.abs());
        scale = grad_a.iter().flatten().fold(scale, |s, g| s.max(g.abs()));

        let v = psi.value(x);
        let g = psi.gradient(x);
        let h = psi.hessian(x);

        // (d^mu - ik A^mu)(d_mu - ik A_mu) psi
        let mut covariant_sq = Complex::new(T::zero(), T::zero());
        for mu in 0..4 {
            let term = h[mu][mu] - i * (v * (k * grad_a[mu][mu]) + g[mu] * (T::lit(2.0) * k * a[mu])) - v * (k * k * a[mu] * a[mu]);
            covariant_sq = covariant_sq + term * eta::<T>(mu);
        }
        let minimal = covariant_sq - v * (m * m);
        let reduced = minimal - i * v * (T::lit(2.0) * k * div_a);

        let n: [T; 4] = std::array::from_fn(|mu| -kappa * a[mu]);
        let n_up: [T; 4] = std::array::from_fn(|mu| eta::<T>(mu) * n[mu]);
        let n2 = (0..4).map(|mu| n_up[mu] * n[mu]).fold(T::zero(), |s, t| s + t);
        let div_n = -kappa * div_a;
        let d5 = i * m;
        let mut fifth = v * (-(T::one() + n2) * m * m) + d5 * v * div_n;
        for mu in 0..4 {
            fifth = fifth + h[mu][mu] * eta::<T>(mu) + d5 * g[mu] * (T::lit(2.0) * n_up[mu]);
        }

        report.reduced = report.reduced.max(reduced.norm());
        report.minimal = report.minimal.max(minimal.norm());
        report.defect_vs_minimal = report.defect_vs_minimal.max((reduced - minimal).norm());
        report.defect_vs_fifth = report.defect_vs_fifth.max((reduced - fifth).norm());
    }
    let tol = T::lit(1e-10) * scale;
    if report.max_divergence > tol {
        return Err(Error::Gauge { divergence: report.max_divergence.to_f64_lossy(), tolerance: tol.to_f64_lossy() });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::potential::{CoulombPotential, TrigPotential, ZeroPotential};

    fn points() -> Vec<[f64; 4]> {
        (0..12).map(|j| {
            let t = j as f64;
            [0.1 * t, 0.5 + 0.2 * t, -0.3 + 0.1 * t, 0.4 - 0.05 * t]
        }).collect()
    }

    #[test]
    fn field_derivatives_match_differences() {
        let fields: [&dyn ComplexField<f64>; 2] = [
            &PlaneWave { amplitude: 1.3, momentum: [0.7, -0.2, 0.4, 1.1] },
            &HydrogenLike { decay: 0.8, energy: 0.6 },
        ];
        let h = 1e-5;
        for f in fields {
            for x in points() {
                let g = f.gradient(&x);
                let hs = f.hessian(&x);
                for mu in 0..4 {
                    let (mut xp, mut xm) = (x, x);
                    xp[mu] += h;
                    xm[mu] -= h;
                    assert!(((f.value(&xp) - f.value(&xm)) / (2.0 * h) - g[mu]).norm() < 1e-8);
                    let (gp, gm) = (f.gradient(&xp), f.gradient(&xm));
                    for nu in 0..4 {
                        assert!(((gp[nu] - gm[nu]) / (2.0 * h) - hs[mu][nu]).norm() < 1e-7);
                    }
                }
            }
        }
    }

    #[test]
    fn free_on_shell_plane_wave() {
        let (m, p) = (1.5f64, [0.0, 0.3, -0.4, 1.2]);
        let e = (m * m + p[1] * p[1] + p[2] * p[2] + p[3] * p[3]).sqrt();
        let wave = PlaneWave { amplitude: 2.0, momentum: [e, p[1], p[2], p[3]] };
        let rep = kg_fourier_residual(&wave, &ZeroPotential, KgCouplings { inverse_compton: m, charge: 0.0 }, &points()).unwrap();
        assert!(rep.reduced < 1e-12);
    }

    #[test]
    fn free_off_shell_plane_wave() {
        let wave = PlaneWave { amplitude: 0.7f64, momentum: [0.4, 0.3, -0.4, 1.2] };
        let m = 0.9;
        let rep = kg_fourier_residual(&wave, &ZeroPotential, KgCouplings { inverse_compton: m, charge: 0.0 }, &points()).unwrap();
        let expected = (wave.momentum_square() + m * m).abs() * 0.7;
        assert!((rep.reduced - expected).abs() < 1e-12);
    }

    #[test]
    fn coulomb_hydrogen_trial_paths_agree() {
        let psi = HydrogenLike { decay: 1.0f64, energy: 0.99 };
        let pot = CoulombPotential { strength: 1.0 / 137.036 };
        let rep = kg_fourier_residual(&psi, &pot, KgCouplings { inverse_compton: 1.0, charge: 1.0 }, &points()).unwrap();
        assert!(rep.defect_vs_minimal < 1e-10);
        assert!(rep.defect_vs_fifth < 1e-10);
        assert!(rep.reduced > 1e-6);
    }

    #[test]
    fn lorentz_trig_potential_paths_agree() {
        let pot = TrigPotential::<f64>::random_lorentz(3, 0.5, 1.0, 21);
        let psi = PlaneWave { amplitude: 1.0, momentum: [0.9, 0.1, 0.2, -0.3] };
        let rep = kg_fourier_residual(&psi, &pot, KgCouplings { inverse_compton: 1.2, charge: 0.7 }, &points()).unwrap();
        assert!(rep.defect_vs_minimal < 1e-12 && rep.defect_vs_fifth < 1e-12);
    }

    #[test]
    fn non_lorentz_potential_is_refused() {
        let pot = TrigPotential::<f64>::random(2, 0.5, 1.0, 22);
        let psi = PlaneWave { amplitude: 1.0, momentum: [0.9, 0.1, 0.2, -0.3] };
        let r = kg_fourier_residual(&psi, &pot, KgCouplings { inverse_compton: 1.0, charge: 1.0 }, &points());
        assert!(matches!(r, Err(Error::Gauge { .. })));
    }
}
