//! Free evolution `i d_tau Psi = -(c lambda/2) lap Psi` on periodic grids.

use num_complex::Complex;
use rustfft::FftDirection;
use serde::Serialize;

use super::spectral::{fft_nd, k_squared, require_periodic, SpectralReal};
use crate::error::{Error, Result};
use crate::numerics::{Boundary, FieldValue, GridField};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Exact Fourier multiplier.
    Spectral,
    /// Second-order central differences, Crank-Nicolson in time; 1D only.
    CrankNicolson,
}

/// Frames at uniformly spaced evolution parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<S, T> {
    pub times: Vec<T>,
    pub frames: Vec<GridField<S, T>>,
}

impl<S: FieldValue<T>, T: Real> Trajectory<S, T> {
    pub fn time_step(&self) -> T {
        if self.times.len() < 2 {
            T::zero()
        } else {
            self.times[1] - self.times[0]
        }
    }

    pub fn last(&self) -> &GridField<S, T> {
        self.frames.last().expect("trajectories hold the initial frame")
    }

    /// Largest `| |psi_{j+1}| - |psi_j| | / |psi_0|` over consecutive frames.
    pub fn max_norm_drift(&self) -> T {
        let n0 = self.frames[0].l2_norm();
        self.frames
            .windows(2)
            .map(|w| (w[1].l2_norm() - w[0].l2_norm()).abs() / n0)
            .fold(T::zero(), T::max)
    }
}

fn check_span<T: Real>(span: T, steps: usize) -> Result<()> {
    if steps == 0 {
        return Err(Error::InvalidInput("at least one step is required".into()));
    }
    if !(span.is_finite() && span >= T::zero()) {
        return Err(Error::InvalidInput("evolution span must be finite and non-negative".into()));
    }
    Ok(())
}

/// Evolves `psi0` over `[0, span]` in `steps` equal steps with
/// `nu = c lambda` (in the grid's length units per unit `tau`).
pub fn evolve_schrodinger<T: SpectralReal>(
    psi0: &GridField<Complex<T>, T>,
    span: T,
    nu: T,
    steps: usize,
    scheme: Scheme,
) -> Result<Trajectory<Complex<T>, T>> {
    check_span(span, steps)?;
    require_periodic(psi0)?;
    if !(nu.is_finite() && nu > T::zero()) {
        return Err(Error::InvalidInput("c lambda must be positive".into()));
    }
    let dt = span / T::from_count(steps);
    let times: Vec<T> = (0..=steps).map(|j| dt * T::from_count(j)).collect();
    let frames = match scheme {
        Scheme::Spectral => spectral_frames(psi0, nu, &times)?,
        Scheme::CrankNicolson => crank_nicolson_frames(psi0, nu, dt, steps)?,
    };
    Ok(Trajectory { times, frames })
}

fn spectral_frames<T: SpectralReal>(psi0: &GridField<Complex<T>, T>, nu: T, times: &[T]) -> Result<Vec<GridField<Complex<T>, T>>> {
    let shape = psi0.shape().to_vec();
    let k2 = k_squared(&shape, psi0.step());
    let mut hat = psi0.values().to_vec();
    fft_nd(&mut hat, &shape, FftDirection::Forward);
    let half = T::lit(0.5);
    let mut frames = Vec::with_capacity(times.len());
    frames.push(psi0.clone());
    for &t in &times[1..] {
        // Phases from the absolute time, so no error accumulates.
        let mut v: Vec<Complex<T>> = hat
            .iter()
            .zip(&k2)
            .map(|(c, &k)| c * Complex::from_polar(T::one(), -half * nu * k * t))
            .collect();
        fft_nd(&mut v, &shape, FftDirection::Inverse);
        frames.push(psi0.with_values(v)?);
    }
    Ok(frames)
}

/// Solves the cyclic tridiagonal system with constant sub/super diagonal
/// `off` and diagonal `diag` (Sherman-Morrison on top of the Thomas sweep).
fn solve_cyclic<T: Real>(diag: Complex<T>, off: Complex<T>, rhs: &[Complex<T>]) -> Vec<Complex<T>> {
    let n = rhs.len();
    let gamma = -diag;
    let mut b = vec![diag; n];
    b[0] = diag - gamma;
    b[n - 1] = diag - off * off / gamma;
    let thomas = |d: &[Complex<T>]| -> Vec<Complex<T>> {
        let mut c_prime = vec![Complex::new(T::zero(), T::zero()); n];
        let mut d_prime = vec![Complex::new(T::zero(), T::zero()); n];
        c_prime[0] = off / b[0];
        d_prime[0] = d[0] / b[0];
        for i in 1..n {
            let m = b[i] - off * c_prime[i - 1];
            c_prime[i] = off / m;
            d_prime[i] = (d[i] - off * d_prime[i - 1]) / m;
        }
        let mut x = d_prime;
        for i in (0..n - 1).rev() {
            let next = x[i + 1];
            x[i] = x[i] - c_prime[i] * next;
        }
        x
    };
    let y = thomas(rhs);
    let mut u = vec![Complex::new(T::zero(), T::zero()); n];
    u[0] = gamma;
    u[n - 1] = off;
    let z = thomas(&u);
    let v_last = off / gamma;
    let factor = (y[0] + v_last * y[n - 1]) / (Complex::new(T::one(), T::zero()) + z[0] + v_last * z[n - 1]);
    y.iter().zip(&z).map(|(yi, zi)| yi - zi * factor).collect()
}

fn crank_nicolson_frames<T: SpectralReal>(
    psi0: &GridField<Complex<T>, T>,
    nu: T,
    dt: T,
    steps: usize,
) -> Result<Vec<GridField<Complex<T>, T>>> {
    if psi0.ndim() != 1 {
        return Err(Error::InvalidInput("the Crank-Nicolson evolver is one-dimensional".into()));
    }
    let n = psi0.len();
    if n < 3 {
        return Err(Error::GridTooSmall { axis: 0, points: n, required: 3 });
    }
    let h = psi0.step()[0];
    // (1 - i th D2) psi' = (1 + i th D2) psi, D2 = (1, -2, 1)/h^2.
    let theta = nu * dt / (T::lit(4.0) * h * h);
    let i_th = Complex::new(T::zero(), theta);
    let one = Complex::new(T::one(), T::zero());
    let diag = one + i_th * T::lit(2.0);
    let off = -i_th;
    let mut frames = Vec::with_capacity(steps + 1);
    frames.push(psi0.clone());
    let mut cur = psi0.values().to_vec();
    let mut rhs = vec![Complex::new(T::zero(), T::zero()); n];
    for _ in 0..steps {
        for i in 0..n {
            let (l, r) = (cur[(i + n - 1) % n], cur[(i + 1) % n]);
            rhs[i] = cur[i] + i_th * (l - cur[i] * T::lit(2.0) + r);
        }
        cur = solve_cyclic(diag, off, &rhs);
        frames.push(psi0.with_values(cur.clone())?);
    }
    Ok(frames)
}

/// Normalised Gaussian packet `exp(-|x - c|^2 / (4 s^2) + i k.x)`, so that
/// `|psi|^2` has variance `s^2` along each axis.
pub fn gaussian_packet<T: Real>(
    shape: &[usize],
    step: &[T],
    origin: &[T],
    center: &[T],
    sigma: T,
    momentum: &[T],
) -> Result<GridField<Complex<T>, T>> {
    if center.len() != shape.len() || momentum.len() != shape.len() {
        return Err(Error::Shape("center and momentum need one entry per axis".into()));
    }
    if !(sigma > T::zero()) {
        return Err(Error::InvalidInput("packet width must be positive".into()));
    }
    let four_s2 = T::lit(4.0) * sigma * sigma;
    let mut g = GridField::from_fn(shape, step, origin, Boundary::Periodic, |x| {
        let mut r2 = T::zero();
        let mut phase = T::zero();
        for a in 0..x.len() {
            let d = x[a] - center[a];
            r2 += d * d;
            phase += momentum[a] * x[a];
        }
        Complex::from_polar((-r2 / four_s2).exp(), phase)
    })?;
    let norm = g.l2_norm();
    for v in g.values_mut() {
        *v = *v / norm;
    }
    Ok(g)
}

/// Variance of the coordinate along `axis` under the weight `|psi|^2`.
pub fn position_variance<S: FieldValue<T>, T: Real>(field: &GridField<S, T>, axis: usize, weight: impl Fn(&S) -> T) -> T {
    let mut mass = T::zero();
    let mut first = T::zero();
    let mut second = T::zero();
    for (flat, v) in field.values().iter().enumerate() {
        let w = weight(v);
        let x = field.coords(flat)[axis];
        mass += w;
        first += w * x;
        second += w * x * x;
    }
    let mean = first / mass;
    second / mass - mean * mean
}

/// `sigma0^2 + (nu tau / (2 sigma0))^2`.
pub fn free_packet_variance<T: Real>(sigma0: T, nu: T, tau: T) -> T {
    let spread = nu * tau / (T::lit(2.0) * sigma0);
    sigma0 * sigma0 + spread * spread
}

/// Largest deviation of spectrally evolved plane waves from
/// `exp(i (k x - nu k^2 tau / 2))`, over every mode of an `n`-point
/// periodic line of length `length`.
pub fn dispersion_error<T: SpectralReal>(n: usize, length: T, nu: T, tau: T) -> Result<T> {
    let h = length / T::from_count(n);
    let ks = super::spectral::wavenumbers(n, h);
    let mut worst = T::zero();
    for &k in &ks {
        let psi0 = GridField::from_fn(&[n], &[h], &[T::zero()], Boundary::Periodic, |x| Complex::from_polar(T::one(), k * x[0]))?;
        let traj = evolve_schrodinger(&psi0, tau, nu, 1, Scheme::Spectral)?;
        let omega = T::lit(0.5) * nu * k * k;
        for (flat, v) in traj.last().values().iter().enumerate() {
            let x = h * T::from_count(flat);
            let exact = Complex::from_polar(T::one(), k * x - omega * tau);
            worst = worst.max((v - exact).norm());
        }
    }
    Ok(worst)
}

/// `|U(t1 + t2) psi0 - U(t2) U(t1) psi0| / |psi0|`, each leg taken in
/// `steps` steps of the chosen scheme.
pub fn propagator_composition_check<T: SpectralReal>(
    psi0: &GridField<Complex<T>, T>,
    nu: T,
    t1: T,
    t2: T,
    steps: usize,
    scheme: Scheme,
) -> Result<T> {
    let direct = evolve_schrodinger(psi0, t1 + t2, nu, steps, scheme)?;
    let first = evolve_schrodinger(psi0, t1, nu, steps, scheme)?;
    let composed = evolve_schrodinger(first.last(), t2, nu, steps, scheme)?;
    let diff = direct.last().values().iter().zip(composed.last().values()).map(|(a, b)| *a - *b).collect();
    Ok(psi0.with_values(diff)?.l2_norm() / psi0.l2_norm())
}
