use serde::Serialize;

use super::ScaleSet;
use crate::error::{Error, Result};
use crate::numerics::{find_root, Tolerance};
use crate::scalar::Real;

/// Hydrogenic quantum numbers with `n >= 1` and `0 <= l <= n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LevelIndex {
    n: u32,
    l: u32,
}

impl LevelIndex {
    pub fn new(n: u32, l: u32) -> Result<Self> {
        if n == 0 || l > n {
            return Err(Error::InvalidInput(format!(
                "level index needs n >= 1 and l <= n, got n={n}, l={l}"
            )));
        }
        Ok(Self { n, l })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    /// All indices with `n <= n_max` and `l < n`.
    pub fn conventional(n_max: u32) -> impl Iterator<Item = LevelIndex> {
        (1..=n_max).flat_map(|n| (0..n).map(move |l| LevelIndex { n, l }))
    }
}

/// `n - l - 1/2 + sqrt((l + 1/2)^2 + a^2)`.
fn bracket<T: Real>(idx: LevelIndex, a2: T) -> T {
    let half = T::lit(0.5);
    let lh = T::from_count(idx.l as usize) + half;
    T::from_count(idx.n as usize) - lh + (lh * lh + a2).sqrt()
}

/// `t / (sqrt(1+t) (1 + sqrt(1+t)))`, i.e. `1 - (1+t)^{-1/2}` without cancellation.
fn one_minus_inv_sqrt<T: Real>(t: T) -> T {
    let r = (T::one() + t).sqrt();
    t / (r * (T::one() + r))
}

/// `E_nl / mc^2` for coupling `za = Z alpha`.
pub fn kg_energy_ratio<T: Real>(idx: LevelIndex, za: T) -> T {
    let a2 = za * za;
    let b = bracket(idx, a2);
    (T::one() + a2 / (b * b)).sqrt().recip()
}

/// `1 - E_nl / mc^2`, accurate for weak coupling.
pub fn kg_binding_ratio<T: Real>(idx: LevelIndex, za: T) -> T {
    let a2 = za * za;
    let b = bracket(idx, a2);
    one_minus_inv_sqrt(a2 / (b * b))
}

/// Klein-Gordon hydrogenic level energy E_nl.
pub fn kg_energy<T: Real>(idx: LevelIndex, scales: &ScaleSet<T>) -> T {
    scales.mc2() * kg_energy_ratio(idx, scales.z_alpha())
}

/// Binding energy `mc^2 - E_nl`.
pub fn kg_binding_energy<T: Real>(idx: LevelIndex, scales: &ScaleSet<T>) -> T {
    scales.mc2() * kg_binding_ratio(idx, scales.z_alpha())
}

/// Residual of the quantization condition written with the conjugate
/// wavelength `lambda'` and the metric length `lambda*`:
///
/// `[(lambda'/lambda)^2 - 1] [n - l - 1/2 + sqrt((l+1/2)^2 + (lambda*/lambda)^2)]^2 - (lambda*/lambda)^2`.
///
/// Vanishes exactly when `lambda' = hbar c / E_nl`.
pub fn matching_residual<T: Real>(lambda_prime: T, idx: LevelIndex, scales: &ScaleSet<T>) -> Result<T> {
    if !(lambda_prime > T::zero()) {
        return Err(Error::InvalidInput(format!(
            "lambda' must be positive, got {lambda_prime}"
        )));
    }
    let x = lambda_prime / scales.lambda();
    let a = scales.lambda_star() / scales.lambda();
    let b = bracket(idx, a * a);
    Ok((x * x - T::one()) * b * b - a * a)
}

/// Largest `lambda*/Lambda` for which the statistical condition keeps a
/// real root at `(n, l)`. Infinite when `n - l - 1/2 <= l + 1/2`.
pub fn stat_critical_ratio<T: Real>(idx: LevelIndex) -> T {
    let half = T::lit(0.5);
    let lh = T::from_count(idx.l as usize) + half;
    let radial = T::from_count(idx.n as usize) - lh;
    if radial <= lh {
        return T::infinity();
    }
    let q = lh / radial;
    lh / (T::one() - q * q).sqrt()
}

/// Statistical quantization residual in terms of `delta = Lambda'/Lambda - 1`
/// and `s = lambda*/Lambda`. `None` where the square root turns complex.
fn stat_residual<T: Real>(delta: T, s: T, idx: LevelIndex) -> Option<T> {
    let half = T::lit(0.5);
    let y = T::one() + delta;
    let lh = T::from_count(idx.l as usize) + half;
    let sy = s / y;
    let disc = lh * lh - sy * sy;
    if disc < T::zero() {
        return None;
    }
    let b = T::from_count(idx.n as usize) - lh + disc.sqrt();
    // 1/y^2 - 1 written to avoid cancellation near y = 1.
    let factor = -delta * (T::lit(2.0) + delta) / (y * y);
    Some(factor * b * b + sy * sy)
}

/// `Lambda'_nl / Lambda - 1` from the statistical quantization condition.
pub fn stat_wavelength_shift<T: Real>(idx: LevelIndex, ratio: T) -> Result<T> {
    let s = ratio;
    if !(s >= T::zero()) || !s.is_finite() {
        return Err(Error::InvalidInput(format!("lambda*/Lambda must be non-negative, got {s}")));
    }
    if s == T::zero() {
        return Ok(T::zero());
    }
    let critical = stat_critical_ratio::<T>(idx);
    let complex = || Error::ComplexRegime { ratio: s.to_f64_lossy(), critical: critical.to_f64_lossy() };

    let lh = T::from_count(idx.l as usize) + T::lit(0.5);
    let lo = (s / lh - T::one()).max(T::zero());
    let f = |d: T| stat_residual(d, s, idx);
    let f_lo = f(lo).ok_or_else(complex)?;
    if f_lo <= T::zero() {
        return Err(complex());
    }

    // Non-relativistic estimate seeds the upper end of the bracket.
    let n = T::from_count(idx.n as usize);
    let seed = s * s / (T::lit(2.0) * n * n);
    let mut hi = lo.max(seed) * T::lit(2.0) + T::epsilon();
    let mut expansions = 0;
    while f(hi).is_none_or(|v| v > T::zero()) {
        hi = hi * T::lit(2.0);
        expansions += 1;
        if expansions > 200 || !hi.is_finite() {
            return Err(Error::NoBracket {
                lo: lo.to_f64_lossy(),
                hi: hi.to_f64_lossy(),
                f_lo: f_lo.to_f64_lossy(),
                f_hi: f64::NAN,
            });
        }
    }
    let tol = Tolerance::new(T::epsilon(), T::min_positive_value(), 4000)?;
    // The residual is real on the whole bracket, since it only shrinks s/y.
    find_root(|d| f(d).unwrap_or(T::nan()), lo, hi, &tol)
}

/// Statistical wavelength `Lambda'_nl`, the root of the statistical
/// quantization condition above `Lambda`.
pub fn stat_wavelength<T: Real>(idx: LevelIndex, scales: &ScaleSet<T>) -> Result<T> {
    let shift = stat_wavelength_shift(idx, scales.star_ratio())?;
    Ok(scales.stat_length * (T::one() + shift))
}

/// Non-relativistic `Lambda'_nl ~ Lambda [1 + (lambda*/Lambda)^2 / (2 n^2)]`.
pub fn stat_wavelength_expansion<T: Real>(idx: LevelIndex, scales: &ScaleSet<T>) -> T {
    let s = scales.star_ratio();
    let n = T::from_count(idx.n as usize);
    scales.stat_length * (T::one() + s * s / (T::lit(2.0) * n * n))
}

/// `e_n = Mc^2 [1 - (lambda*/Lambda)^2 / (2 n^2)]`.
pub fn stat_energy<T: Real>(n: u32, scales: &ScaleSet<T>) -> Result<T> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let s = scales.star_ratio();
    let nn = T::from_count(n as usize);
    Ok(scales.stat_rest_energy() * (T::one() - s * s / (T::lit(2.0) * nn * nn)))
}
