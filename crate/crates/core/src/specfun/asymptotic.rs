//! Two-branch large-degree asymptotics of `L_{n-1}^{(1)}(r n)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Smallest degree index accepted by [`laguerre_asymptotic`]. Below it the
/// leading-order form is off by more than a percent of its envelope.
pub const ASYMPTOTIC_MIN_DEGREE: usize = 50;

/// Default half-width of the excluded neighbourhood of the turning point r = 4.
pub const DEFAULT_TURNING_MARGIN: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    /// r < 4
    Oscillatory,
    /// r >= 4
    Exponential,
}

/// Phase data of the branch selected for a given r. Only the phase function
/// of the active region is defined; the other is `None`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticBranch<T> {
    pub region: Region,
    pub varrho: Option<T>,
    pub varsigma: Option<T>,
}

/// Asymptotic `L_{n-1}^{(1)}(r n)`, stored as `scaled = e^{-r n / 2} L` so
/// large degrees stay representable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticLaguerre<T> {
    pub branch: AsymptoticBranch<T>,
    pub scaled: T,
    /// `1 / (r sqrt(pi n phase'))`: the amplitude the branch oscillates
    /// within (or decays from), also scaled by `e^{-r n / 2}`.
    pub envelope: T,
    pub n: usize,
    pub r: T,
}

impl<T: Real> AsymptoticLaguerre<T> {
    /// Unscaled value; may overflow to infinity for large `r n`.
    pub fn value(&self) -> T {
        self.scaled * (self.r * T::from_count(self.n) * T::lit(0.5)).exp()
    }
}

/// `(sqrt(t - t^2) + asin(sqrt t)) / 2` on `[0, 1]`.
pub fn varrho<T: Real>(t: T) -> Result<T> {
    if !(t >= T::zero() && t <= T::one()) {
        return Err(Error::InvalidInput(format!("varrho defined on [0, 1], got {t}")));
    }
    Ok(T::lit(0.5) * ((t - t * t).max(T::zero()).sqrt() + t.sqrt().asin()))
}

/// `(sqrt(t^2 - t) - acosh(sqrt t)) / 2` on `[1, inf)`.
pub fn varsigma<T: Real>(t: T) -> Result<T> {
    if !(t >= T::one() && t.is_finite()) {
        return Err(Error::InvalidInput(format!("varsigma defined on [1, inf), got {t}")));
    }
    Ok(T::lit(0.5) * ((t * t - t).max(T::zero()).sqrt() - t.sqrt().acosh()))
}

/// `d varrho / dt = sqrt(1 - t) / (2 sqrt t)`.
pub fn varrho_prime<T: Real>(t: T) -> T {
    (T::one() - t).sqrt() / (T::lit(2.0) * t.sqrt())
}

/// `d varsigma / dt = sqrt(t - 1) / (2 sqrt t)`.
pub fn varsigma_prime<T: Real>(t: T) -> T {
    (t - T::one()).sqrt() / (T::lit(2.0) * t.sqrt())
}

/// Leading-order asymptotic form of `L_{n-1}^{(1)}(r n)` for large n.
///
/// With `t = r / 4`:
/// * `r < 4`: `e^{rn/2} cos(4 n varrho(t) - 3 pi / 4) / (r sqrt(pi n varrho'(t)))`
/// * `r >= 4`: `(-1)^{n-1} e^{rn/2} e^{-4 n varsigma(t)} / (2 r sqrt(pi n varsigma'(t)))`
///
/// Arguments within `margin` of the turning point are refused: the Airy
/// transition region is not modelled.
pub fn laguerre_asymptotic<T: Real>(n: usize, r: T, margin: T) -> Result<AsymptoticLaguerre<T>> {
    if n < ASYMPTOTIC_MIN_DEGREE {
        return Err(Error::AsymptoticFloor {
            n,
            floor: ASYMPTOTIC_MIN_DEGREE,
        });
    }
    if !(r > T::zero() && r.is_finite()) {
        return Err(Error::InvalidInput(format!("asymptotic argument must be positive, got {r}")));
    }
    let four = T::lit(4.0);
    if (r - four).abs() <= margin {
        return Err(Error::TurningPoint {
            r: r.to_f64_lossy(),
            margin: margin.to_f64_lossy(),
        });
    }
    let nf = T::from_count(n);
    let t = r / four;
    let pi = T::PI();
    if r < four {
        let phase = varrho(t)?;
        let envelope = T::one() / (r * (pi * nf * varrho_prime(t)).sqrt());
        let scaled = envelope * (four * nf * phase - T::lit(0.75) * pi).cos();
        Ok(AsymptoticLaguerre {
            branch: AsymptoticBranch {
                region: Region::Oscillatory,
                varrho: Some(phase),
                varsigma: None,
            },
            scaled,
            envelope,
            n,
            r,
        })
    } else {
        let phase = varsigma(t)?;
        let sign = if n % 2 == 1 { T::one() } else { -T::one() };
        let envelope = T::one() / (T::lit(2.0) * r * (pi * nf * varsigma_prime(t)).sqrt());
        let scaled = sign * envelope * (-four * nf * phase).exp();
        Ok(AsymptoticLaguerre {
            branch: AsymptoticBranch {
                region: Region::Exponential,
                varrho: None,
                varsigma: Some(phase),
            },
            scaled,
            envelope,
            n,
            r,
        })
    }
}
