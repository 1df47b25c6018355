use serde::Serialize;

use super::laguerre::laguerre_scaled;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `M_{n,1/2}(x)`, its first two derivatives and `M'^2 - M M''`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WhittakerEval<T> {
    pub m: T,
    pub m1: T,
    pub m2: T,
    pub wronskian_combo: T,
}

/// Evaluates `M_{n,1/2}(x) = (x/n) e^{-x/2} L_{n-1}^{(1)}(x)`.
///
/// All three values are assembled from `g = e^{-x/2} L_{n-1}^{(1)}` and its
/// derivatives, which stay bounded for every n, so large degrees do not
/// overflow. `wronskian_combo` uses the form reduced with the Whittaker
/// equation `M'' = (1/4 - n/x) M`:
///
/// `n^2 (M'^2 - M M'') = (g + x g')^2 + x (n - x/4) g^2`,
///
/// both terms non-negative below the turning point `x = 4n`, so no
/// cancellation occurs where the combination is not exponentially small.
pub fn whittaker_m_half<T: Real>(n: usize, x: T) -> Result<WhittakerEval<T>> {
    if n == 0 {
        return Err(Error::InvalidInput("Whittaker index n must be >= 1".into()));
    }
    if !(x.is_finite() && x >= T::zero()) {
        return Err(Error::InvalidInput(format!(
            "Whittaker argument must be finite and non-negative, got {x}"
        )));
    }
    let (g, g1, g2) = scaled_g(n, x);
    let nf = T::from_count(n);
    let quarter = T::lit(0.25);
    let m = x * g / nf;
    let m1 = (g + x * g1) / nf;
    let m2 = (T::lit(2.0) * g1 + x * g2) / nf;
    let lead = g + x * g1;
    let combo = (lead * lead + x * (nf - quarter * x) * g * g) / (nf * nf);
    Ok(WhittakerEval {
        m,
        m1,
        m2,
        wronskian_combo: combo,
    })
}

/// `g = e^{-x/2} L_{n-1}^{(1)}(x)` with `g'` and `g''`.
fn scaled_g<T: Real>(n: usize, x: T) -> (T, T, T) {
    let half = T::lit(0.5);
    let (l, l1, l2, log_scale) = if use_series(n, x) {
        let (l, l1, l2) = series_laguerre(n, x);
        (l, l1, l2, T::zero())
    } else {
        let s = laguerre_scaled(n - 1, 1, x);
        (s.value, s.d1, s.d2, s.log_scale)
    };
    let w = (log_scale - half * x).exp();
    let g = l * w;
    let g1 = (l1 - half * l) * w;
    let g2 = (l2 - l1 + T::lit(0.25) * l) * w;
    (g, g1, g2)
}

/// Degree above which the hypergeometric power series replaces the O(n)
/// recurrence, provided `n x` stays within [`SERIES_MAX_NX`].
const SERIES_MIN_DEGREE: usize = 64;

/// Cancellation in the series grows like `exp(2 sqrt(n x))`; at 16 it costs
/// about three and a half digits.
const SERIES_MAX_NX: f64 = 16.0;

fn use_series<T: Real>(n: usize, x: T) -> bool {
    n >= SERIES_MIN_DEGREE && T::from_count(n) * x <= T::lit(SERIES_MAX_NX)
}

/// `L_{n-1}^{(1)}(x) = n 1F1(1-n; 2; x)` and its derivatives by direct
/// summation, for small `n x`.
fn series_laguerre<T: Real>(n: usize, x: T) -> (T, T, T) {
    let nf = T::from_count(n);
    // term = c_k x^k with c_k = (1-n)_k / ((2)_k k!); p = c_k x^{k-1}
    let mut term = T::one();
    let mut p = T::zero();
    let (mut f, mut f1, mut f2) = (T::one(), T::zero(), T::zero());
    let mut peak = T::one();
    let negligible = T::epsilon() * T::lit(1e-3);
    for k in 0..n - 1 {
        let kf = T::from_count(k);
        let ratio = (kf + T::one() - nf) / ((kf + T::lit(2.0)) * (kf + T::one()));
        let next_p = term * ratio;
        let next_q = p * ratio;
        term = next_p * x;
        p = next_p;
        let d1 = (kf + T::one()) * next_p;
        let d2 = (kf + T::one()) * kf * next_q;
        f += term;
        f1 += d1;
        f2 += d2;
        peak = peak.max(term.abs());
        if kf * kf > T::lit(4.0) * nf * x
            && term.abs() <= negligible * peak
            && d1.abs() <= negligible * f1.abs().max(peak)
            && d2.abs() <= negligible * f2.abs().max(peak)
        {
            break;
        }
    }
    (nf * f, nf * f1, nf * f2)
}
