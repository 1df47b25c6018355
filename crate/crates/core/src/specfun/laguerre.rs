use crate::error::{Error, Result};
use crate::scalar::Real;

/// `L_n^{(alpha)}(x)` with its first two derivatives in x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaguerreEval<T> {
    pub value: T,
    pub d1: T,
    pub d2: T,
}

/// Laguerre value and derivatives sharing one exponent:
/// the true values are `field * exp(log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledLaguerre<T> {
    pub value: T,
    pub d1: T,
    pub d2: T,
    pub log_scale: T,
}

/// Three-term recurrence for `L_n^{(alpha)}(x)`, renormalising whenever the
/// iterate grows past `T::max_value()^(1/4)`. Returns `(mantissa, log_scale)`.
fn recurrence<T: Real>(n: usize, alpha: u32, x: T) -> (T, T) {
    let a = T::lit(f64::from(alpha));
    if n == 0 {
        return (T::one(), T::zero());
    }
    let big = T::max_value().powf(T::lit(0.25));
    let log_big = big.ln();
    let mut prev = T::one();
    let mut cur = T::one() + a - x;
    let mut log_scale = T::zero();
    for k in 1..n {
        let kf = T::from_count(k);
        let next = ((T::lit(2.0) * kf + T::one() + a - x) * cur - (kf + a) * prev) / (kf + T::one());
        prev = cur;
        cur = next;
        if cur.abs() > big {
            cur = cur / big;
            prev = prev / big;
            log_scale += log_big;
        }
    }
    (cur, log_scale)
}

/// Scaled evaluation that never overflows, valid for any degree.
///
/// The derivatives come from their own recurrences,
/// `d/dx L_n^{(a)} = -L_{n-1}^{(a+1)}` and `d2/dx2 L_n^{(a)} = L_{n-2}^{(a+2)}`,
/// which avoids the `1/x` cancellation of the mixed-degree identity near 0.
pub fn laguerre_scaled<T: Real>(n: usize, alpha: u32, x: T) -> ScaledLaguerre<T> {
    let (v, lv) = recurrence(n, alpha, x);
    let (d1, l1) = if n >= 1 {
        let (m, l) = recurrence(n - 1, alpha + 1, x);
        (-m, l)
    } else {
        (T::zero(), T::neg_infinity())
    };
    let (d2, l2) = if n >= 2 {
        recurrence(n - 2, alpha + 2, x)
    } else {
        (T::zero(), T::neg_infinity())
    };
    let log_scale = lv.max(l1).max(l2);
    let rescale = |m: T, l: T| if m == T::zero() { m } else { m * (l - log_scale).exp() };
    ScaledLaguerre {
        value: rescale(v, lv),
        d1: rescale(d1, l1),
        d2: rescale(d2, l2),
        log_scale,
    }
}

/// `L_n^{(alpha)}(x)` and its first two derivatives.
///
/// Errors with [`Error::Overflow`] when any of the three does not fit the
/// scalar type (for `f64` this starts around `x ~ 700 + 2 ln n!` past the
/// largest zero `~4n`).
pub fn laguerre<T: Real>(n: usize, alpha: u32, x: T) -> Result<LaguerreEval<T>> {
    if !x.is_finite() {
        return Err(Error::InvalidInput(format!("Laguerre argument {x} is not finite")));
    }
    let s = laguerre_scaled(n, alpha, x);
    let scale = s.log_scale.exp();
    let out = LaguerreEval {
        value: s.value * scale,
        d1: s.d1 * scale,
        d2: s.d2 * scale,
    };
    if out.value.is_finite() && out.d1.is_finite() && out.d2.is_finite() {
        Ok(out)
    } else {
        Err(Error::Overflow {
            n,
            x: x.to_f64_lossy(),
        })
    }
}
