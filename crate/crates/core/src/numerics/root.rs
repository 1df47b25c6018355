//! Bracketed scalar root finding.

use super::Tolerance;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Update rule inside the bracket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RootMethod {
    #[default]
    Bisection,
    /// Regula falsi with the Illinois weighting; falls back to bisection
    /// when a secant step would leave the bracket.
    Illinois,
}

/// Bisection on `[lo, hi]`; see [`find_root_with`].
pub fn find_root<T, F>(f: F, lo: T, hi: T, tol: &Tolerance<T>) -> Result<T>
where
    T: Real,
    F: Fn(T) -> T,
{
    find_root_with(f, lo, hi, tol, RootMethod::Bisection)
}

/// Finds `x` in `[lo, hi]` with `f(x) = 0`, given `f(lo) * f(hi) < 0`.
///
/// Terminates when the bracket is narrower than `tol.threshold(x)` or an
/// exact zero is hit. The returned point always lies inside the initial
/// bracket.
pub fn find_root_with<T, F>(f: F, lo: T, hi: T, tol: &Tolerance<T>, method: RootMethod) -> Result<T>
where
    T: Real,
    F: Fn(T) -> T,
{
    tol.validate()?;
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::NoBracket {
            lo: a.to_f64_lossy(),
            hi: b.to_f64_lossy(),
            f_lo: fa.to_f64_lossy(),
            f_hi: fb.to_f64_lossy(),
        });
    }

    let half = T::lit(0.5);
    // Which endpoint was retained on the previous Illinois step (-1 = a, 1 = b).
    let mut retained = 0i8;
    for _ in 0..tol.max_iter {
        let mid = half * (a + b);
        if (b - a) <= tol.threshold(mid) || mid <= a || mid >= b {
            return Ok(mid);
        }
        let x = match method {
            RootMethod::Bisection => mid,
            RootMethod::Illinois => {
                let s = (a * fb - b * fa) / (fb - fa);
                if s.is_finite() && s > a && s < b {
                    s
                } else {
                    mid
                }
            }
        };
        let fx = f(x);
        if fx == T::zero() {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
            if method == RootMethod::Illinois && retained == 1 {
                fb = fb * half;
            }
            retained = 1;
        } else {
            b = x;
            fb = fx;
            if method == RootMethod::Illinois && retained == -1 {
                fa = fa * half;
            }
            retained = -1;
        }
    }
    Err(Error::RootNonConvergence {
        lo: a.to_f64_lossy(),
        hi: b.to_f64_lossy(),
        iterations: tol.max_iter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance<f64> {
        Tolerance::new(1e-14, 1e-15, 200).unwrap()
    }

    #[test]
    fn linear_root() {
        let x = find_root(|x: f64| x - 2.0, 0.0, 5.0, &tol()).unwrap();
        assert!((x - 2.0).abs() < 1e-13);
    }

    #[test]
    fn sqrt_two_both_methods() {
        for method in [RootMethod::Bisection, RootMethod::Illinois] {
            let x = find_root_with(|x: f64| x * x - 2.0, 1.0, 2.0, &tol(), method).unwrap();
            assert!((x - std::f64::consts::SQRT_2).abs() < 1e-8, "{method:?}");
        }
    }

    #[test]
    fn missing_sign_change_is_an_error() {
        let err = find_root(|x: f64| x * x + 1.0, -1.0, 1.0, &tol()).unwrap_err();
        assert!(matches!(err, Error::NoBracket { .. }));
    }

    #[test]
    fn swapped_bracket_is_accepted() {
        let x = find_root(|x: f64| x - 0.25, 1.0, 0.0, &tol()).unwrap();
        assert!((x - 0.25).abs() < 1e-13);
    }

    #[test]
    fn budget_exhaustion_reports_bracket() {
        let t = Tolerance::new(1e-15, 0.0, 3).unwrap();
        let err = find_root(|x: f64| x - 1.0 / 3.0, 0.0, 1.0, &t).unwrap_err();
        assert!(matches!(err, Error::RootNonConvergence { iterations: 3, .. }));
    }
}
