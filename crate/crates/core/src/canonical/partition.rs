use serde::Serialize;

use super::density::{degeneracy_tail_limit, trapped_degeneracy};
use crate::error::{Error, Result};
use crate::numerics::{sum_series, SeriesReport, Tolerance};
use crate::scalar::{CompensatedSum, Real};
use crate::specfun::erfcx_minus_one;
use crate::spectrum::ScaleSet;

/// One bound level of the discrete sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelTerm<T> {
    pub n: usize,
    /// Boltzmann weight `exp(-u e_n / hbar)`.
    pub weight: T,
    /// `int_0^R D_n(r) dr`, between 0 and `n^2`.
    pub trapped: T,
}

/// Canonical sum split into continuum and bound-state parts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionResult<T> {
    pub z_c: T,
    pub z_d: T,
    pub z_total: T,
    pub terms_c: SeriesReport<T>,
    pub terms_d: SeriesReport<T>,
    pub per_level_d: Vec<LevelTerm<T>>,
}

/// How many bound levels to sum explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum NMaxPolicy {
    /// Stop once the bracketed remainder meets the tolerance.
    #[default]
    Converge,
    /// Sum exactly this many levels, then bracket the remainder.
    Fixed(usize),
}

/// Factor `exp(a^2) erfc(a) - 1` of the continuum sum at level `n`, with
/// `a = (lambda*/Lambda) sqrt(eta0 / (2 n^2))`. Negative for `a > 0`.
pub fn brace_factor<T: Real>(n: usize, star_ratio: T, eta0: T) -> T {
    let nf = T::from_count(n);
    let a = star_ratio * (eta0 / (T::lit(2.0) * nf * nf)).sqrt();
    erfcx_minus_one(a)
}

/// Large-`n` form `-(lambda*/(n Lambda)) sqrt(2 eta0 / pi)` of [`brace_factor`].
pub fn brace_asymptote<T: Real>(n: usize, star_ratio: T, eta0: T) -> T {
    -star_ratio / T::from_count(n) * (T::lit(2.0) * eta0 / T::PI()).sqrt()
}

/// Ideal-gas part `V e^{-eta0} / (Lambda^3 (2 pi eta0)^{3/2})`.
pub fn ideal_gas_term<T: Real>(scales: &ScaleSet<T>) -> T {
    let eta0 = scales.eta0();
    let lam = scales.stat_length;
    scales.volume() * (-eta0).exp() / (lam * lam * lam * (T::lit(2.0) * T::PI() * eta0).powf(T::lit(1.5)))
}

fn check_scales<T: Real>(scales: &ScaleSet<T>) -> Result<()> {
    scales.validate()?;
    if !(scales.eta0() > T::zero()) {
        return Err(Error::InvalidInput("eta0 must be positive".into()));
    }
    Ok(())
}

/// Continuum part `Z_c`. The correction series carries Gaussian damping
/// `exp(-kappa n^2)`, `kappa = pi^{4/3} u c Lambda / (2 V^{2/3})`; since
/// `|brace| <= 2a / sqrt(pi)` its remainder past `N >= 1/sqrt(2 kappa)` is
/// bounded by `C exp(-kappa N^2) / (2 kappa)`.
pub fn z_continuous<T: Real>(scales: &ScaleSet<T>, tol: &Tolerance<T>) -> Result<(T, SeriesReport<T>)> {
    check_scales(scales)?;
    tol.validate()?;
    let eta0 = scales.eta0();
    let s = scales.star_ratio();
    let ideal = ideal_gas_term(scales);
    if s == T::zero() {
        return Ok((ideal, SeriesReport::exact(T::zero(), 0)));
    }
    let kappa = T::PI().powf(T::lit(4.0) / T::lit(3.0)) * scales.damping() * T::lit(0.5);
    let pref = (-eta0).exp() * T::lit(0.5);
    let term = |n: usize| {
        let nf = T::from_count(n);
        -pref * nf * nf * (-kappa * nf * nf).exp() * brace_factor(n, s, eta0)
    };
    let c = pref * T::lit(2.0) * s * (eta0 / (T::lit(2.0) * T::PI())).sqrt();
    let monotone_from = (T::lit(2.0) * kappa).sqrt().recip();
    let tail = |n: usize| {
        let nf = T::from_count(n);
        if nf < monotone_from {
            T::infinity()
        } else {
            c * (-kappa * nf * nf).exp() / (T::lit(2.0) * kappa)
        }
    };
    // Measure convergence against the whole of Z_c, not just the correction.
    let report = sum_series(term, tail, &tol.with_abs(tol.abs.max(tol.rel * ideal.abs())));
    if !report.converged {
        return Err(Error::SeriesNonConvergence {
            partial: report.value.to_f64_lossy(),
            tail_bound: report.tail_bound.to_f64_lossy(),
            terms: report.terms_used,
        });
    }
    Ok((ideal + report.value, report))
}

/// Weight `exp(-u e_n / hbar) = exp(-eta0 [1 - (lambda*/Lambda)^2 / (2 n^2)])`.
pub fn level_weight<T: Real>(n: usize, scales: &ScaleSet<T>) -> T {
    let s = scales.star_ratio();
    let eta0 = scales.eta0();
    let nf = T::from_count(n);
    (-eta0 * (T::one() - s * s / (T::lit(2.0) * nf * nf))).exp()
}

/// `sum_{k > n} k^{-3}` from Euler-Maclaurin, with a bound on its error.
fn cubic_tail<T: Real>(n: usize) -> (T, T) {
    let nf = T::from_count(n);
    let n2 = nf * nf;
    let value = T::one() / (T::lit(2.0) * n2) - T::one() / (T::lit(2.0) * n2 * nf)
        + T::one() / (T::lit(4.0) * n2 * n2);
    (value, T::one() / (T::lit(6.0) * n2 * n2 * n2))
}

/// Trapped degeneracy with a tolerance scaled to its expected size, so
/// rounding noise in tiny large-`n` integrals does not stall quadrature.
fn level_trapped<T: Real>(n: usize, radius: T) -> Result<T> {
    let nf = T::from_count(n);
    let scale = degeneracy_tail_limit(n, radius).min(nf * nf);
    let tol = Tolerance::new(T::lit(1e-12).max(T::epsilon() * T::lit(8.0)), scale * T::lit(1e-15), 4000)?;
    trapped_degeneracy(n, radius, &tol)
}

/// Upper bound on `G = lim n^3 int_0^R D_n`. `n^3 int_0^R D_n` rises to `G`
/// with a `1/n^2` correction, so the last difference of a doubling
/// sequence, taken twice, covers the remaining gap.
fn dirichlet_constant_bound<T: Real>(radius: T) -> Result<T> {
    let mut m = 4096usize;
    while T::from_count(m) < T::lit(64.0) * radius.sqrt() {
        m *= 2;
    }
    let scaled = |n: usize| -> Result<T> {
        let nf = T::from_count(n);
        Ok(nf * nf * nf * level_trapped(n, radius)?)
    };
    let (c1, c2, c4) = (scaled(m)?, scaled(2 * m)?, scaled(4 * m)?);
    let (d1, d2) = (c2 - c1, c4 - c2);
    if !(d1 >= T::zero() && d2 >= T::zero() && d2 <= d1) {
        return Err(Error::Stability(format!(
            "n^3 int_0^R D_n is not settling monotonically near n = {m}"
        )));
    }
    Ok(c4 + T::lit(2.0) * d2)
}

/// Bound-state part `Z_d = sum_n exp(-u e_n / hbar) int_0^R D_n(r) dr`.
///
/// For `n > N`, `n^3 int_0^R D_n` lies between its value at `N` and the
/// limit bound `G`, and the weights lie between `e^{-eta0}` and the weight at
/// `N + 1`. The remainder is therefore bracketed by multiples of
/// `sum_{k>N} k^{-3}`; the returned value adds the bracket midpoint and
/// `tail_bound` is its half-width.
pub fn z_discrete<T: Real>(
    scales: &ScaleSet<T>,
    policy: NMaxPolicy,
    tol: &Tolerance<T>,
) -> Result<(T, SeriesReport<T>, Vec<LevelTerm<T>>)> {
    check_scales(scales)?;
    tol.validate()?;
    // Radius in units of rho / 2.
    let radius = T::lit(2.0) * scales.cavity_radius / scales.rho()?;
    let g_upper = dirichlet_constant_bound(radius)?;
    let w_inf = (-scales.eta0()).exp();
    let plateau = radius.sqrt() * T::lit(0.5);

    let mut levels = Vec::new();
    let mut partial = CompensatedSum::new();
    let mut prev_scaled = T::zero();
    let limit = match policy {
        NMaxPolicy::Converge => tol.max_iter,
        NMaxPolicy::Fixed(n) => n,
    };
    let mut report = None;
    for n in 1..=limit {
        let weight = level_weight(n, scales);
        let trapped = level_trapped(n, radius)?;
        levels.push(LevelTerm { n, weight, trapped });
        partial.add(weight * trapped);

        let nf = T::from_count(n);
        let scaled = nf * nf * nf * trapped;
        let settled = T::from_count(n) > plateau && scaled >= prev_scaled;
        prev_scaled = scaled;
        if n < 2 || !settled {
            if n == limit {
                report = Some((partial.value(), T::infinity()));
            }
            continue;
        }
        let (zeta3, zeta3_err) = cubic_tail::<T>(n);
        let lo = w_inf * scaled * (zeta3 - zeta3_err);
        let hi = level_weight(n + 1, scales) * g_upper * (zeta3 + zeta3_err);
        let estimate = partial.value() + (lo + hi) * T::lit(0.5);
        let half_width = (hi - lo) * T::lit(0.5);
        let done = match policy {
            NMaxPolicy::Converge => half_width <= tol.threshold(estimate),
            NMaxPolicy::Fixed(_) => n == limit,
        };
        if done {
            report = Some((estimate, half_width));
            break;
        }
        if n == limit {
            report = Some((estimate, half_width));
        }
    }
    let (value, tail_bound) = report.unwrap_or((partial.value(), T::infinity()));
    let converged = tail_bound <= tol.threshold(value);
    let summary = SeriesReport { value, terms_used: levels.len(), tail_bound, converged };
    if policy == NMaxPolicy::Converge && !converged {
        return Err(Error::SeriesNonConvergence {
            partial: value.to_f64_lossy(),
            tail_bound: tail_bound.to_f64_lossy(),
            terms: levels.len(),
        });
    }
    Ok((value, summary, levels))
}

/// `Z = Z_c + Z_d`.
pub fn partition(scales: &ScaleSet<f64>, policy: NMaxPolicy, tol: &Tolerance<f64>) -> Result<PartitionResult<f64>> {
    partition_generic(scales, policy, tol)
}

/// Generic form of [`partition`].
pub fn partition_generic<T: Real>(
    scales: &ScaleSet<T>,
    policy: NMaxPolicy,
    tol: &Tolerance<T>,
) -> Result<PartitionResult<T>> {
    let (z_c, terms_c) = z_continuous(scales, tol)?;
    let (z_d, terms_d, per_level_d) = z_discrete(scales, policy, tol)?;
    Ok(PartitionResult { z_c, z_d, z_total: z_c + z_d, terms_c, terms_d, per_level_d })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scales(ratio: f64, eta0: f64, volume: f64) -> ScaleSet<f64> {
        ScaleSet::natural(1.0 / 137.035_999, 1)
            .with_star_ratio(ratio)
            .unwrap()
            .with_eta0(eta0)
            .with_volume(volume)
    }

    #[test]
    fn uncoupled_continuum_is_ideal_gas() {
        let s = ScaleSet::natural(0.0f64, 1).with_eta0(1.3).with_volume(500.0);
        let (z, rep) = z_continuous(&s, &Tolerance::default()).unwrap();
        assert_eq!(z, ideal_gas_term(&s));
        assert_eq!(rep.terms_used, 0);
        assert_eq!(brace_factor(5, 0.0f64, 1.0), 0.0);
    }

    #[test]
    fn brace_factor_tends_to_asymptote() {
        let mut last = f64::INFINITY;
        for n in [1usize, 10, 100, 1000] {
            let dev = (brace_factor(n, 0.01f64, 1.0) / brace_asymptote(n, 0.01, 1.0) - 1.0).abs();
            assert!(dev < last);
            last = dev;
        }
        assert!(last < 1e-2);
    }

    fn brute_force_zc(s: &ScaleSet<f64>, terms: usize) -> f64 {
        let kappa = std::f64::consts::PI.powf(4.0 / 3.0) * s.damping() / 2.0;
        let eta0 = s.eta0();
        let mut sum = 0.0;
        for n in (1..=terms).rev() {
            let nf = n as f64;
            let a = s.star_ratio() * (eta0 / (2.0 * nf * nf)).sqrt();
            let brace = (a * a).exp() * statrs::function::erf::erfc(a) - 1.0;
            sum += nf * nf * (-kappa * nf * nf).exp() * brace;
        }
        ideal_gas_term(s) - (-eta0).exp() / 2.0 * sum
    }

    #[test]
    fn continuum_matches_brute_force() {
        // eta0 = 1 with V / Lambda^3 = 1e3 gives u c Lambda / V^{2/3} = 1e-2;
        // V / Lambda^3 = 1e6 gives 1e-4.
        for volume in [1e3, 1e6] {
            let s = scales(0.01, 1.0, volume);
            let tol = Tolerance::new(1e-13, 0.0, 100_000).unwrap();
            let (z, rep) = z_continuous(&s, &tol).unwrap();
            assert!(rep.converged);
            assert!(rep.tail_bound < 1e-12 * z.abs());
            let oracle = brute_force_zc(&s, 10_000);
            assert!((z - oracle).abs() < 1e-11 * oracle.abs(), "{z} {oracle}");
        }
    }

    #[test]
    fn cubic_tail_matches_direct_sum() {
        for n in [5usize, 20, 100] {
            let direct: f64 = (n + 1..2_000_000).rev().map(|k| (k as f64).powi(-3)).sum::<f64>()
                + 1.0 / (2.0 * 2e6f64 * 2e6);
            let (v, e) = cubic_tail::<f64>(n);
            assert!((v - direct).abs() <= e + 1e-15 * direct, "{n}");
        }
    }

    #[test]
    fn discrete_sum_converges_with_small_tail() {
        let s = scales(0.01, 1.0, 1e3).with_cavity_radius_half_rho(4.0).unwrap();
        let tol = Tolerance::new(1e-11, 0.0, 1_000_000).unwrap();
        let (z, rep, levels) = z_discrete(&s, NMaxPolicy::Converge, &tol).unwrap();
        assert!(rep.converged);
        assert!(rep.tail_bound < 1e-10 * z);
        assert!(levels.iter().all(|l| l.trapped >= 0.0 && l.trapped <= (l.n * l.n) as f64));
    }

    #[test]
    fn discrete_sum_grows_with_radius() {
        let tol = Tolerance::new(1e-9, 0.0, 1_000_000).unwrap();
        let mut last = 0.0;
        for radius in [0.5, 1.0, 2.0, 4.0] {
            let s = scales(0.01, 1.0, 1e3).with_cavity_radius_half_rho(radius).unwrap();
            let (z, _, _) = z_discrete(&s, NMaxPolicy::Converge, &tol).unwrap();
            assert!(z > last);
            last = z;
        }
    }

    #[test]
    fn fixed_policy_reports_bracket() {
        let s = scales(0.01, 1.0, 1e3).with_cavity_radius_half_rho(2.0).unwrap();
        let (_, rep, levels) = z_discrete(&s, NMaxPolicy::Fixed(40), &Tolerance::default()).unwrap();
        assert_eq!(levels.len(), 40);
        assert!(rep.tail_bound.is_finite());
    }
}
