use serde::Serialize;

use super::potential::{eta, Potential};
use crate::error::{Error, Result};
use crate::numerics::ConvergenceReport;
use crate::scalar::Real;

/// Index of the fifth coordinate in five-component arrays.
pub const FIFTH: usize = 4;

pub type Mat5<T> = [[T; 5]; 5];
pub type Gamma5<T> = [[[T; 5]; 5]; 5];

/// How the Christoffel symbols of a patch are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ChristoffelMethod<T> {
    /// From the potential's analytic derivative table.
    Analytic,
    /// Central differences of the metric with the given step.
    FiniteDifference { step: T },
}

/// Foliated metric, its inverse and Christoffel symbols at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricPatch<T> {
    /// `(x^0, x^1, x^2, x^3, x^5)`.
    pub point: [T; 5],
    pub h: Mat5<T>,
    pub h_inv: Mat5<T>,
    /// `gamma[c][a][b] = Gamma^c_{ab}`.
    pub gamma: Gamma5<T>,
    /// `N_mu = -(q/c^2) A_mu`.
    pub n_lower: [T; 4],
}

/// `N_mu = -(q/c^2) A_mu`.
pub fn n_covector<T: Real>(a: &[T; 4], coupling: T) -> [T; 4] {
    std::array::from_fn(|mu| -coupling * a[mu])
}

/// Closed-form pair
/// `h_{mu nu} = eta + N_mu N_nu`, `h_{mu 5} = -N_mu`, `h_55 = 1` and
/// `h^{mu nu} = eta`, `h^{mu 5} = N^mu`, `h^55 = 1 + N.N`.
pub fn metric_pair<T: Real>(n: &[T; 4]) -> (Mat5<T>, Mat5<T>) {
    let mut h = [[T::zero(); 5]; 5];
    let mut hi = [[T::zero(); 5]; 5];
    let n_up: [T; 4] = std::array::from_fn(|mu| eta::<T>(mu) * n[mu]);
    let mut n2 = T::zero();
    for mu in 0..4 {
        n2 += n_up[mu] * n[mu];
        for nu in 0..4 {
            h[mu][nu] = n[mu] * n[nu];
        }
        h[mu][mu] += eta::<T>(mu);
        hi[mu][mu] = eta::<T>(mu);
        h[mu][FIFTH] = -n[mu];
        h[FIFTH][mu] = -n[mu];
        hi[mu][FIFTH] = n_up[mu];
        hi[FIFTH][mu] = n_up[mu];
    }
    h[FIFTH][FIFTH] = T::one();
    hi[FIFTH][FIFTH] = T::one() + n2;
    (h, hi)
}

/// `Gamma^c_{ab} = h^{cd} (d_a h_{db} + d_b h_{da} - d_d h_{ab}) / 2`, with
/// `dh[d][a][b] = d_d h_{ab}`.
pub fn christoffel_from_dh<T: Real>(h_inv: &Mat5<T>, dh: &Gamma5<T>) -> Gamma5<T> {
    let half = T::lit(0.5);
    let mut g = [[[T::zero(); 5]; 5]; 5];
    for a in 0..5 {
        for b in a..5 {
            let lower: [T; 5] = std::array::from_fn(|d| dh[a][d][b] + dh[b][d][a] - dh[d][a][b]);
            for c in 0..5 {
                let v = (0..5).map(|d| h_inv[c][d] * lower[d]).fold(T::zero(), |s, x| s + x) * half;
                g[c][a][b] = v;
                g[c][b][a] = v;
            }
        }
    }
    g
}

/// Metric derivatives from the analytic potential gradient. The metric
/// does not depend on `x^5`.
fn analytic_dh<T: Real>(n: &[T; 4], dn: &[[T; 4]; 4]) -> Gamma5<T> {
    let mut dh = [[[T::zero(); 5]; 5]; 5];
    for l in 0..4 {
        for mu in 0..4 {
            for nu in 0..4 {
                dh[l][mu][nu] = dn[l][mu] * n[nu] + n[mu] * dn[l][nu];
            }
            dh[l][mu][FIFTH] = -dn[l][mu];
            dh[l][FIFTH][mu] = -dn[l][mu];
        }
    }
    dh
}

/// Central differences of `h` along `x^0..x^3` with step `step`.
pub fn fd_dh<T: Real, P: Potential<T> + ?Sized>(potential: &P, coupling: T, x: &[T; 4], step: T) -> Gamma5<T> {
    let mut dh = [[[T::zero(); 5]; 5]; 5];
    let inv = (T::lit(2.0) * step).recip();
    for l in 0..4 {
        let (mut xp, mut xm) = (*x, *x);
        xp[l] += step;
        xm[l] -= step;
        let (hp, _) = metric_pair(&n_covector(&potential.value(&xp), coupling));
        let (hm, _) = metric_pair(&n_covector(&potential.value(&xm), coupling));
        for a in 0..5 {
            for b in 0..5 {
                dh[l][a][b] = (hp[a][b] - hm[a][b]) * inv;
            }
        }
    }
    dh
}

pub fn build_metric<T: Real, P: Potential<T> + ?Sized>(
    potential: &P,
    coupling: T,
    point: [T; 5],
    method: ChristoffelMethod<T>,
) -> Result<MetricPatch<T>> {
    let x = [point[0], point[1], point[2], point[3]];
    let n = n_covector(&potential.value(&x), coupling);
    if n.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(format!("potential not finite at {x:?}")));
    }
    let (h, h_inv) = metric_pair(&n);
    let dh = match method {
        ChristoffelMethod::Analytic => {
            let g = potential.gradient(&x);
            let dn: [[T; 4]; 4] = std::array::from_fn(|l| n_covector(&g[l], coupling));
            analytic_dh(&n, &dn)
        }
        ChristoffelMethod::FiniteDifference { step } => {
            if !(step > T::zero()) {
                return Err(Error::InvalidInput("finite-difference step must be positive".into()));
            }
            fd_dh(potential, coupling, &x, step)
        }
    };
    Ok(MetricPatch { point, h, h_inv, gamma: christoffel_from_dh(&h_inv, &dh), n_lower: n })
}

impl<T: Real> MetricPatch<T> {
    /// `max |h h^{-1} - 1|`.
    pub fn inverse_defect(&self) -> T {
        let mut worst = T::zero();
        for a in 0..5 {
            for b in 0..5 {
                let s = (0..5).map(|c| self.h[a][c] * self.h_inv[c][b]).fold(T::zero(), |x, y| x + y);
                let target = if a == b { T::one() } else { T::zero() };
                worst = worst.max((s - target).abs());
            }
        }
        worst
    }

    /// `det h`; equal to `det eta = -1` for any `N`.
    pub fn determinant(&self) -> T {
        det5(&self.h)
    }

    pub fn n_upper(&self) -> [T; 4] {
        std::array::from_fn(|mu| eta::<T>(mu) * self.n_lower[mu])
    }
}

fn det5<T: Real>(m: &Mat5<T>) -> T {
    let mut a = *m;
    let mut det = T::one();
    for col in 0..5 {
        let pivot = (col..5).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap()).unwrap();
        if a[pivot][col] == T::zero() {
            return T::zero();
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..5 {
            let f = a[r][col] / a[col][col];
            for c in col..5 {
                let v = a[col][c];
                a[r][c] -= f * v;
            }
        }
    }
    det
}

/// The four contractions entering `h^{AB} Gamma^C_{AB} d_C`, each stored as
/// coefficients of `(d_0, d_1, d_2, d_3, d_5)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Contractions<T> {
    /// `eta^{mu nu} Gamma^rho_{mu nu} d_rho`.
    pub eta_gamma_rho: [T; 5],
    /// `eta^{mu nu} Gamma^5_{mu nu} d_5`.
    pub eta_gamma_5: [T; 5],
    /// `2 N^mu Gamma^rho_{mu 5} d_rho`.
    pub n_gamma_rho: [T; 5],
    /// `2 N^mu Gamma^5_{mu 5} d_5`.
    pub n_gamma_5: [T; 5],
}

impl<T: Real> Contractions<T> {
    pub fn as_array(&self) -> [[T; 5]; 4] {
        [self.eta_gamma_rho, self.eta_gamma_5, self.n_gamma_rho, self.n_gamma_5]
    }

    /// Their sum, `h^{AB} Gamma^C_{AB}`.
    pub fn total(&self) -> [T; 5] {
        let a = self.as_array();
        std::array::from_fn(|c| a[0][c] + a[1][c] + a[2][c] + a[3][c])
    }

    /// Largest component difference per contraction.
    pub fn max_diff(&self, other: &Self) -> [T; 4] {
        let (a, b) = (self.as_array(), other.as_array());
        std::array::from_fn(|i| (0..5).map(|c| (a[i][c] - b[i][c]).abs()).fold(T::zero(), T::max))
    }
}

pub fn christoffel_contractions<T: Real>(patch: &MetricPatch<T>) -> Contractions<T> {
    let g = &patch.gamma;
    let n_up = patch.n_upper();
    let two = T::lit(2.0);
    let mut out = Contractions {
        eta_gamma_rho: [T::zero(); 5],
        eta_gamma_5: [T::zero(); 5],
        n_gamma_rho: [T::zero(); 5],
        n_gamma_5: [T::zero(); 5],
    };
    for rho in 0..4 {
        out.eta_gamma_rho[rho] = (0..4).map(|mu| eta::<T>(mu) * g[rho][mu][mu]).fold(T::zero(), |a, b| a + b);
        out.n_gamma_rho[rho] = two * (0..4).map(|mu| n_up[mu] * g[rho][mu][FIFTH]).fold(T::zero(), |a, b| a + b);
    }
    out.eta_gamma_5[FIFTH] = (0..4).map(|mu| eta::<T>(mu) * g[FIFTH][mu][mu]).fold(T::zero(), |a, b| a + b);
    out.n_gamma_5[FIFTH] = two * (0..4).map(|mu| n_up[mu] * g[FIFTH][mu][FIFTH]).fold(T::zero(), |a, b| a + b);
    out
}

/// Closed forms of the contractions in terms of `N`:
/// `N^mu (d_mu N^rho - d^rho N_mu)`, `-d_mu N^mu`, minus the first, and 0.
pub fn expected_contractions<T: Real, P: Potential<T> + ?Sized>(potential: &P, coupling: T, x: &[T; 4]) -> Contractions<T> {
    let n = n_covector(&potential.value(x), coupling);
    let g = potential.gradient(x);
    // dn[l][mu] = d_l N_mu
    let dn: [[T; 4]; 4] = std::array::from_fn(|l| n_covector(&g[l], coupling));
    let n_up: [T; 4] = std::array::from_fn(|mu| eta::<T>(mu) * n[mu]);
    let mut first = [T::zero(); 5];
    for rho in 0..4 {
        // d_mu N^rho = eta^{rho rho} d_mu N_rho ; d^rho N_mu = eta^{rho rho} d_rho N_mu
        first[rho] = (0..4)
            .map(|mu| n_up[mu] * eta::<T>(rho) * (dn[mu][rho] - dn[rho][mu]))
            .fold(T::zero(), |a, b| a + b);
    }
    let div = (0..4).map(|mu| eta::<T>(mu) * dn[mu][mu]).fold(T::zero(), |a, b| a + b);
    let mut second = [T::zero(); 5];
    second[FIFTH] = -div;
    Contractions {
        eta_gamma_rho: first,
        eta_gamma_5: second,
        n_gamma_rho: std::array::from_fn(|c| -first[c]),
        n_gamma_5: [T::zero(); 5],
    }
}

/// Gap between finite-difference and closed-form contractions, one report
/// per contraction, over the given steps.
pub fn contraction_convergence<T: Real, P: Potential<T> + ?Sized>(
    potential: &P,
    coupling: T,
    point: [T; 5],
    steps: &[T],
) -> Result<[ConvergenceReport<T>; 4]> {
    let x = [point[0], point[1], point[2], point[3]];
    let expected = expected_contractions(potential, coupling, &x);
    let mut residuals: [Vec<T>; 4] = Default::default();
    for &step in steps {
        let patch = build_metric(potential, coupling, point, ChristoffelMethod::FiniteDifference { step })?;
        let diff = christoffel_contractions(&patch).max_diff(&expected);
        for (r, d) in residuals.iter_mut().zip(diff) {
            r.push(d);
        }
    }
    let [a, b, c, d] = residuals;
    Ok([
        ConvergenceReport::new(steps.to_vec(), a)?,
        ConvergenceReport::new(steps.to_vec(), b)?,
        ConvergenceReport::new(steps.to_vec(), c)?,
        ConvergenceReport::new(steps.to_vec(), d)?,
    ])
}
