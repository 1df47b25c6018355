use serde::Serialize;

use super::metric::{christoffel_from_dh, metric_pair, n_covector, Gamma5, Mat5, FIFTH};
use super::potential::{eta, lorentz_divergence, Potential};
use crate::error::{Error, Result};
use crate::numerics::{Boundary, ConvergenceReport, GridField};
use crate::scalar::Real;

/// Outcome of [`covariant_laplacian_residual`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LaplacianReport<T> {
    /// `max |LHS - RHS|` over interior nodes.
    pub max_residual: T,
    /// `max |LHS|`, for scale.
    pub max_operator: T,
    pub interior_points: usize,
    /// Largest `|d_mu A^mu|` seen on the patch.
    pub max_divergence: T,
}

/// Operator values at one interior node of a five-dimensional grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorSample<T> {
    pub flat: usize,
    /// `h^{AB} d_A d_B f + h^{AB} Gamma^C_{AB} d_C f`, Christoffels from
    /// differences of the sampled metric.
    pub covariant: T,
    /// `(d^mu + N^mu d_5)(d_mu + N_mu d_5) f + d_5 d_5 f` expanded with the
    /// analytic `d_mu N^mu`.
    pub factored: T,
}

struct Node<T> {
    n_lower: [T; 4],
    h: Mat5<T>,
    h_inv: Mat5<T>,
    div_n: T,
}

fn check_grid<T: Real>(field: &GridField<T, T>) -> Result<()> {
    if field.ndim() != 5 {
        return Err(Error::Shape(format!("expected a 5D grid, got {} axes", field.ndim())));
    }
    for (axis, &points) in field.shape().iter().enumerate() {
        if points < 3 {
            return Err(Error::GridTooSmall { axis, points, required: 3 });
        }
    }
    Ok(())
}

/// Evaluates both sides of the covariant-Laplacian identity at every
/// interior node (margin 1). Both sides share the same field stencils.
///
/// Requires Lorentz gauge: with the `+Gamma` convention used on the
/// covariant side the two operators differ by `2 (d_mu N^mu) d_5`.
pub fn sample_operators<T, P>(field: &GridField<T, T>, potential: &P, coupling: T) -> Result<(Vec<OperatorSample<T>>, T)>
where
    T: Real,
    P: Potential<T> + ?Sized,
{
    check_grid(field)?;
    let shape = field.shape();
    let step = field.step();
    let origin = field.origin();
    let (n0, n1, n2, n3) = (shape[0], shape[1], shape[2], shape[3]);
    let idx4 = |i: [usize; 4]| ((i[0] * n1 + i[1]) * n2 + i[2]) * n3 + i[3];

    let mut nodes = Vec::with_capacity(n0 * n1 * n2 * n3);
    let mut max_div = T::zero();
    let mut grad_scale = T::one();
    for i0 in 0..n0 {
        for i1 in 0..n1 {
            for i2 in 0..n2 {
                for i3 in 0..n3 {
                    let ii = [i0, i1, i2, i3];
                    let x: [T; 4] = std::array::from_fn(|a| origin[a] + step[a] * T::from_count(ii[a]));
                    let n = n_covector(&potential.value(&x), coupling);
                    let grad = potential.gradient(&x);
                    let div_a = lorentz_divergence(&grad);
                    max_div = max_div.max(div_a.abs());
                    grad_scale = grad.iter().flatten().fold(grad_scale, |m, g| m.max(g.abs()));
                    let (h, h_inv) = metric_pair(&n);
                    nodes.push(Node { n_lower: n, h, h_inv, div_n: -coupling * div_a });
                }
            }
        }
    }
    let gauge_tol = T::lit(1e-10) * grad_scale;
    if max_div > gauge_tol {
        return Err(Error::Gauge { divergence: max_div.to_f64_lossy(), tolerance: gauge_tol.to_f64_lossy() });
    }

    // h^{AB} Gamma^C_{AB} at interior 4D nodes from differenced metric.
    let mut contraction = vec![[T::zero(); 5]; nodes.len()];
    let dims = [n0, n1, n2, n3];
    for i0 in 1..n0 - 1 {
        for i1 in 1..n1 - 1 {
            for i2 in 1..n2 - 1 {
                for i3 in 1..n3 - 1 {
                    let ii = [i0, i1, i2, i3];
                    let mut dh: Gamma5<T> = [[[T::zero(); 5]; 5]; 5];
                    for l in 0..4 {
                        debug_assert!(ii[l] + 1 < dims[l]);
                        let (mut ip, mut im) = (ii, ii);
                        ip[l] += 1;
                        im[l] -= 1;
                        let (hp, hm) = (&nodes[idx4(ip)].h, &nodes[idx4(im)].h);
                        let inv = (T::lit(2.0) * step[l]).recip();
                        for a in 0..5 {
                            for b in 0..5 {
                                dh[l][a][b] = (hp[a][b] - hm[a][b]) * inv;
                            }
                        }
                    }
                    let node = &nodes[idx4(ii)];
                    let gamma = christoffel_from_dh(&node.h_inv, &dh);
                    let v = &mut contraction[idx4(ii)];
                    for c in 0..5 {
                        let mut s = T::zero();
                        for a in 0..5 {
                            for b in 0..5 {
                                s += node.h_inv[a][b] * gamma[c][a][b];
                            }
                        }
                        v[c] = s;
                    }
                }
            }
        }
    }

    let values = field.values();
    let strides: [usize; 5] = std::array::from_fn(|a| field.stride(a));
    let n5 = shape[FIFTH];
    let two = T::lit(2.0);
    let mut samples = Vec::new();
    for flat in 0..values.len() {
        if !field.is_interior(flat, 1) {
            continue;
        }
        let node = &nodes[flat / n5];
        let f = |off: isize| values[(flat as isize + off) as usize];
        let s: [isize; 5] = std::array::from_fn(|a| strides[a] as isize);
        let f0 = values[flat];
        let d1: [T; 5] = std::array::from_fn(|a| (f(s[a]) - f(-s[a])) / (two * step[a]));
        let mut d2 = [[T::zero(); 5]; 5];
        for a in 0..5 {
            d2[a][a] = (f(s[a]) - two * f0 + f(-s[a])) / (step[a] * step[a]);
            for b in a + 1..5 {
                let v = (f(s[a] + s[b]) - f(s[a] - s[b]) - f(-s[a] + s[b]) + f(-s[a] - s[b]))
                    / (T::lit(4.0) * step[a] * step[b]);
                d2[a][b] = v;
                d2[b][a] = v;
            }
        }
        let v = &contraction[flat / n5];
        let mut covariant = T::zero();
        for a in 0..5 {
            for b in 0..5 {
                covariant += node.h_inv[a][b] * d2[a][b];
            }
            covariant += v[a] * d1[a];
        }
        let n_up: [T; 4] = std::array::from_fn(|mu| eta::<T>(mu) * node.n_lower[mu]);
        let n2 = (0..4).map(|mu| n_up[mu] * node.n_lower[mu]).fold(T::zero(), |a, b| a + b);
        let mut factored = (T::one() + n2) * d2[FIFTH][FIFTH] + node.div_n * d1[FIFTH];
        for mu in 0..4 {
            factored += eta::<T>(mu) * d2[mu][mu] + two * n_up[mu] * d2[mu][FIFTH];
        }
        samples.push(OperatorSample { flat, covariant, factored });
    }
    Ok((samples, max_div))
}

/// Max-norm gap between the covariant Laplacian (Christoffels from the
/// sampled metric) and the expanded factored operator on a 5D grid.
pub fn covariant_laplacian_residual<T, P>(field: &GridField<T, T>, potential: &P, coupling: T) -> Result<LaplacianReport<T>>
where
    T: Real,
    P: Potential<T> + ?Sized,
{
    let (samples, max_divergence) = sample_operators(field, potential, coupling)?;
    let mut report = LaplacianReport {
        max_residual: T::zero(),
        max_operator: T::zero(),
        interior_points: samples.len(),
        max_divergence,
    };
    for s in &samples {
        report.max_residual = report.max_residual.max((s.covariant - s.factored).abs());
        report.max_operator = report.max_operator.max(s.covariant.abs());
    }
    Ok(report)
}

/// Cubic 5D patch of `points` nodes per axis centred on `center`.
pub fn patch_grid<T, F>(center: &[T; 5], step: T, points: usize, f: F) -> Result<GridField<T, T>>
where
    T: Real,
    F: Fn(&[T]) -> T,
{
    let half = step * T::from_count(points.saturating_sub(1)) * T::lit(0.5);
    let origin: Vec<T> = center.iter().map(|&c| c - half).collect();
    GridField::from_fn(&[points; 5], &[step; 5], &origin, Boundary::Absorbing, f)
}

/// Residuals of [`covariant_laplacian_residual`] on patches with the same
/// node count and steps `base_step / 2^k`.
pub fn laplacian_convergence<T, P, F>(
    potential: &P,
    coupling: T,
    field: F,
    center: &[T; 5],
    base_step: T,
    points: usize,
    levels: usize,
) -> Result<ConvergenceReport<T>>
where
    T: Real,
    P: Potential<T> + ?Sized,
    F: Fn(&[T]) -> T,
{
    let mut steps = Vec::new();
    let mut residuals = Vec::new();
    let mut h = base_step;
    for _ in 0..levels {
        let grid = patch_grid(center, h, points, &field)?;
        residuals.push(covariant_laplacian_residual(&grid, potential, coupling)?.max_residual);
        steps.push(h);
        h = h * T::lit(0.5);
    }
    ConvergenceReport::new(steps, residuals)
}
