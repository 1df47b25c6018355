use crate::geometry::eta;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Light-cone map `y^0 = x^5 - x^0`, `y^5 = (x^0 + x^5)/2`, spatial
/// coordinates unchanged. Arrays hold `(x^0, x^1, x^2, x^3, x^5)`.
pub fn lightcone_transform<T: Real>(x: &[T; 5], direction: Direction) -> [T; 5] {
    let half = T::lit(0.5);
    let mut y = *x;
    match direction {
        Direction::Forward => {
            y[0] = x[4] - x[0];
            y[4] = (x[0] + x[4]) * half;
        }
        Direction::Inverse => {
            y[0] = x[4] - x[0] * half;
            y[4] = x[4] + x[0] * half;
        }
    }
    y
}

/// Determinant of the forward map, from its `(x^0, x^5)` block
/// `[[-1, 1], [1/2, 1/2]]`.
pub fn lightcone_jacobian<T: Real>() -> T {
    let half = T::lit(0.5);
    -T::one() * half - T::one() * half
}

/// `eta^{AB} p_A p_B` with signature `(-, +, +, +, +)`.
pub fn null_dispersion<T: Real>(p: &[T; 5]) -> T {
    (0..4).map(|mu| eta::<T>(mu) * p[mu] * p[mu]).fold(T::zero(), |a, b| a + b) + p[4] * p[4]
}

/// 5D norms of the gradients of `y^0` and `y^5`; both vanish.
pub fn lightcone_gradient_norms<T: Real>() -> [T; 2] {
    let half = T::lit(0.5);
    let d_y0 = [-T::one(), T::zero(), T::zero(), T::zero(), T::one()];
    let d_y5 = [half, T::zero(), T::zero(), T::zero(), half];
    [null_dispersion(&d_y0), null_dispersion(&d_y5)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let x = [0.3f64, -1.2, 2.5, 0.7, -4.1];
        let y = lightcone_transform(&lightcone_transform(&x, Direction::Forward), Direction::Inverse);
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() < 1e-15);
        }
        let z = lightcone_transform(&lightcone_transform(&x, Direction::Inverse), Direction::Forward);
        for (a, b) in x.iter().zip(&z) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn jacobian_matches_differences() {
        assert_eq!(lightcone_jacobian::<f64>(), -1.0);
        let x = [0.1f64, 0.0, 0.0, 0.0, 0.2];
        let f = |v: [f64; 5]| lightcone_transform(&v, Direction::Forward);
        let (mut e0, mut e5) = (x, x);
        e0[0] += 1.0;
        e5[4] += 1.0;
        let (b, c0, c5) = (f(x), f(e0), f(e5));
        let det = (c0[0] - b[0]) * (c5[4] - b[4]) - (c5[0] - b[0]) * (c0[4] - b[4]);
        assert_eq!(det, -1.0);
    }

    #[test]
    fn null_momenta() {
        let e = 2.5f64;
        assert_eq!(null_dispersion(&[e, 0.0, 0.0, 0.0, e]), 0.0);
        let (k, mu) = (0.75f64, 1.0);
        assert_eq!(null_dispersion(&[(k * k + mu * mu).sqrt(), k, 0.0, 0.0, mu]), 0.0);
        assert_eq!(lightcone_gradient_norms::<f64>(), [0.0, 0.0]);
    }
}
