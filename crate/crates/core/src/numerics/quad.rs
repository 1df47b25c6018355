//! Globally adaptive Gauss-Kronrod (7/15) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::Tolerance;
use crate::error::{Error, Result};
use crate::scalar::{CompensatedSum, Real};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Integral estimate with its error bound and the number of intervals used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<T> {
    pub value: T,
    pub error: T,
    pub intervals: usize,
}

struct Segment<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

impl<T: Real> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T: Real> Eq for Segment<T> {}
impl<T: Real> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
    }
}

fn kronrod15<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> (T, T) {
    let half = T::lit(0.5);
    let center = half * (a + b);
    let radius = half * (b - a);
    let fc = f(center);
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = radius * T::lit(XGK[j]);
        let pair = f(center - dx) + f(center + dx);
        kronrod += T::lit(WGK[j]) * pair;
        if j % 2 == 1 {
            gauss += T::lit(WG[j / 2]) * pair;
        }
    }
    let value = kronrod * radius;
    let error = ((kronrod - gauss) * radius).abs();
    (value, error)
}

/// Integrates `f` over `[a, b]`, returning the estimate and its error bound.
///
/// Intervals are bisected in order of decreasing local error until the summed
/// error falls below `tol.threshold(value)`; `tol.max_iter` caps the number of
/// bisections.
pub fn integrate_with_error<T, F>(f: F, a: T, b: T, tol: &Tolerance<T>) -> Result<Quadrature<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    tol.validate()?;
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::InvalidInput(format!(
            "integration bounds must be finite with a <= b, got [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(Quadrature {
            value: T::zero(),
            error: T::zero(),
            intervals: 0,
        });
    }

    let (value, error) = kronrod15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });
    let mut total_value = value;
    let mut total_error = error;
    let mut bisections = 0;
    let floor = T::epsilon() * T::lit(50.0);

    loop {
        if !total_value.is_finite() {
            return Err(Error::InvalidInput(
                "integrand produced a non-finite value".into(),
            ));
        }
        if total_error <= tol.threshold(total_value) {
            break;
        }
        if bisections >= tol.max_iter {
            return Err(Error::QuadratureNonConvergence {
                estimate: total_value.to_f64_lossy(),
                error_bound: total_error.to_f64_lossy(),
            });
        }
        let worst = heap.pop().expect("heap never empty");
        let mid = T::lit(0.5) * (worst.a + worst.b);
        // Interval collapsed to rounding: accept its contribution as is.
        if (worst.b - worst.a) <= floor * (worst.a.abs() + worst.b.abs()) {
            let error = worst.error;
            heap.push(Segment { error: T::zero(), ..worst });
            total_error = total_error - error;
            continue;
        }
        let (lv, le) = kronrod15(&f, worst.a, mid);
        let (rv, re) = kronrod15(&f, mid, worst.b);
        total_value = total_value - worst.value + lv + rv;
        total_error = total_error - worst.error + le + re;
        heap.push(Segment { a: worst.a, b: mid, value: lv, error: le });
        heap.push(Segment { a: mid, b: worst.b, value: rv, error: re });
        bisections += 1;
    }

    // Re-sum in left-to-right order so the result does not depend on heap
    // bookkeeping drift.
    let mut segments = heap.into_vec();
    segments.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap_or(Ordering::Equal));
    let value: CompensatedSum<T> = segments.iter().map(|s| s.value).collect();
    let error: CompensatedSum<T> = segments.iter().map(|s| s.error).collect();
    Ok(Quadrature {
        value: value.value(),
        error: error.value(),
        intervals: segments.len(),
    })
}

/// Integrates `f` over `[a, b]` to the requested tolerance.
pub fn integrate<T, F>(f: F, a: T, b: T, tol: &Tolerance<T>) -> Result<T>
where
    T: Real,
    F: Fn(T) -> T,
{
    integrate_with_error(f, a, b, tol).map(|q| q.value)
}
