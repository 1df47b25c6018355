//! Fields sampled on uniform rectangular grids.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Periodic,
    Absorbing,
}

/// Sample type stored in a [`GridField`]: a real scalar or a complex number
/// over it.
pub trait FieldValue<T: Real>:
    Copy
    + Send
    + Sync
    + Zero
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<T, Output = Self>
    + std::fmt::Debug
{
    fn modulus_sqr(&self) -> T;
    fn is_finite_value(&self) -> bool;
}

impl<T: Real> FieldValue<T> for T {
    fn modulus_sqr(&self) -> T {
        *self * *self
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl<T: Real> FieldValue<T> for Complex<T> {
    fn modulus_sqr(&self) -> T {
        self.norm_sqr()
    }
    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Samples on a uniform grid, stored row-major (last axis fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct GridField<S, T> {
    values: Vec<S>,
    shape: Vec<usize>,
    step: Vec<T>,
    origin: Vec<T>,
    boundary: Boundary,
}

impl<T: Real, S: FieldValue<T>> GridField<S, T> {
    pub fn zeros(shape: &[usize], step: &[T], origin: &[T], boundary: Boundary) -> Result<Self> {
        Self::check_geometry(shape, step, origin)?;
        let len = shape.iter().product();
        Ok(Self {
            values: vec![S::zero(); len],
            shape: shape.to_vec(),
            step: step.to_vec(),
            origin: origin.to_vec(),
            boundary,
        })
    }

    /// Samples `f` at every grid node; `f` receives the node coordinates.
    pub fn from_fn<F>(
        shape: &[usize],
        step: &[T],
        origin: &[T],
        boundary: Boundary,
        f: F,
    ) -> Result<Self>
    where
        F: Fn(&[T]) -> S,
    {
        let mut field = Self::zeros(shape, step, origin, boundary)?;
        let mut coords = vec![T::zero(); shape.len()];
        for flat in 0..field.values.len() {
            field.coords_into(flat, &mut coords);
            field.values[flat] = f(&coords);
        }
        field.check_finite()?;
        Ok(field)
    }

    pub fn from_values(
        values: Vec<S>,
        shape: &[usize],
        step: &[T],
        origin: &[T],
        boundary: Boundary,
    ) -> Result<Self> {
        Self::check_geometry(shape, step, origin)?;
        if values.len() != shape.iter().product::<usize>() {
            return Err(Error::Shape(format!(
                "{} values for shape {:?}",
                values.len(),
                shape
            )));
        }
        let field = Self {
            values,
            shape: shape.to_vec(),
            step: step.to_vec(),
            origin: origin.to_vec(),
            boundary,
        };
        field.check_finite()?;
        Ok(field)
    }

    fn check_geometry(shape: &[usize], step: &[T], origin: &[T]) -> Result<()> {
        if shape.is_empty() || shape.len() != step.len() || shape.len() != origin.len() {
            return Err(Error::Shape(format!(
                "shape {:?}, {} steps, {} origin coordinates",
                shape,
                step.len(),
                origin.len()
            )));
        }
        if shape.contains(&0) {
            return Err(Error::Shape(format!("empty axis in shape {shape:?}")));
        }
        if step.iter().any(|h| !(h.is_finite() && *h > T::zero())) {
            return Err(Error::InvalidInput("grid steps must be positive".into()));
        }
        Ok(())
    }

    fn check_finite(&self) -> Result<()> {
        if self.values.iter().all(|v| v.is_finite_value()) {
            Ok(())
        } else {
            Err(Error::InvalidInput("grid field holds non-finite samples".into()))
        }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }
    pub fn step(&self) -> &[T] {
        &self.step
    }
    pub fn origin(&self) -> &[T] {
        &self.origin
    }
    pub fn boundary(&self) -> Boundary {
        self.boundary
    }
    pub fn ndim(&self) -> usize {
        self.shape.len()
    }
    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
    pub fn values(&self) -> &[S] {
        &self.values
    }
    pub fn values_mut(&mut self) -> &mut [S] {
        &mut self.values
    }
    pub fn into_values(self) -> Vec<S> {
        self.values
    }

    /// Stride of `axis` in the flat layout.
    pub fn stride(&self, axis: usize) -> usize {
        self.shape[axis + 1..].iter().product()
    }

    pub fn flat_index(&self, index: &[usize]) -> usize {
        index
            .iter()
            .zip(&self.shape)
            .fold(0, |acc, (&i, &n)| acc * n + i)
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut index = vec![0; self.shape.len()];
        for axis in (0..self.shape.len()).rev() {
            index[axis] = flat % self.shape[axis];
            flat /= self.shape[axis];
        }
        index
    }

    fn coords_into(&self, mut flat: usize, out: &mut [T]) {
        for axis in (0..self.shape.len()).rev() {
            let i = flat % self.shape[axis];
            flat /= self.shape[axis];
            out[axis] = self.origin[axis] + self.step[axis] * T::from_count(i);
        }
    }

    pub fn coords(&self, flat: usize) -> Vec<T> {
        let mut out = vec![T::zero(); self.shape.len()];
        self.coords_into(flat, &mut out);
        out
    }

    pub fn get(&self, index: &[usize]) -> S {
        self.values[self.flat_index(index)]
    }

    /// Whether the node lies at least `margin` nodes away from every face.
    pub fn is_interior(&self, flat: usize, margin: usize) -> bool {
        self.multi_index(flat)
            .iter()
            .zip(&self.shape)
            .all(|(&i, &n)| i >= margin && i + margin < n)
    }

    /// Same geometry, new samples.
    pub fn with_values<R: FieldValue<T>>(&self, values: Vec<R>) -> Result<GridField<R, T>> {
        GridField::from_values(values, &self.shape, &self.step, &self.origin, self.boundary)
    }

    pub fn map<R: FieldValue<T>, F: Fn(S) -> R>(&self, f: F) -> GridField<R, T> {
        GridField {
            values: self.values.iter().map(|&v| f(v)).collect(),
            shape: self.shape.clone(),
            step: self.step.clone(),
            origin: self.origin.clone(),
            boundary: self.boundary,
        }
    }

    /// Volume element `prod(step)`.
    pub fn cell_volume(&self) -> T {
        self.step.iter().fold(T::one(), |acc, &h| acc * h)
    }

    /// Discrete L2 norm `sqrt(sum |v|^2 * cell_volume)`.
    pub fn l2_norm(&self) -> T {
        let sum: T = self.values.iter().map(|v| v.modulus_sqr()).sum();
        (sum * self.cell_volume()).sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.values
            .iter()
            .map(|v| v.modulus_sqr().sqrt())
            .fold(T::zero(), T::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_and_multi_index_agree() {
        let g = GridField::<f64, f64>::zeros(&[3, 4, 5], &[1.0; 3], &[0.0; 3], Boundary::Periodic)
            .unwrap();
        for flat in 0..g.len() {
            assert_eq!(g.flat_index(&g.multi_index(flat)), flat);
        }
        assert_eq!(g.stride(0), 20);
        assert_eq!(g.stride(2), 1);
    }

    #[test]
    fn from_fn_places_samples_at_node_coordinates() {
        let g = GridField::<f64, f64>::from_fn(
            &[4, 3],
            &[0.5, 2.0],
            &[-1.0, 10.0],
            Boundary::Absorbing,
            |x| x[0] + 100.0 * x[1],
        )
        .unwrap();
        assert_eq!(g.get(&[2, 1]), 0.0 + 100.0 * 12.0);
    }

    #[test]
    fn rejects_bad_geometry() {
        assert!(GridField::<f64, f64>::zeros(&[3], &[0.0], &[0.0], Boundary::Periodic).is_err());
        assert!(GridField::<f64, f64>::zeros(&[3, 2], &[1.0], &[0.0], Boundary::Periodic).is_err());
        assert!(GridField::<f64, f64>::from_values(vec![1.0; 5], &[3], &[1.0], &[0.0], Boundary::Periodic).is_err());
    }

    #[test]
    fn complex_norm() {
        let g = GridField::from_values(
            vec![Complex::new(3.0, 4.0); 4],
            &[4],
            &[0.25],
            &[0.0],
            Boundary::Periodic,
        )
        .unwrap();
        assert!((g.l2_norm() - 5.0f64).abs() < 1e-14);
    }
}
