use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex column vector.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector {
    data: Vec<Complex64>,
}

impl ComplexVector {
    pub fn zeros(n: usize) -> Self {
        Self { data: vec![Complex64::new(0.0, 0.0); n] }
    }

    /// Standard basis vector `e_i` of length `n`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v[i] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex64> {
        self.data.iter()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &ComplexVector) -> Complex64 {
        assert_eq!(self.len(), other.len(), "inner: dimension mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { data: self.data.iter().map(|&z| z * s).collect() }
    }

    /// `self + s·other`.
    pub fn axpy(&self, s: Complex64, other: &ComplexVector) -> Self {
        Self { data: self.data.iter().zip(&other.data).map(|(&a, &b)| a + s * b).collect() }
    }

    pub fn sub(&self, other: &ComplexVector) -> Self {
        self.axpy(Complex64::new(-1.0, 0.0), other)
    }

    /// Unit vector in the direction of `self`; fails on (numerically) zero input.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n < 1e-300 {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(self.scale(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    pub fn max_abs_diff(&self, other: &ComplexVector) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

impl From<Vec<Complex64>> for ComplexVector {
    fn from(data: Vec<Complex64>) -> Self {
        Self { data }
    }
}

impl FromIterator<Complex64> for ComplexVector {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        Self { data: iter.into_iter().collect() }
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.data[i]
    }
}

impl IndexMut<usize> for ComplexVector {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.data[i]
    }
}
