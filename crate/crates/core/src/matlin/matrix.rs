use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use ndarray::Array2;
use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{cr, Real};

/// Dense complex matrix with row-major logical layout.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<T: Real> {
    data: Array2<Complex<T>>,
}

impl<T: Real> fmt::Debug for ComplexMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows(), self.cols())?;
        for row in self.data.rows() {
            write!(f, "  ")?;
            for z in row {
                write!(f, "({:+.6}{:+.6}i) ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { data: Array2::from_elem((rows, cols), Complex::zero()) }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.data[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_array(data: Array2<Complex<T>>) -> Self {
        Self { data }
    }

    /// Builds a matrix from row vectors; all rows must share a length.
    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::DimensionMismatch("empty matrix".into()));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let flat: Vec<_> = rows.into_iter().flatten().collect();
        Ok(Self { data: Array2::from_shape_vec((r, c), flat).expect("shape checked") })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut((usize, usize)) -> Complex<T>) -> Self {
        Self { data: Array2::from_shape_fn((rows, cols), f) }
    }

    pub fn diag(entries: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, z) in entries.iter().enumerate() {
            m.data[(i, i)] = *z;
        }
        m
    }

    pub fn diag_real(entries: &[T]) -> Self {
        let e: Vec<_> = entries.iter().map(|x| cr(*x)).collect();
        Self::diag(&e)
    }

    /// Outer product |u><v|.
    pub fn outer(u: &[Complex<T>], v: &[Complex<T>]) -> Self {
        Self::from_fn(u.len(), v.len(), |(i, j)| u[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn as_array(&self) -> &Array2<Complex<T>> {
        &self.data
    }

    pub fn as_array_mut(&mut self) -> &mut Array2<Complex<T>> {
        &mut self.data
    }

    pub fn into_array(self) -> Array2<Complex<T>> {
        self.data
    }

    pub fn adjoint(&self) -> Self {
        Self { data: self.data.t().mapv(|z| z.conj()) }
    }

    pub fn transpose(&self) -> Self {
        Self { data: self.data.t().to_owned() }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self { data: self.data.mapv(|z| z * s) }
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(cr(s))
    }

    pub fn trace(&self) -> Complex<T> {
        self.data.diag().iter().fold(Complex::zero(), |acc, z| acc + *z)
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols(), rhs.rows(), "matmul shape mismatch");
        Self { data: self.data.dot(&rhs.data) }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(self.cols(), v.len());
        self.data
            .rows()
            .into_iter()
            .map(|row| row.iter().zip(v).fold(Complex::zero(), |acc, (a, b)| acc + *a * *b))
            .collect()
    }

    pub fn powi(&self, k: usize) -> Self {
        assert!(self.is_square());
        let mut out = Self::identity(self.rows());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = out.matmul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.matmul(&base);
            }
        }
        out
    }

    /// Commutator `self * rhs - rhs * self`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        &self.matmul(rhs) - &rhs.matmul(self)
    }

    /// Conjugation `self * rho * self^dagger`.
    pub fn conjugate(&self, rho: &Self) -> Self {
        self.matmul(rho).matmul(&self.adjoint())
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.data.dim(), other.data.dim(), "shape mismatch");
        self.data
            .iter()
            .zip(other.data.iter())
            .fold(T::zero(), |m, (a, b)| m.max((*a - *b).norm()))
    }

    /// Element-wise equality within `tol`; shapes must match.
    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.data.dim() == other.data.dim() && self.max_abs_diff(other) <= tol
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn hermiticity_deviation(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_deviation() <= tol
    }

    pub fn unitarity_deviation(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        self.adjoint().matmul(self).max_abs_diff(&Self::identity(self.rows()))
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.unitarity_deviation() <= tol
    }

    /// Hermitian part `(M + M^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale_real(T::lit(0.5))
    }

    pub fn is_diagonal(&self, tol: T) -> bool {
        self.data
            .indexed_iter()
            .all(|((i, j), z)| i == j || z.norm() <= tol)
    }
}

impl<T: Real> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;
    fn index(&self, idx: (usize, usize)) -> &Complex<T> {
        &self.data[idx]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut Complex<T> {
        &mut self.data[idx]
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        ComplexMatrix { data: &self.data + &rhs.data }
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        ComplexMatrix { data: &self.data - &rhs.data }
    }
}

impl<T: Real> Neg for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn neg(self) -> ComplexMatrix<T> {
        ComplexMatrix { data: self.data.mapv(|z| -z) }
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        self.matmul(rhs)
    }
}
