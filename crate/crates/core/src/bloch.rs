//! Real 4x4 matrices acting on `(1, r_x, r_y, r_z)` and their 3x3 blocks.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Plain real 4x4 matrix in the `{I, sigma_x, sigma_y, sigma_z}` basis.
///
/// Any Hermiticity-preserving qubit map (channel, difference of channels,
/// generator) has one. Trace-preserving maps are wrapped in
/// [`AffineQubitMap`](crate::channels::AffineQubitMap).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat4<T: Real>(pub [[T; 4]; 4]);

/// 3x3 real matrix; the Bloch block of a [`Mat4`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3<T: Real>(pub [[T; 3]; 3]);

impl<T: Real> Mat4<T> {
    pub fn zeros() -> Self {
        Self([[T::zero(); 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            m.0[i][i] = T::one();
        }
        m
    }

    pub fn diag(d: [T; 4]) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            m.0[i][i] = d[i];
        }
        m
    }

    /// Embeds a 3x3 block below a given first row `(r0, 0, 0, 0)`.
    pub fn from_block(corner: T, block: &Mat3<T>) -> Self {
        let mut m = Self::zeros();
        m.0[0][0] = corner;
        for i in 0..3 {
            for j in 0..3 {
                m.0[i + 1][j + 1] = block.0[i][j];
            }
        }
        m
    }

    pub fn block(&self) -> Mat3<T> {
        let mut b = [[T::zero(); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                b[i][j] = self.0[i + 1][j + 1];
            }
        }
        Mat3(b)
    }

    pub fn scale(&self, s: T) -> Self {
        Self(self.0.map(|row| row.map(|x| x * s)))
    }

    pub fn apply(&self, v: [T; 4]) -> [T; 4] {
        let mut out = [T::zero(); 4];
        for i in 0..4 {
            out[i] = (0..4).map(|j| self.0[i][j] * v[j]).sum();
        }
        out
    }

    /// Image of the Bloch vector `r` under the affine action.
    pub fn apply_bloch(&self, r: [T; 3]) -> [T; 3] {
        let v = self.apply([T::one(), r[0], r[1], r[2]]);
        [v[1], v[2], v[3]]
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut m = T::zero();
        for i in 0..4 {
            for j in 0..4 {
                m = m.max((self.0[i][j] - other.0[i][j]).abs());
            }
        }
        m
    }

    pub fn frobenius_norm(&self) -> T {
        self.0.iter().flatten().map(|x| *x * *x).sum::<T>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }

    /// Inverse by Gaussian elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let mut a = self.0;
        let mut inv = Self::identity().0;
        let scale = self.frobenius_norm().max(T::min_positive_value());
        for col in 0..4 {
            let pivot = (col..4)
                .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
                .unwrap();
            if a[pivot][col].abs() <= T::epsilon() * scale {
                return Err(Error::InvalidArgument("matrix is numerically singular".into()));
            }
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col];
            for j in 0..4 {
                a[col][j] /= p;
                inv[col][j] /= p;
            }
            for i in 0..4 {
                if i != col {
                    let f = a[i][col];
                    if f != T::zero() {
                        for j in 0..4 {
                            a[i][j] = a[i][j] - f * a[col][j];
                            inv[i][j] = inv[i][j] - f * inv[col][j];
                        }
                    }
                }
            }
        }
        Ok(Self(inv))
    }
}

impl<T: Real> Mat3<T> {
    pub fn zeros() -> Self {
        Self([[T::zero(); 3]; 3])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..3 {
            m.0[i][i] = T::one();
        }
        m
    }

    pub fn scale(&self, s: T) -> Self {
        Self(self.0.map(|row| row.map(|x| x * s)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] = self.0[j][i];
            }
        }
        t
    }

    pub fn trace(&self) -> T {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    /// Frobenius inner product `tr(self^T other)`.
    pub fn inner(&self, other: &Self) -> T {
        (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).map(|(i, j)| self.0[i][j] * other.0[i][j]).sum()
    }

    pub fn frobenius_norm(&self) -> T {
        self.inner(self).sqrt()
    }

    pub fn det(&self) -> T {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut m = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                m = m.max((self.0[i][j] - other.0[i][j]).abs());
            }
        }
        m
    }

    /// Singular values, descending. One-sided Jacobi keeps small singular
    /// values accurate to working precision relative to the largest.
    pub fn singular_values(&self) -> [T; 3] {
        let mut cols = [0, 1, 2].map(|j| [self.0[0][j], self.0[1][j], self.0[2][j]]);
        let dot = |a: &[T; 3], b: &[T; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        for _ in 0..60 {
            let mut rotated = false;
            for (p, q) in [(0, 1), (0, 2), (1, 2)] {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                if gamma.abs() <= T::epsilon() * (alpha * beta).sqrt() || gamma == T::zero() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::lit(2.0) * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                for i in 0..3 {
                    let (a, b) = (cols[p][i], cols[q][i]);
                    cols[p][i] = c * a - s * b;
                    cols[q][i] = s * a + c * b;
                }
            }
            if !rotated {
                break;
            }
        }
        let mut sv = cols.map(|c| dot(&c, &c).sqrt());
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        sv
    }
}

macro_rules! impl_elementwise {
    ($ty:ident, $n:literal) => {
        impl<T: Real> Add for $ty<T> {
            type Output = Self;
            fn add(self, rhs: Self) -> Self {
                let mut out = self;
                for i in 0..$n {
                    for j in 0..$n {
                        out.0[i][j] = self.0[i][j] + rhs.0[i][j];
                    }
                }
                out
            }
        }

        impl<T: Real> Sub for $ty<T> {
            type Output = Self;
            fn sub(self, rhs: Self) -> Self {
                let mut out = self;
                for i in 0..$n {
                    for j in 0..$n {
                        out.0[i][j] = self.0[i][j] - rhs.0[i][j];
                    }
                }
                out
            }
        }

        impl<T: Real> Mul for $ty<T> {
            type Output = Self;
            fn mul(self, rhs: Self) -> Self {
                let mut out = Self::zeros();
                for i in 0..$n {
                    for j in 0..$n {
                        out.0[i][j] = (0..$n).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
                    }
                }
                out
            }
        }

        impl<T: Real> Index<(usize, usize)> for $ty<T> {
            type Output = T;
            fn index(&self, (i, j): (usize, usize)) -> &T {
                &self.0[i][j]
            }
        }

        impl<T: Real> IndexMut<(usize, usize)> for $ty<T> {
            fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
                &mut self.0[i][j]
            }
        }
    };
}

impl_elementwise!(Mat4, 4);
impl_elementwise!(Mat3, 3);
