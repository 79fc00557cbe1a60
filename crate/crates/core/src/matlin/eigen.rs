//! Hermitian eigendecomposition (cyclic complex Jacobi) and a shifted
//! Cholesky positivity test for large operators.

use num_complex::Complex;
use num_traits::Zero;

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{cr, Real};

const MAX_SWEEPS: usize = 100;

/// Eigenpairs of a Hermitian matrix. Eigenvalues ascend; column `k` of
/// `vectors` is the eigenvector for `values[k]`.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T: Real> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn vector(&self, k: usize) -> Vec<Complex<T>> {
        (0..self.vectors.rows()).map(|i| self.vectors[(i, k)]).collect()
    }

    /// Rebuilds `sum_k f(lambda_k) |v_k><v_k|`.
    pub fn map_spectrum(&self, f: impl Fn(T) -> Complex<T>) -> ComplexMatrix<T> {
        let n = self.values.len();
        let v = &self.vectors;
        let weights: Vec<_> = self.values.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |(i, j)| {
            (0..n).fold(Complex::zero(), |acc, k| acc + v[(i, k)] * weights[k] * v[(j, k)].conj())
        })
    }
}

/// Diagonalizes a Hermitian matrix. The input is symmetrized first, so a
/// matrix that is Hermitian only up to roundoff is accepted.
pub fn eigh<T: Real>(m: &ComplexMatrix<T>) -> Result<HermitianEigen<T>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("eigh on {}x{}", m.rows(), m.cols())));
    }
    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::<T>::identity(n);

    let scale = a.frobenius_norm().max(T::min_positive_value());
    let eps = T::epsilon();

    for _ in 0..MAX_SWEEPS {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<T>()
            .sqrt();
        if off <= eps * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q, eps * scale);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |(r, c)| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn eigvalsh<T: Real>(m: &ComplexMatrix<T>) -> Result<Vec<T>> {
    Ok(eigh(m)?.values)
}

// One Jacobi rotation zeroing a[p][q]: a <- G^dagger a G with
// G = diag(1, e^{-i phi}) followed by a real Givens rotation.
fn rotate<T: Real>(a: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize, floor: T) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag <= floor * T::epsilon() {
        return;
    }
    let phase = apq / cr(mag);
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (T::lit(2.0) * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
    let cs = T::one() / (t * t + T::one()).sqrt();
    let sn = t * cs;
    let (c, s) = (cr(cs), cr(sn));
    let e_minus = phase.conj();
    let n = a.rows();

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = c * akp - s * e_minus * akq;
        a[(k, q)] = s * akp + c * e_minus * akq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = c * apk - s * phase * aqk;
        a[(q, k)] = s * apk + c * phase * aqk;
    }
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    a[(p, p)] = cr(a[(p, p)].re);
    a[(q, q)] = cr(a[(q, q)].re);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * e_minus * vkq;
        v[(k, q)] = s * vkp + c * e_minus * vkq;
    }
}

/// Returns `Ok(())` when `m + shift * I` admits a Cholesky factorization,
/// otherwise the first non-positive pivot (minus the shift). For Hermitian
/// `m` this decides `lambda_min(m) > -shift` in O(n^3 / 6).
pub fn shifted_cholesky_check<T: Real>(m: &ComplexMatrix<T>, shift: T) -> std::result::Result<(), T> {
    let n = m.rows();
    let mut l = ComplexMatrix::<T>::zeros(n, n);
    for j in 0..n {
        let mut d = m[(j, j)].re + shift;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if d.is_nan() || d <= T::zero() {
            return Err(d - shift);
        }
        let djj = d.sqrt();
        l[(j, j)] = cr(djj);
        for i in (j + 1)..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / cr(djj);
        }
    }
    Ok(())
}
