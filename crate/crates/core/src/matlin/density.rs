use std::ops::Deref;

use num_complex::Complex;

use super::{eigen, pauli, ComplexMatrix};
use crate::error::{Error, Result};
use crate::scalar::{cr, Real};

// Jacobi is used for the positivity check up to this dimension; larger
// operators go through the shifted Cholesky test.
const JACOBI_MAX_DIM: usize = 96;

/// Validated density operator: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator<T: Real> {
    matrix: ComplexMatrix<T>,
}

impl<T: Real> DensityOperator<T> {
    /// Validates with the scalar type's default tolerances.
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        Self::with_tolerances(matrix, T::validation_tol(), T::psd_tol())
    }

    pub fn with_tolerances(matrix: ComplexMatrix<T>, herm_tol: T, psd_tol: T) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "density operator must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let dev = matrix.hermiticity_deviation();
        if dev > herm_tol {
            return Err(Error::NotHermitian { deviation: dev.to_f64_lossy() });
        }
        let tr = matrix.trace();
        if (tr - Complex::new(T::one(), T::zero())).norm() > herm_tol {
            return Err(Error::NotUnitTrace { trace: tr.re.to_f64_lossy() });
        }
        let min = min_eigenvalue_bound(&matrix, psd_tol)?;
        if let Some(min) = min {
            return Err(Error::NotPositive { min_eigenvalue: min.to_f64_lossy() });
        }
        Ok(Self { matrix })
    }

    /// Maximally mixed state `I / dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(dim).scale_real(T::one() / T::from_usize(dim).unwrap()) }
    }

    /// Pure state `|psi><psi|`, normalizing `psi`.
    pub fn pure(psi: &[Complex<T>]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm <= T::zero() || !norm.is_finite() {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        let v: Vec<_> = psi.iter().map(|z| *z / cr(norm)).collect();
        Ok(Self { matrix: ComplexMatrix::outer(&v, &v) })
    }

    /// Qubit state `(I + r . sigma) / 2`; requires `|r| <= 1`.
    pub fn from_bloch(r: [T; 3]) -> Result<Self> {
        let len2 = r.iter().map(|x| *x * *x).sum::<T>();
        if len2 > T::one() + T::validation_tol() {
            return Err(Error::InvalidArgument(format!(
                "Bloch vector length {} exceeds 1",
                len2.sqrt()
            )));
        }
        Ok(Self { matrix: bloch_operator(r) })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    /// Bloch vector `r_k = tr(rho sigma_k)`; qubits only.
    pub fn bloch(&self) -> Result<[T; 3]> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch(format!("Bloch vector of a {}-dim state", self.dim())));
        }
        Ok(bloch_of(&self.matrix))
    }

    pub fn purity(&self) -> T {
        self.matrix.matmul(&self.matrix).trace().re
    }
}

impl<T: Real> Deref for DensityOperator<T> {
    type Target = ComplexMatrix<T>;
    fn deref(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }
}

/// `(I + r . sigma) / 2` without a length check (also used for probing maps).
pub fn bloch_operator<T: Real>(r: [T; 3]) -> ComplexMatrix<T> {
    let half = T::lit(0.5);
    let mut m = ComplexMatrix::identity(2).scale_real(half);
    for (k, s) in pauli::all::<T>().iter().enumerate() {
        m = &m + &s.scale_real(r[k] * half);
    }
    m
}

/// Real parts of `tr(m sigma_k)` for a 2x2 operator.
pub fn bloch_of<T: Real>(m: &ComplexMatrix<T>) -> [T; 3] {
    let ps = pauli::all::<T>();
    [0, 1, 2].map(|k| m.matmul(&ps[k]).trace().re)
}

// None when PSD within tolerance, otherwise a witness of the violation.
fn min_eigenvalue_bound<T: Real>(m: &ComplexMatrix<T>, tol: T) -> Result<Option<T>> {
    if m.is_diagonal(T::zero()) {
        let min = (0..m.rows()).map(|i| m[(i, i)].re).fold(T::infinity(), T::min);
        return Ok((min < -tol).then_some(min));
    }
    if m.rows() <= JACOBI_MAX_DIM {
        let min = eigen::eigvalsh(m)?[0];
        return Ok((min < -tol).then_some(min));
    }
    Ok(eigen::shifted_cholesky_check(m, tol).err())
}
