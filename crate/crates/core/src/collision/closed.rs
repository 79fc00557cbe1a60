use crate::channels::{pauli_map, PauliWeights};
use crate::error::{Error, Result};
use crate::matlin::{pauli, ComplexMatrix, DensityOperator};
use crate::scalar::Real;
use num_complex::Complex;

// cos^2 th m + sin^2 th sum_k q_k s_k m s_k + sin th cos th i sum_k q_k [s_k, m]
pub(crate) fn closed_map<T: Real>(q: &PauliWeights<T>, theta: T, m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let (s, c) = theta.sin_cos();
    let comm = pauli::all::<T>()
        .iter()
        .zip(q.as_array())
        .fold(ComplexMatrix::zeros(2, 2), |acc, (sg, w)| &acc + &sg.commutator(m).scale_real(w));
    let mut out = m.scale_real(c * c);
    out = &out + &pauli_map(q, m).scale_real(s * s);
    &out + &comm.scale(Complex::new(T::zero(), s * c))
}

/// Closed-form collision channel at accumulated angle `theta = j * eta`:
/// `sum_k q_k exp(i theta sigma_k) rho exp(-i theta sigma_k)`.
pub fn simulate_closed<T: Real>(rho: &DensityOperator<T>, q: &PauliWeights<T>, theta: T) -> Result<DensityOperator<T>> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch(format!("closed-form collision on a {}-dim state", rho.dim())));
    }
    DensityOperator::with_tolerances(closed_map(q, theta, rho.matrix()), T::equality_tol(), T::psd_tol())
}
