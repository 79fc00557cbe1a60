//! Qubit channel representations: Pauli channels, Kraus sets, affine Bloch
//! matrices and Choi matrices, plus complete-positivity checks.

use num_complex::Complex;
use num_traits::Zero;

use crate::bloch::Mat4;
use crate::error::{Error, Result};
use crate::matlin::{bloch_of, bloch_operator, eigvalsh, kron, partial_trace_sys, pauli, ComplexMatrix, DensityOperator};
use crate::scalar::{cr, Real};

/// Cutoff below which a Pauli weight counts as zero for family membership.
pub const STRICT_POSITIVITY_CUTOFF: f64 = 1e-12;

/// Tolerance on the first affine row when extracting a trace-preserving map
/// in double precision; single precision falls back to its equality tolerance.
pub const TP_EXTRACTION_TOL: f64 = 1e-8;

/// Probabilities `(q_x, q_y, q_z)` of the Pauli channel
/// `rho -> sum_k q_k sigma_k rho sigma_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliWeights<T: Real> {
    q: [T; 3],
}

impl<T: Real> PauliWeights<T> {
    pub fn new(qx: T, qy: T, qz: T) -> Result<Self> {
        let q = [qx, qy, qz];
        if q.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidWeights("non-finite weight".into()));
        }
        if q.iter().any(|x| *x < T::zero()) {
            return Err(Error::InvalidWeights(format!("negative weight in ({qx}, {qy}, {qz})")));
        }
        let sum = qx + qy + qz;
        if (sum - T::one()).abs() > T::validation_tol() {
            return Err(Error::InvalidWeights(format!("weights sum to {sum}, expected 1")));
        }
        Ok(Self { q })
    }

    pub fn from_array(q: [T; 3]) -> Result<Self> {
        Self::new(q[0], q[1], q[2])
    }

    /// `q_x = q_y = q_z = 1/3`: the best approximation of the universal NOT.
    pub fn universal_not() -> Self {
        let third = T::one() / T::lit(3.0);
        Self { q: [third; 3] }
    }

    pub fn as_array(&self) -> [T; 3] {
        self.q
    }

    pub fn get(&self, k: usize) -> T {
        self.q[k]
    }

    /// Kraus operators `sqrt(q_k) sigma_k`.
    pub fn kraus(&self) -> KrausChannel<T> {
        let ops = pauli::all::<T>()
            .into_iter()
            .zip(self.q)
            .map(|(s, q)| s.scale_real(q.sqrt()))
            .collect();
        KrausChannel { dim: 2, ops }
    }
}

/// `sum_k q_k sigma_k m sigma_k` on an arbitrary 2x2 operator.
pub fn pauli_map<T: Real>(q: &PauliWeights<T>, m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    pauli::all::<T>()
        .iter()
        .zip(q.as_array())
        .fold(ComplexMatrix::zeros(2, 2), |acc, (s, w)| &acc + &s.conjugate(m).scale_real(w))
}

/// Applies the Pauli channel to a qubit state.
pub fn pauli_apply<T: Real>(q: &PauliWeights<T>, rho: &DensityOperator<T>) -> Result<DensityOperator<T>> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch(format!("Pauli channel on a {}-dim state", rho.dim())));
    }
    DensityOperator::with_tolerances(pauli_map(q, rho.matrix()), T::equality_tol(), T::psd_tol())
}

/// Channel given by Kraus operators with `sum_j K_j^dagger K_j = I`.
#[derive(Debug, Clone)]
pub struct KrausChannel<T: Real> {
    dim: usize,
    ops: Vec<ComplexMatrix<T>>,
}

impl<T: Real> KrausChannel<T> {
    pub fn new(ops: Vec<ComplexMatrix<T>>) -> Result<Self> {
        let first = ops.first().ok_or_else(|| Error::InvalidArgument("no Kraus operators".into()))?;
        let dim = first.rows();
        if ops.iter().any(|k| k.rows() != dim || k.cols() != dim) {
            return Err(Error::DimensionMismatch("Kraus operators must be square and equal-sized".into()));
        }
        let sum = ops.iter().fold(ComplexMatrix::zeros(dim, dim), |acc, k| &acc + &k.adjoint().matmul(k));
        let dev = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if dev > T::equality_tol() {
            return Err(Error::NotTracePreserving { deviation: dev.to_f64_lossy() });
        }
        Ok(Self { dim, ops })
    }

    /// Random-unitary channel with Kraus operators `sqrt(q_j) V_j`.
    pub fn random_unitary(terms: &[(T, ComplexMatrix<T>)]) -> Result<Self> {
        Self::new(terms.iter().map(|(q, v)| v.scale_real(q.sqrt())).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[ComplexMatrix<T>] {
        &self.ops
    }

    pub fn apply_matrix(&self, m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        self.ops
            .iter()
            .fold(ComplexMatrix::zeros(self.dim, self.dim), |acc, k| &acc + &k.conjugate(m))
    }

    pub fn apply(&self, rho: &DensityOperator<T>) -> Result<DensityOperator<T>> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "{}-dim channel on a {}-dim state",
                self.dim,
                rho.dim()
            )));
        }
        DensityOperator::with_tolerances(self.apply_matrix(rho.matrix()), T::equality_tol(), T::psd_tol())
    }
}

/// Trace-preserving qubit map in affine Bloch form: first row `(1, 0, 0, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineQubitMap<T: Real>(Mat4<T>);

impl<T: Real> AffineQubitMap<T> {
    pub fn new(m: Mat4<T>) -> Result<Self> {
        Self::with_tolerance(m, T::equality_tol())
    }

    pub fn with_tolerance(m: Mat4<T>, tol: T) -> Result<Self> {
        let dev = first_row_deviation(&m);
        if dev > tol {
            return Err(Error::NotTracePreserving { deviation: dev.to_f64_lossy() });
        }
        Ok(Self(m))
    }

    pub fn identity() -> Self {
        Self(Mat4::identity())
    }

    pub fn matrix(&self) -> &Mat4<T> {
        &self.0
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self(self.0 * other.0)
    }

    pub fn apply_bloch(&self, r: [T; 3]) -> [T; 3] {
        self.0.apply_bloch(r)
    }

    pub fn apply(&self, rho: &DensityOperator<T>) -> Result<DensityOperator<T>> {
        let r = rho.bloch()?;
        DensityOperator::with_tolerances(bloch_operator(self.apply_bloch(r)), T::equality_tol(), T::psd_tol())
    }

    /// Action on an arbitrary 2x2 operator, by linearity.
    pub fn apply_matrix(&self, m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        apply_transfer(&self.0, m)
    }

    pub fn det3(&self) -> T {
        self.0.block().det()
    }
}

fn first_row_deviation<T: Real>(m: &Mat4<T>) -> T {
    let target = [T::one(), T::zero(), T::zero(), T::zero()];
    (0..4).map(|j| (m.0[0][j] - target[j]).abs()).fold(T::zero(), T::max)
}

/// Applies a 4x4 transfer matrix to a 2x2 operator `m = (c_0 I + c . sigma) / 2`.
pub fn apply_transfer<T: Real>(t: &Mat4<T>, m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let basis = [ComplexMatrix::identity(2), pauli::x(), pauli::y(), pauli::z()];
    let coeffs: Vec<Complex<T>> = basis.iter().map(|b| b.matmul(m).trace()).collect();
    let half = T::lit(0.5);
    (0..4).fold(ComplexMatrix::zeros(2, 2), |acc, a| {
        let ca = (0..4).fold(Complex::<T>::zero(), |s, b| s + coeffs[b] * cr(t.0[a][b]));
        &acc + &basis[a].scale(ca * cr(half))
    })
}

/// Tomographic 4x4 representation of a Hermiticity-preserving linear qubit
/// map, probed with `I/2` and `(I + sigma_k)/2`. No trace-preservation check.
pub fn transfer_of<T: Real>(apply: impl Fn(&ComplexMatrix<T>) -> ComplexMatrix<T>) -> Mat4<T> {
    let zero = [T::zero(); 3];
    let base = apply(&bloch_operator(zero));
    let base_tr = base.trace().re;
    let base_r = bloch_of(&base);
    let mut m = Mat4::zeros();
    m.0[0][0] = base_tr;
    for k in 0..3 {
        m.0[k + 1][0] = base_r[k];
    }
    for j in 0..3 {
        let mut r = zero;
        r[j] = T::one();
        let img = apply(&bloch_operator(r));
        let img_r = bloch_of(&img);
        m.0[0][j + 1] = img.trace().re - base_tr;
        for k in 0..3 {
            m.0[k + 1][j + 1] = img_r[k] - base_r[k];
        }
    }
    m
}

/// Affine Bloch matrix of a trace-preserving qubit map.
pub fn affine_of<T: Real>(apply: impl Fn(&ComplexMatrix<T>) -> ComplexMatrix<T>) -> Result<AffineQubitMap<T>> {
    AffineQubitMap::with_tolerance(transfer_of(apply), T::lit(TP_EXTRACTION_TOL).max(T::equality_tol()))
}

/// Choi matrix `(1/d) sum_ij E(|i><j|) (x) |i><j|`, output factor first.
#[derive(Debug, Clone)]
pub struct ChoiMatrix<T: Real> {
    dim: usize,
    matrix: ComplexMatrix<T>,
}

impl<T: Real> ChoiMatrix<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        eigvalsh(&self.matrix)
    }
}

pub fn choi_of<T: Real>(apply: impl Fn(&ComplexMatrix<T>) -> ComplexMatrix<T>, d: usize) -> ChoiMatrix<T> {
    let inv_d = T::one() / T::from_usize(d).unwrap();
    let mut j = ComplexMatrix::zeros(d * d, d * d);
    for a in 0..d {
        for b in 0..d {
            let mut eab = ComplexMatrix::zeros(d, d);
            eab[(a, b)] = cr(T::one());
            let img = apply(&eab);
            j = &j + &kron(&img, &eab);
        }
    }
    ChoiMatrix { dim: d, matrix: j.scale_real(inv_d) }
}

/// Outcome of [`is_cptp`] with the quantities that decided it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CptpReport<T: Real> {
    pub cptp: bool,
    pub min_eigenvalue: T,
    pub trace_deviation: T,
}

pub fn is_cptp<T: Real>(choi: &ChoiMatrix<T>, tol: T) -> Result<CptpReport<T>> {
    let d = choi.dim;
    let min_eigenvalue = eigvalsh(&choi.matrix)?[0];
    let reduced = partial_trace_sys(&choi.matrix, d, d)?;
    let target = ComplexMatrix::identity(d).scale_real(T::one() / T::from_usize(d).unwrap());
    let trace_deviation = reduced.max_abs_diff(&target);
    Ok(CptpReport { cptp: min_eigenvalue >= -tol && trace_deviation <= tol, min_eigenvalue, trace_deviation })
}

/// Membership in the indivisible Pauli family: every weight strictly positive.
///
/// Unitary channels (one weight equal to 1) are not members of this family,
/// even though they are trivially indivisible.
pub fn is_indivisible_family<T: Real>(q: &PauliWeights<T>) -> bool {
    let cutoff = T::lit(STRICT_POSITIVITY_CUTOFF);
    q.as_array().iter().all(|x| *x > cutoff)
}
