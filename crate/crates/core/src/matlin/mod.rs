//! Small dense complex linear algebra: tensor products, partial traces,
//! Hermitian-unitary exponentials, principal unitary roots and trace norms.

mod density;
mod eigen;
mod matrix;

pub use density::{bloch_of, bloch_operator, DensityOperator};
pub use eigen::{eigh, eigvalsh, shifted_cholesky_check, HermitianEigen};
pub use matrix::ComplexMatrix;

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Pauli matrices, indexed x -> 0, y -> 1, z -> 2.
pub mod pauli {
    use super::ComplexMatrix;
    use crate::scalar::{c, Real};

    pub fn x<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::from_rows(vec![vec![c(0., 0.), c(1., 0.)], vec![c(1., 0.), c(0., 0.)]]).unwrap()
    }

    pub fn y<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::from_rows(vec![vec![c(0., 0.), c(0., -1.)], vec![c(0., 1.), c(0., 0.)]]).unwrap()
    }

    pub fn z<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::from_rows(vec![vec![c(1., 0.), c(0., 0.)], vec![c(0., 0.), c(-1., 0.)]]).unwrap()
    }

    pub fn all<T: Real>() -> [ComplexMatrix<T>; 3] {
        [x(), y(), z()]
    }
}

/// Kronecker product; `A` is the outer (leading) factor.
pub fn kron<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let (br, bc) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * br, a.cols() * bc, |(i, j)| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

/// Traces out the trailing `d_e`-dimensional factor of a `d_s * d_e` operator.
pub fn partial_trace_env<T: Real>(m: &ComplexMatrix<T>, d_s: usize, d_e: usize) -> Result<ComplexMatrix<T>> {
    if !m.is_square() || m.rows() != d_s * d_e {
        return Err(Error::DimensionMismatch(format!(
            "partial trace of {}x{} over factors {d_s}x{d_e}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(ComplexMatrix::from_fn(d_s, d_s, |(a, b)| {
        (0..d_e).fold(Complex::zero(), |acc, e| acc + m[(a * d_e + e, b * d_e + e)])
    }))
}

/// Traces out the leading `d_s`-dimensional factor.
pub fn partial_trace_sys<T: Real>(m: &ComplexMatrix<T>, d_s: usize, d_e: usize) -> Result<ComplexMatrix<T>> {
    if !m.is_square() || m.rows() != d_s * d_e {
        return Err(Error::DimensionMismatch(format!(
            "partial trace of {}x{} over factors {d_s}x{d_e}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(ComplexMatrix::from_fn(d_e, d_e, |(a, b)| {
        (0..d_s).fold(Complex::zero(), |acc, s| acc + m[(s * d_e + a, s * d_e + b)])
    }))
}

/// `exp(i eta C) = cos(eta) I + i sin(eta) C` for a Hermitian unitary `C`.
pub fn herm_unitary_exp<T: Real>(cmat: &ComplexMatrix<T>, eta: T) -> Result<ComplexMatrix<T>> {
    let tol = T::validation_tol();
    let herm = cmat.hermiticity_deviation();
    let invol = if cmat.is_square() {
        cmat.matmul(cmat).max_abs_diff(&ComplexMatrix::identity(cmat.rows()))
    } else {
        T::infinity()
    };
    if herm > tol || invol > tol {
        return Err(Error::NotHermitianUnitary { deviation: herm.max(invol).to_f64_lossy() });
    }
    let id = ComplexMatrix::identity(cmat.rows()).scale_real(eta.cos());
    Ok(&id + &cmat.scale(Complex::new(T::zero(), eta.sin())))
}

/// Spectral data of a unitary: an orthonormal eigenbasis and principal
/// eigenphases in `(-pi, pi]`.
#[derive(Debug, Clone)]
pub struct UnitarySpectrum<T: Real> {
    pub phases: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> UnitarySpectrum<T> {
    /// Diagonalizes a unitary through the commuting Hermitian pair
    /// `(V + V^dagger)/2`, `(V - V^dagger)/2i`: eigenspaces of the first are
    /// refined by diagonalizing the second inside each cluster.
    pub fn of(v: &ComplexMatrix<T>) -> Result<Self> {
        let dev = v.unitarity_deviation();
        if dev > T::validation_tol() {
            return Err(Error::NotUnitary { deviation: dev.to_f64_lossy() });
        }
        let n = v.rows();
        let vd = v.adjoint();
        let re_part = (v + &vd).scale_real(T::lit(0.5));
        let im_part = (v - &vd).scale(Complex::new(T::zero(), T::lit(-0.5)));

        let first = eigh(&re_part)?;
        let cluster_tol = T::lit(1e-6);
        let mut basis = first.vectors.clone();
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && first.values[end] - first.values[end - 1] <= cluster_tol {
                end += 1;
            }
            if end - start > 1 {
                refine_cluster(&mut basis, &im_part, start, end)?;
            }
            start = end;
        }

        let phases = (0..n)
            .map(|k| {
                let col: Vec<_> = (0..n).map(|i| basis[(i, k)]).collect();
                let vcol = v.apply(&col);
                let lambda = col.iter().zip(&vcol).fold(Complex::zero(), |acc, (a, b)| acc + a.conj() * *b);
                principal_arg(lambda)
            })
            .collect();
        Ok(Self { phases, vectors: basis })
    }

    /// `sum_k e^{i (theta_k + 2 pi m_k) / n} |v_k><v_k|` where `m_k = branch(k)`.
    pub fn root_with_branch(&self, n: usize, branch: impl Fn(usize) -> i64) -> ComplexMatrix<T> {
        let dim = self.phases.len();
        let nf = T::from_usize(n).unwrap();
        let weights: Vec<_> = self
            .phases
            .iter()
            .enumerate()
            .map(|(k, &th)| {
                let shift = T::from_i64(branch(k)).unwrap() * T::TAU();
                Complex::from_polar(T::one(), (th + shift) / nf)
            })
            .collect();
        let vecs = &self.vectors;
        ComplexMatrix::from_fn(dim, dim, |(i, j)| {
            (0..dim).fold(Complex::zero(), |acc, k| acc + vecs[(i, k)] * weights[k] * vecs[(j, k)].conj())
        })
    }

    pub fn root(&self, n: usize) -> ComplexMatrix<T> {
        self.root_with_branch(n, |_| 0)
    }
}

fn refine_cluster<T: Real>(basis: &mut ComplexMatrix<T>, h: &ComplexMatrix<T>, start: usize, end: usize) -> Result<()> {
    let n = basis.rows();
    let k = end - start;
    let q = ComplexMatrix::from_fn(n, k, |(i, j)| basis[(i, start + j)]);
    let restricted = q.adjoint().matmul(h).matmul(&q);
    let sub = eigh(&restricted)?;
    let rotated = q.matmul(&sub.vectors);
    for i in 0..n {
        for j in 0..k {
            basis[(i, start + j)] = rotated[(i, j)];
        }
    }
    Ok(())
}

// arg in (-pi, pi]; the negative real axis maps to +pi.
fn principal_arg<T: Real>(z: Complex<T>) -> T {
    let a = z.arg();
    if a <= -T::PI() {
        T::PI()
    } else {
        a
    }
}

/// Principal `n`-th root of a unitary: eigenphases in `(-pi, pi]` divided by `n`.
pub fn unitary_root<T: Real>(v: &ComplexMatrix<T>, n: usize) -> Result<ComplexMatrix<T>> {
    if n == 0 {
        return Err(Error::InvalidArgument("root order must be positive".into()));
    }
    Ok(UnitarySpectrum::of(v)?.root(n))
}

/// Sum of singular values.
pub fn trace_norm<T: Real>(m: &ComplexMatrix<T>) -> Result<T> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("trace norm of a non-square matrix".into()));
    }
    if m.is_hermitian(T::epsilon() * T::lit(64.0) * m.frobenius_norm().max(T::one())) {
        return Ok(eigvalsh(m)?.into_iter().map(T::abs).sum());
    }
    let gram = m.adjoint().matmul(m);
    Ok(eigvalsh(&gram)?.into_iter().map(|l| l.max(T::zero()).sqrt()).sum())
}

/// `exp(i H)` for Hermitian `H` via its eigendecomposition.
pub fn exp_i_hermitian<T: Real>(h: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    Ok(eigh(h)?.map_spectrum(|l| Complex::from_polar(T::one(), l)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;
    use std::f64::consts::PI;

    fn ket(dim: usize, k: usize) -> Vec<Complex<f64>> {
        (0..dim).map(|i| if i == k { c(1.0, 0.0) } else { c(0.0, 0.0) }).collect()
    }

    fn control_c() -> ComplexMatrix<f64> {
        let mut out = ComplexMatrix::zeros(6, 6);
        for (k, s) in pauli::all::<f64>().iter().enumerate() {
            let proj = ComplexMatrix::outer(&ket(3, k), &ket(3, k));
            out = &out + &kron(s, &proj);
        }
        out
    }

    #[test]
    fn kron_identities() {
        let i6 = kron(&ComplexMatrix::<f64>::identity(2), &ComplexMatrix::identity(3));
        assert!(i6.approx_eq(&ComplexMatrix::identity(6), 0.0));
        let zz = kron(&pauli::z::<f64>(), &pauli::z());
        assert!(zz.approx_eq(&ComplexMatrix::diag_real(&[1.0, -1.0, -1.0, 1.0]), 0.0));
    }

    #[test]
    fn kron_controlled_block() {
        let px = ComplexMatrix::outer(&ket(3, 0), &ket(3, 0));
        let m = kron(&pauli::x::<f64>(), &px);
        for i in 0..6 {
            for j in 0..6 {
                let expected = if i % 3 == 0 && j % 3 == 0 { pauli::x::<f64>()[(i / 3, j / 3)] } else { c(0.0, 0.0) };
                assert_eq!(m[(i, j)], expected);
            }
        }
    }

    #[test]
    fn partial_trace_product_and_bell() {
        let rho = DensityOperator::<f64>::from_bloch([0.2, -0.1, 0.6]).unwrap();
        let xi = ComplexMatrix::diag_real(&[0.2, 0.3, 0.5]);
        let joint = kron(rho.matrix(), &xi);
        assert!(partial_trace_env(&joint, 2, 3).unwrap().approx_eq(rho.matrix(), 1e-15));
        assert!(partial_trace_sys(&joint, 2, 3).unwrap().approx_eq(&xi, 1e-15));

        let s = 1.0 / 2f64.sqrt();
        let bell = DensityOperator::pure(&[c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]).unwrap();
        let red = partial_trace_env(bell.matrix(), 2, 2).unwrap();
        assert!(red.approx_eq(&ComplexMatrix::identity(2).scale_real(0.5), 1e-15));

        assert!(partial_trace_env(&joint, 3, 3).is_err());
    }

    #[test]
    fn herm_unitary_exp_examples() {
        let cx = pauli::x::<f64>();
        assert!(herm_unitary_exp(&cx, 0.0).unwrap().approx_eq(&ComplexMatrix::identity(2), 0.0));
        let half = herm_unitary_exp(&cx, PI / 2.0).unwrap();
        assert!(half.approx_eq(&cx.scale(c(0.0, 1.0)), 1e-15));

        let cc = control_c();
        let fast = herm_unitary_exp(&cc, PI / 7.0).unwrap();
        let oracle = exp_i_hermitian(&cc.scale_real(PI / 7.0)).unwrap();
        assert!(fast.approx_eq(&oracle, 1e-12));
        assert!(fast.is_unitary(1e-13));
    }

    #[test]
    fn herm_unitary_exp_rejects_non_involution() {
        let m = ComplexMatrix::<f64>::diag_real(&[1.0, 2.0]);
        assert!(matches!(herm_unitary_exp(&m, 0.3), Err(Error::NotHermitianUnitary { .. })));
    }

    #[test]
    fn unitary_root_examples() {
        let i3 = ComplexMatrix::<f64>::identity(3);
        assert!(unitary_root(&i3, 5).unwrap().approx_eq(&i3, 1e-14));

        let v = ComplexMatrix::diag(&[c(1.0, 0.0), Complex::from_polar(1.0, PI / 2.0)]);
        let w = unitary_root(&v, 2).unwrap();
        let expected = ComplexMatrix::diag(&[c(1.0, 0.0), Complex::from_polar(1.0, PI / 4.0)]);
        assert!(w.approx_eq(&expected, 1e-14));

        let sx = pauli::x::<f64>();
        let w = unitary_root(&sx, 2).unwrap();
        assert!(w.matmul(&w).approx_eq(&sx, 1e-12));
        assert!(w.is_unitary(1e-12));
    }

    #[test]
    fn unitary_root_principal_branch_at_minus_one() {
        // -I has eigenphase pi on the principal branch, so its square root is iI.
        let m = ComplexMatrix::<f64>::identity(2).scale_real(-1.0);
        let w = unitary_root(&m, 2).unwrap();
        assert!(w.approx_eq(&ComplexMatrix::identity(2).scale(c(0.0, 1.0)), 1e-14));
    }

    #[test]
    fn unitary_root_rejects_non_unitary() {
        let m = ComplexMatrix::<f64>::diag_real(&[1.0, 0.5]);
        assert!(matches!(unitary_root(&m, 2), Err(Error::NotUnitary { .. })));
        assert!(unitary_root(&ComplexMatrix::<f64>::identity(2), 0).is_err());
    }

    #[test]
    fn trace_norm_examples() {
        assert!((trace_norm(&pauli::z::<f64>()).unwrap() - 2.0).abs() < 1e-15);
        let rho = DensityOperator::<f64>::from_bloch([0.1, 0.5, -0.3]).unwrap();
        assert!((trace_norm(rho.matrix()).unwrap() - 1.0).abs() < 1e-14);
        let d = ComplexMatrix::<f64>::diag_real(&[1.0, -1.0]);
        assert!((trace_norm(&d).unwrap() - 2.0).abs() < 1e-15);
        // non-Hermitian: |0><1| has a single singular value 1
        let e01 = ComplexMatrix::outer(&ket(2, 0), &ket(2, 1));
        assert!((trace_norm(&e01).unwrap() - 1.0).abs() < 1e-14);
    }
}
