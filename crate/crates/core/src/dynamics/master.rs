use num_complex::Complex;

use super::generator::{coeff_extract, BasisMats, GeneratorCoeffs};
use crate::bloch::Mat4;
use crate::channels::transfer_of;
use crate::error::{Error, Result};
use crate::matlin::{pauli, ComplexMatrix};
use crate::scalar::Real;

// Largest tolerated leakage of a unit-coefficient action outside its span.
const CALIBRATION_RESIDUAL_TOL: f64 = 1e-10;

/// Right-hand side of the operator-form master equation (hbar = 1):
///
/// `-(i c / 2) [rho, H] - (b / 2)(sum_j s_j rho s_j - 3 rho) + d sum_{j != k} s_j rho s_k`
/// with `H = s_x + s_y + s_z`.
pub fn master_rhs<T: Real>(rho: &ComplexMatrix<T>, k: &GeneratorCoeffs<T>) -> ComplexMatrix<T> {
    let ps = pauli::all::<T>();
    let h = ps.iter().fold(ComplexMatrix::zeros(2, 2), |acc, s| &acc + s);

    let hamiltonian = rho.commutator(&h).scale(Complex::new(T::zero(), -k.c / T::lit(2.0)));

    let twirl = ps.iter().fold(ComplexMatrix::zeros(2, 2), |acc, s| &acc + &s.matmul(rho).matmul(s));
    let depol = (&twirl - &rho.scale_real(T::lit(3.0))).scale_real(-k.b / T::lit(2.0));

    let mut cross = ComplexMatrix::zeros(2, 2);
    for (j, sj) in ps.iter().enumerate() {
        for (l, sl) in ps.iter().enumerate() {
            if j != l {
                cross = &cross + &sj.matmul(rho).matmul(sl);
            }
        }
    }
    let cross = cross.scale_real(k.d);

    &(&hamiltonian + &depol) + &cross
}

/// Scale factors between the operator-form coefficients and the Bloch block
/// `b I + c A + d S`: unit operator coefficient `b` acts on Bloch vectors as
/// `kappa_b I`, and likewise for `c` and `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Convention<T: Real> {
    pub kappa_b: T,
    pub kappa_c: T,
    pub kappa_d: T,
}

impl<T: Real> Convention<T> {
    /// Operator-form coefficients whose right-hand side has the given Bloch block coefficients.
    pub fn operator_coeffs(&self, bloch: &GeneratorCoeffs<T>) -> GeneratorCoeffs<T> {
        GeneratorCoeffs { b: bloch.b / self.kappa_b, c: bloch.c / self.kappa_c, d: bloch.d / self.kappa_d }
    }

    /// Bloch block coefficients produced by operator-form coefficients.
    pub fn bloch_coeffs(&self, op: &GeneratorCoeffs<T>) -> GeneratorCoeffs<T> {
        GeneratorCoeffs { b: op.b * self.kappa_b, c: op.c * self.kappa_c, d: op.d * self.kappa_d }
    }
}

/// Bloch transfer matrix of `master_rhs` at fixed coefficients.
pub fn master_transfer<T: Real>(k: &GeneratorCoeffs<T>) -> Mat4<T> {
    transfer_of(|m| master_rhs(m, k))
}

/// Tomographically measures how each unit coefficient acts on Bloch vectors,
/// checking that `b`, `c`, `d` generate multiples of `I`, `A`, `S` respectively.
pub fn calibrate_convention<T: Real>() -> Result<Convention<T>> {
    let basis = BasisMats::<T>::default();
    let (o, z) = (T::one(), T::zero());
    let probes: [(&'static str, GeneratorCoeffs<T>, usize); 3] = [
        ("b", GeneratorCoeffs { b: o, c: z, d: z }, 0),
        ("c", GeneratorCoeffs { b: z, c: o, d: z }, 1),
        ("d", GeneratorCoeffs { b: z, c: z, d: o }, 2),
    ];
    let mut kappa = [T::zero(); 3];
    for (term, unit, slot) in probes {
        let t = master_transfer(&unit);
        let ex = coeff_extract(&t);
        let picked = [ex.coeffs.b, ex.coeffs.c, ex.coeffs.d][slot];
        let only = GeneratorCoeffs {
            b: if slot == 0 { picked } else { z },
            c: if slot == 1 { picked } else { z },
            d: if slot == 2 { picked } else { z },
        };
        let leak = (t.block() - basis.combine(&only)).frobenius_norm();
        let affine_leak = (0..4).map(|j| t.0[0][j].abs()).chain((1..4).map(|i| t.0[i][0].abs())).fold(z, T::max);
        let residual = leak.max(affine_leak);
        if residual > T::lit(CALIBRATION_RESIDUAL_TOL) || picked == z {
            return Err(Error::Calibration { term, residual: residual.to_f64_lossy() });
        }
        kappa[slot] = picked;
    }
    Ok(Convention { kappa_b: kappa[0], kappa_c: kappa[1], kappa_d: kappa[2] })
}
