use super::{family_map, printed_xa, FamilyParams};
use crate::bloch::{Mat3, Mat4};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `|det|` of the Bloch block below which `E_t` is treated as non-invertible.
pub const DEFAULT_SINGULAR_TOL: f64 = 1e-6;

// |x(t)| below which the printed coefficient formulas are undefined.
const PRINTED_X_GUARD: f64 = 1e-12;

/// The constant 3x3 matrices `I`, `A` (antisymmetric, the cross product with
/// `(1, 1, 1)`) and `S` (symmetric, zero diagonal).
#[derive(Debug, Clone, Copy)]
pub struct BasisMats<T: Real> {
    pub i: Mat3<T>,
    pub a: Mat3<T>,
    pub s: Mat3<T>,
}

impl<T: Real> Default for BasisMats<T> {
    fn default() -> Self {
        let (o, z) = (T::one(), T::zero());
        Self {
            i: Mat3::identity(),
            a: Mat3([[z, -o, o], [o, z, -o], [-o, o, z]]),
            s: Mat3([[z, o, o], [o, z, o], [o, o, z]]),
        }
    }
}

impl<T: Real> BasisMats<T> {
    /// `b I + c A + d S`.
    pub fn combine(&self, k: &GeneratorCoeffs<T>) -> Mat3<T> {
        self.i.scale(k.b) + self.a.scale(k.c) + self.s.scale(k.d)
    }
}

/// Coefficients of `b I + c A + d S` (inverse-time units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorCoeffs<T: Real> {
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Real> GeneratorCoeffs<T> {
    pub fn new(b: T, c: T, d: T) -> Result<Self> {
        if !(b.is_finite() && c.is_finite() && d.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { b, c, d })
    }
}

/// Projection of a generator block onto `span{I, A, S}` and what is left over.
#[derive(Debug, Clone, Copy)]
pub struct Extracted<T: Real> {
    pub coeffs: GeneratorCoeffs<T>,
    /// Frobenius norm of the block minus its projection.
    pub residual: T,
}

/// `L_t = (dE_t/dt) E_t^{-1}` with a central difference of step `1e-6 / alpha`.
pub fn generator_numeric<T: Real>(t: T, p: &FamilyParams<T>) -> Result<Mat4<T>> {
    generator_numeric_with(t, p, T::lit(1e-6) / p.alpha, T::lit(DEFAULT_SINGULAR_TOL))
}

pub fn generator_numeric_with<T: Real>(t: T, p: &FamilyParams<T>, h: T, singular_tol: T) -> Result<Mat4<T>> {
    let e = family_map(t, p);
    let det = e.det3();
    if det.abs() <= singular_tol {
        return Err(Error::SingularAt { t: t.to_f64_lossy(), det: det.to_f64_lossy() });
    }
    let fwd = *family_map(t + h, p).matrix();
    let bwd = *family_map(t - h, p).matrix();
    let deriv = (fwd - bwd).scale(T::one() / (T::lit(2.0) * h));
    let inv = e
        .matrix()
        .inverse()
        .map_err(|_| Error::SingularAt { t: t.to_f64_lossy(), det: det.to_f64_lossy() })?;
    Ok(deriv * inv)
}

/// Orthogonal projection of the Bloch block of `l` onto `span{I, A, S}`.
pub fn coeff_extract<T: Real>(l: &Mat4<T>) -> Extracted<T> {
    let basis = BasisMats::<T>::default();
    let block = l.block();
    let three = T::lit(3.0);
    let six = T::lit(6.0);
    let coeffs = GeneratorCoeffs { b: block.trace() / three, c: basis.a.inner(&block) / six, d: basis.s.inner(&block) / six };
    let residual = (block - basis.combine(&coeffs)).frobenius_norm();
    Extracted { coeffs, residual }
}

/// Verbatim evaluation of the printed closed-form coefficients for the
/// universal-NOT family. Comparison only.
pub fn coeff_printed<T: Real>(t: T, alpha: T) -> Result<GeneratorCoeffs<T>> {
    let (x, a) = printed_xa(t, alpha);
    if x.abs() <= T::lit(PRINTED_X_GUARD) {
        return Err(Error::FormulaUndefined { t: t.to_f64_lossy(), reason: "x(t) = 0" });
    }
    let r2 = a * a + x * x;
    let nine = T::lit(9.0);
    let b = T::lit(2.0) / nine * a * (T::lit(12.0) * alpha + T::one() / r2);
    let c = T::one() / (nine * x)
        * (alpha * (T::lit(3.0) * x - T::one()) / T::lit(2.0) - a * (T::lit(3.0) * x + a) / (x * r2));
    let d = a * (T::lit(3.0) * a - x) / (nine * x * r2);
    GeneratorCoeffs::new(b, c, d)
}
