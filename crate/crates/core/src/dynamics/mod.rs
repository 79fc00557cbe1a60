//! The continuous family `E_t` obtained by letting the collision index run
//! over the reals, its time-local generator, and step-distance analysis.
//!
//! Ground truth for `E_t` is the closed-form collision channel at angle
//! `alpha * t`. The printed closed forms for `x(t)`, `a(t)`, the determinant
//! and the generator coefficients are kept as comparison-only functions; they
//! are never used to compute anything else.

mod distance;
mod generator;
mod integrate;
mod master;

pub use distance::{
    cb_norm_estimate, step_bound, step_coefficients, step_delta_estimate, step_difference, StepBound,
    CB_BOUND_CONSTANT, OPTIMIZER_MAX_SWEEPS,
};
pub use generator::{
    coeff_extract, coeff_printed, generator_numeric, generator_numeric_with, BasisMats, Extracted, GeneratorCoeffs,
    DEFAULT_SINGULAR_TOL,
};
pub use integrate::{integrate, IntegrateOptions, Trajectory};
pub use master::{calibrate_convention, master_rhs, Convention};

use num_complex::Complex;

use crate::bloch::Mat4;
use crate::channels::{affine_of, pauli_map, transfer_of, AffineQubitMap, PauliWeights};
use crate::collision::{closed_map, target_eta};
use crate::error::{Error, Result};
use crate::matlin::{pauli, ComplexMatrix};
use crate::scalar::Real;

/// Target weights, collision count and angular rate `alpha = pi / (2n)`.
#[derive(Debug, Clone, Copy)]
pub struct FamilyParams<T: Real> {
    pub q: PauliWeights<T>,
    pub alpha: T,
    pub n: usize,
}

impl<T: Real> FamilyParams<T> {
    pub fn new(q: PauliWeights<T>, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        Ok(Self { q, alpha: target_eta(n), n })
    }

    /// Time at which the target channel is reached.
    pub fn end_time(&self) -> T {
        T::from_usize(self.n).unwrap()
    }

    /// Default exclusion half-width around a singular time, `1e-3 * n`.
    pub fn singular_margin(&self) -> T {
        T::lit(1e-3) * self.end_time()
    }
}

/// `E_t` in affine form.
pub fn family_map<T: Real>(t: T, p: &FamilyParams<T>) -> AffineQubitMap<T> {
    let theta = p.alpha * t;
    affine_of(|m| closed_map(&p.q, theta, m)).expect("mixture of unitaries is trace preserving")
}

/// The target Pauli channel `E`.
pub fn target_map<T: Real>(q: &PauliWeights<T>) -> AffineQubitMap<T> {
    affine_of(|m| pauli_map(q, m)).expect("Pauli channels are trace preserving")
}

/// `F(m) = i sum_k q_k [sigma_k, m]`, as a 4x4 transfer matrix.
pub fn f_map<T: Real>(q: &PauliWeights<T>) -> Mat4<T> {
    transfer_of(|m| f_apply(q, m))
}

pub(crate) fn f_apply<T: Real>(q: &PauliWeights<T>, m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let sum = pauli::all::<T>()
        .iter()
        .zip(q.as_array())
        .fold(ComplexMatrix::zeros(2, 2), |acc, (s, w)| &acc + &s.commutator(m).scale_real(w));
    sum.scale(Complex::new(T::zero(), T::one()))
}

/// Printed `x(t) = (4 cos^2(alpha t) - 1) / 3` and `a(t) = sin(2 alpha t) / 6`.
pub fn printed_xa<T: Real>(t: T, alpha: T) -> (T, T) {
    let ct = (alpha * t).cos();
    let x = (T::lit(4.0) * ct * ct - T::one()) / T::lit(3.0);
    let a = (T::lit(2.0) * alpha * t).sin() / T::lit(6.0);
    (x, a)
}

/// Printed determinant `3 x (a^2 + x^2)`.
pub fn printed_det<T: Real>(t: T, alpha: T) -> T {
    let (x, a) = printed_xa(t, alpha);
    T::lit(3.0) * x * (a * a + x * x)
}

/// Determinant of the Bloch block of `E_t`.
pub fn family_det3<T: Real>(t: T, p: &FamilyParams<T>) -> T {
    family_map(t, p).det3()
}

/// Times in `[t0, t1]` where `det E_t` vanishes: sign changes of the
/// determinant on a fine grid, refined by bisection, plus grid minima of
/// `|det|` that touch zero without crossing.
pub fn singular_times<T: Real>(p: &FamilyParams<T>, t0: T, t1: T) -> Vec<T> {
    const GRID: usize = 4096;
    let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
    if hi == lo {
        let d = family_det3(lo, p);
        return if d.abs() <= T::lit(1e-12) { vec![lo] } else { vec![] };
    }
    let h = (hi - lo) / T::from_usize(GRID).unwrap();
    let ts: Vec<T> = (0..=GRID).map(|i| lo + h * T::from_usize(i).unwrap()).collect();
    let ds: Vec<T> = ts.iter().map(|&t| family_det3(t, p)).collect();
    let mut out = Vec::new();
    for i in 0..GRID {
        if ds[i] == T::zero() {
            out.push(ts[i]);
        } else if ds[i] * ds[i + 1] < T::zero() {
            out.push(bisect(|t| family_det3(t, p), ts[i], ts[i + 1], ds[i]));
        } else if i > 0 && ds[i].abs() < ds[i - 1].abs() && ds[i].abs() < ds[i + 1].abs() && ds[i].abs() < T::lit(1e-9) {
            out.push(ts[i]);
        }
    }
    if ds[GRID] == T::zero() {
        out.push(ts[GRID]);
    }
    out.dedup_by(|a, b| (*a - *b).abs() <= h);
    out
}

fn bisect<T: Real>(f: impl Fn(T) -> T, mut a: T, mut b: T, mut fa: T) -> T {
    for _ in 0..200 {
        let m = (a + b) / T::lit(2.0);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == T::zero() {
            return m;
        }
        if fa * fm < T::zero() {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    (a + b) / T::lit(2.0)
}

/// Largest Frobenius defect `|E_s E_t - E_{s+t}|` over a uniform grid of
/// `(s, t)` with `s + t <= n`. Returns `(s, t, defect)`.
pub fn semigroup_violation<T: Real>(p: &FamilyParams<T>, grid: usize) -> (T, T, T) {
    let end = p.end_time();
    let step = end / T::from_usize(grid.max(1)).unwrap();
    let mut best = (T::zero(), T::zero(), T::zero());
    for i in 0..=grid {
        for j in 0..=(grid - i) {
            let s = step * T::from_usize(i).unwrap();
            let t = step * T::from_usize(j).unwrap();
            let lhs = family_map(s, p).compose(&family_map(t, p));
            let rhs = family_map(s + t, p);
            let defect = (*lhs.matrix() - *rhs.matrix()).frobenius_norm();
            if defect > best.2 {
                best = (s, t, defect);
            }
        }
    }
    best
}
