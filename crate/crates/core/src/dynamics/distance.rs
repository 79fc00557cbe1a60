use num_complex::Complex;
use rand::Rng;
use rayon::prelude::*;

use super::{family_map, FamilyParams};
use crate::bloch::Mat4;
use crate::channels::PauliWeights;
use crate::error::{Error, Result};
use crate::matlin::{trace_norm, ComplexMatrix};
use crate::random::seeded;
use crate::scalar::Real;

/// Upper bound `2 + 8 sqrt(2)` on the step-distance constant.
pub const CB_BOUND_CONSTANT: f64 = 2.0 + 8.0 * std::f64::consts::SQRT_2;

/// Coordinate-descent sweeps per restart.
pub const OPTIMIZER_MAX_SWEEPS: usize = 200;
const INITIAL_STEP: f64 = 0.5;
const MIN_STEP: f64 = 1e-7;

/// Printed trigonometric step coefficients and the resulting distance bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepBound<T: Real> {
    /// `-sin((2j+1) pi / n) sin(pi / n)`
    pub c_next: T,
    /// `cos((2j+1) pi / n) sin(pi / n)`
    pub d_next: T,
    /// `K sin(pi / n)`
    pub bound: T,
    pub k: T,
}

pub fn step_bound<T: Real>(j: usize, n: usize) -> Result<StepBound<T>> {
    check_step(j, n)?;
    let nf = T::from_usize(n).unwrap();
    let arg = T::from_usize(2 * j + 1).unwrap() * T::PI() / nf;
    let s = (T::PI() / nf).sin();
    let k = T::lit(CB_BOUND_CONSTANT);
    Ok(StepBound { c_next: -arg.sin() * s, d_next: arg.cos() * s, bound: k * s, k })
}

/// Exact coefficients of `E_{j+1} - E_j = C (I - E) + D F`:
/// `C = cos^2((j+1) pi / 2n) - cos^2(j pi / 2n)` and
/// `D = (sin((j+1) pi / n) - sin(j pi / n)) / 2`.
pub fn step_coefficients<T: Real>(j: usize, n: usize) -> Result<(T, T)> {
    check_step(j, n)?;
    let nf = T::from_usize(n).unwrap();
    let th = |i: usize| T::from_usize(i).unwrap() * T::PI() / nf;
    let half = T::lit(0.5);
    let cos2 = |x: T| x.cos() * x.cos();
    let c = cos2(th(j + 1) * half) - cos2(th(j) * half);
    let d = half * (th(j + 1).sin() - th(j).sin());
    Ok((c, d))
}

fn check_step(j: usize, n: usize) -> Result<()> {
    if n == 0 || j >= n {
        return Err(Error::InvalidArgument(format!("step index {j} out of range for n = {n}")));
    }
    Ok(())
}

/// Transfer matrix of `E_{j+1} - E_j` for the `n`-collision model.
pub fn step_difference<T: Real>(j: usize, n: usize, q: &PauliWeights<T>) -> Result<Mat4<T>> {
    check_step(j, n)?;
    let p = FamilyParams::new(*q, n)?;
    let next = family_map(T::from_usize(j + 1).unwrap(), &p);
    let cur = family_map(T::from_usize(j).unwrap(), &p);
    Ok(*next.matrix() - *cur.matrix())
}

/// Lower bound on the step distance `||E_{j+1} - E_j||_cb`.
pub fn step_delta_estimate<T: Real>(j: usize, n: usize, q: &PauliWeights<T>, trials: usize, seed: u64) -> Result<T> {
    let diff = step_difference(j, n, q)?;
    cb_norm_estimate(&diff, trials, seed)
}

/// Certified lower bound on the completely bounded norm of a qubit map, from
/// `max ||(M (x) id_2)(|psi><psi|)||_1` over pure system-ancilla states.
///
/// Each restart draws 6 angles from a ChaCha stream seeded with `seed` and
/// runs cyclic coordinate ascent with a halving step. Restart `i` depends
/// only on the first `i + 1` draws, so the estimate never decreases as
/// `trials` grows.
pub fn cb_norm_estimate<T: Real>(map: &Mat4<T>, trials: usize, seed: u64) -> Result<T> {
    if trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    let mut rng = seeded(seed);
    let starts: Vec<[T; 6]> = (0..trials)
        .map(|_| {
            let mut x = [T::zero(); 6];
            for (i, xi) in x.iter_mut().enumerate() {
                let span = if i < 3 { std::f64::consts::PI } else { std::f64::consts::TAU };
                *xi = T::lit(rng.gen_range(0.0..span));
            }
            x
        })
        .collect();
    let best = starts
        .into_par_iter()
        .map(|x| ascend(map, x))
        .collect::<Result<Vec<T>>>()?
        .into_iter()
        .fold(T::zero(), T::max);
    Ok(best)
}

fn ascend<T: Real>(map: &Mat4<T>, mut x: [T; 6]) -> Result<T> {
    let mut best = objective(map, &x)?;
    let mut step = T::lit(INITIAL_STEP);
    for _ in 0..OPTIMIZER_MAX_SWEEPS {
        let mut improved = false;
        for i in 0..6 {
            for dir in [T::one(), -T::one()] {
                let mut y = x;
                y[i] += dir * step;
                let val = objective(map, &y)?;
                if val > best {
                    best = val;
                    x = y;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step = step / T::lit(2.0);
            if step < T::lit(MIN_STEP) {
                break;
            }
        }
    }
    Ok(best)
}

// Hyperspherical coordinates of a unit vector in C^4 (global phase dropped).
fn ket<T: Real>(x: &[T; 6]) -> [Complex<T>; 4] {
    let (s1, c1) = x[0].sin_cos();
    let (s2, c2) = x[1].sin_cos();
    let (s3, c3) = x[2].sin_cos();
    [
        Complex::new(c1, T::zero()),
        Complex::from_polar(s1 * c2, x[3]),
        Complex::from_polar(s1 * s2 * c3, x[4]),
        Complex::from_polar(s1 * s2 * s3, x[5]),
    ]
}

fn objective<T: Real>(map: &Mat4<T>, x: &[T; 6]) -> Result<T> {
    let out = extend_with_ancilla(map, &ket(x));
    trace_norm(&out)
}

/// `(M (x) id_2)(|psi><psi|)` for `psi` ordered system-first.
fn extend_with_ancilla<T: Real>(map: &Mat4<T>, psi: &[Complex<T>; 4]) -> ComplexMatrix<T> {
    let i = Complex::new(T::zero(), T::one());
    let half = Complex::new(T::lit(0.5), T::zero());
    let mut out = ComplexMatrix::zeros(4, 4);
    for a in 0..2 {
        for b in 0..2 {
            // X_ab = Psi[:, a] Psi[:, b]^dagger on the system
            let x = |s: usize, t: usize| psi[2 * s + a] * psi[2 * t + b].conj();
            let (x00, x01, x10, x11) = (x(0, 0), x(0, 1), x(1, 0), x(1, 1));
            let coeff = [x00 + x11, x01 + x10, i * (x01 - x10), x00 - x11];
            let img: Vec<Complex<T>> = (0..4)
                .map(|r| (0..4).fold(Complex::new(T::zero(), T::zero()), |acc, c| acc + coeff[c] * map.0[r][c]))
                .collect();
            let y = [
                [(img[0] + img[3]) * half, (img[1] - i * img[2]) * half],
                [(img[1] + i * img[2]) * half, (img[0] - img[3]) * half],
            ];
            for s in 0..2 {
                for t in 0..2 {
                    out[(2 * s + a, 2 * t + b)] = y[s][t];
                }
            }
        }
    }
    out
}
