//! Seeded generators for random states, unitaries and Pauli weights.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channels::PauliWeights;
use crate::matlin::{exp_i_hermitian, ComplexMatrix, DensityOperator};
use crate::scalar::Real;

pub type SimRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

// Box-Muller; avoids pulling in a distributions crate for one normal sampler.
fn normal(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub fn complex_gaussian<T: Real>(rng: &mut impl Rng) -> Complex<T> {
    Complex::new(T::lit(normal(rng)), T::lit(normal(rng)))
}

/// Haar-ish random pure state vector (normalized complex Gaussian).
pub fn random_ket<T: Real>(dim: usize, rng: &mut impl Rng) -> Vec<Complex<T>> {
    let v: Vec<Complex<T>> = (0..dim).map(|_| complex_gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    v.into_iter().map(|z| z / Complex::new(norm, T::zero())).collect()
}

pub fn random_hermitian<T: Real>(dim: usize, rng: &mut impl Rng) -> ComplexMatrix<T> {
    let g = ComplexMatrix::from_fn(dim, dim, |_| complex_gaussian(rng));
    g.hermitian_part()
}

/// `exp(i H)` for a random Hermitian `H` with spectrum spread over several turns.
pub fn random_unitary<T: Real>(dim: usize, rng: &mut impl Rng) -> ComplexMatrix<T> {
    let h = random_hermitian::<T>(dim, rng).scale_real(T::lit(2.0));
    exp_i_hermitian(&h).expect("Hermitian input")
}

/// Full-rank random density operator `G G^dagger / tr(G G^dagger)`.
pub fn random_density<T: Real>(dim: usize, rng: &mut impl Rng) -> DensityOperator<T> {
    let g = ComplexMatrix::from_fn(dim, dim, |_| complex_gaussian(rng));
    let m = g.matmul(&g.adjoint());
    let tr = m.trace().re;
    DensityOperator::with_tolerances(m.scale_real(T::one() / tr), T::equality_tol(), T::psd_tol())
        .expect("Gram matrices are positive")
}

/// Uniform point in the Bloch ball.
pub fn random_bloch<T: Real>(rng: &mut impl Rng) -> [T; 3] {
    loop {
        let r: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        if r.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
            return r.map(T::lit);
        }
    }
}

/// Uniform point on the probability simplex.
pub fn random_pauli_weights<T: Real>(rng: &mut impl Rng) -> PauliWeights<T> {
    let e: [f64; 3] = [0; 3].map(|_| -rng.gen_range(f64::EPSILON..1.0).ln());
    let s: f64 = e.iter().sum();
    let qx = e[0] / s;
    let qy = e[1] / s;
    let qz = 1.0 - qx - qy;
    PauliWeights::new(T::lit(qx), T::lit(qy), T::lit(qz.max(0.0))).expect("simplex point")
}
