use num_complex::Complex;
use num_traits::Zero;

use super::env::{ghz_env_capped, EnvSpec};
use super::control_unitary;
use crate::channels::PauliWeights;
use crate::error::{Error, Result};
use crate::matlin::{kron, partial_trace_env, ComplexMatrix, DensityOperator};
use crate::scalar::Real;

/// Largest qutrit environment simulated densely by default (joint dim 2 * 3^6).
pub const DEFAULT_DENSE_CAP: usize = 6;

pub(crate) fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::CapExceeded { particles: n, cap });
    }
    Ok(())
}

/// Dense simulator with a configurable particle cap.
#[derive(Debug, Clone, Copy)]
pub struct DenseEngine {
    pub cap: usize,
}

impl Default for DenseEngine {
    fn default() -> Self {
        Self { cap: DEFAULT_DENSE_CAP }
    }
}

impl DenseEngine {
    pub fn new(cap: usize) -> Self {
        Self { cap }
    }

    /// Largest joint dimension allowed: that of a qubit with `cap` qutrits.
    pub fn max_joint_dim(&self) -> usize {
        2usize.saturating_mul(3usize.saturating_pow(self.cap as u32))
    }

    pub fn ghz_env<T: Real>(&self, q: &PauliWeights<T>, n: usize) -> Result<EnvSpec<T>> {
        ghz_env_capped(q, n, self.cap)
    }

    pub fn simulate<T: Real>(
        &self,
        rho: &DensityOperator<T>,
        env: &EnvSpec<T>,
        eta: T,
        steps: usize,
    ) -> Result<DensityOperator<T>> {
        let n = env.particles();
        check_cap(n, self.cap)?;
        if rho.dim() != 2 {
            return Err(Error::DimensionMismatch(format!("qubit collision model on a {}-dim state", rho.dim())));
        }
        if steps > n {
            return Err(Error::InvalidArgument(format!("{steps} steps with an environment of {n} particles")));
        }
        let omega = env.dense_omega()?;
        let u = control_unitary(eta);
        let out = evolve_operator(rho.matrix(), &omega, &u, 2, 3, n, steps);
        DensityOperator::with_tolerances(out, T::equality_tol(), T::psd_tol())
    }
}

/// `tr_env[(U_1 ... U_steps)(rho (x) omega)(U_1 ... U_steps)^dagger]` with the
/// default cap.
pub fn simulate_dense<T: Real>(
    rho: &DensityOperator<T>,
    env: &EnvSpec<T>,
    eta: T,
    steps: usize,
) -> Result<DensityOperator<T>> {
    DenseEngine::default().simulate(rho, env, eta, steps)
}

// Evolves an arbitrary system operator `m` (linear in m), so channel tomography
// can reuse it.
pub(crate) fn evolve_operator<T: Real>(
    m: &ComplexMatrix<T>,
    omega: &ComplexMatrix<T>,
    u: &ComplexMatrix<T>,
    ds: usize,
    de: usize,
    n: usize,
    steps: usize,
) -> ComplexMatrix<T> {
    let mut joint = kron(m, omega);
    for j in 0..steps {
        apply_collision(&mut joint, u, ds, de, n, j);
    }
    let env_dim = de.pow(n as u32);
    partial_trace_env(&joint, ds, env_dim).expect("joint dimension is ds * de^n")
}

/// In place `state <- U_j state U_j^dagger`, where `U_j` is the two-factor
/// unitary `u` (system (x) particle, dim `ds * de`) acting on the system and
/// environment particle `j` (0-based, particle 0 most significant), identity
/// elsewhere. Works by index arithmetic; the full joint unitary is never built.
pub fn apply_collision<T: Real>(state: &mut ComplexMatrix<T>, u: &ComplexMatrix<T>, ds: usize, de: usize, n: usize, j: usize) {
    assert!(j < n, "particle index out of range");
    let env_dim = de.pow(n as u32);
    let dim = ds * env_dim;
    assert_eq!(state.rows(), dim);
    assert_eq!(u.rows(), ds * de);
    let stride = de.pow((n - 1 - j) as u32);
    let local = ds * de;

    let offsets: Vec<usize> = (0..local).map(|a| (a / de) * env_dim + (a % de) * stride).collect();
    let bases: Vec<usize> = (0..env_dim).filter(|e| (e / stride) % de == 0).collect();
    let uu: Vec<Complex<T>> = u.as_array().iter().copied().collect();

    let data = state.as_array_mut();
    let mut buf = vec![Complex::zero(); local];
    let mut out = vec![Complex::zero(); local];

    // rows: state <- U state
    for col in 0..dim {
        for &b in &bases {
            for a in 0..local {
                buf[a] = data[(b + offsets[a], col)];
            }
            for a in 0..local {
                let row = &uu[a * local..(a + 1) * local];
                out[a] = row.iter().zip(&buf).fold(Complex::zero(), |acc, (x, y)| acc + *x * *y);
            }
            for a in 0..local {
                data[(b + offsets[a], col)] = out[a];
            }
        }
    }
    // columns: state <- state U^dagger
    for row in 0..dim {
        for &b in &bases {
            for a in 0..local {
                buf[a] = data[(row, b + offsets[a])];
            }
            for a in 0..local {
                let urow = &uu[a * local..(a + 1) * local];
                out[a] = urow.iter().zip(&buf).fold(Complex::zero(), |acc, (x, y)| acc + x.conj() * *y);
            }
            for a in 0..local {
                data[(row, b + offsets[a])] = out[a];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::pauli_apply;
    use crate::collision::{simulate_closed, target_eta};
    use crate::matlin::partial_trace_env;
    use crate::scalar::c;

    // Embeds u on (system, particle j) explicitly: permutation-free because the
    // factors are ordered system, particle 0, ..., particle n-1.
    fn explicit_joint_unitary(u: &ComplexMatrix<f64>, ds: usize, de: usize, n: usize, j: usize) -> ComplexMatrix<f64> {
        let env_dim = de.pow(n as u32);
        let dim = ds * env_dim;
        let stride = de.pow((n - 1 - j) as u32);
        ComplexMatrix::from_fn(dim, dim, |(r, cc)| {
            let (rs, re) = (r / env_dim, r % env_dim);
            let (cs, ce) = (cc / env_dim, cc % env_dim);
            let (rk, ck) = ((re / stride) % de, (ce / stride) % de);
            if re - rk * stride != ce - ck * stride {
                return c(0.0, 0.0);
            }
            u[(rs * de + rk, cs * de + ck)]
        })
    }

    #[test]
    fn index_arithmetic_matches_explicit_embedding() {
        let u = control_unitary::<f64>(0.41);
        let n = 3;
        let q = PauliWeights::new(0.2, 0.3, 0.5).unwrap();
        let omega = DenseEngine::default().ghz_env(&q, n).unwrap().dense_omega().unwrap();
        let rho = DensityOperator::from_bloch([0.3, 0.2, 0.1]).unwrap();
        let start = kron(rho.matrix(), &omega);
        for j in 0..n {
            let mut fast = start.clone();
            apply_collision(&mut fast, &u, 2, 3, n, j);
            let big = explicit_joint_unitary(&u, 2, 3, n, j);
            let slow = big.conjugate(&start);
            assert!(fast.approx_eq(&slow, 1e-14));
        }
    }

    #[test]
    fn zero_steps_is_identity() {
        let q = PauliWeights::new(0.2, 0.3, 0.5).unwrap();
        let env = DenseEngine::default().ghz_env(&q, 3).unwrap();
        let rho = DensityOperator::from_bloch([0.3, 0.2, 0.1]).unwrap();
        let out = simulate_dense(&rho, &env, 0.3, 0).unwrap();
        assert!(out.matrix().approx_eq(rho.matrix(), 1e-15));
    }

    #[test]
    fn reaches_pauli_target() {
        let q = PauliWeights::new(0.5, 0.3, 0.2).unwrap();
        let rho = DensityOperator::from_bloch([0.6, -0.3, 0.5]).unwrap();
        for n in 1..=4 {
            let env = DenseEngine::default().ghz_env(&q, n).unwrap();
            let out = simulate_dense(&rho, &env, target_eta(n), n).unwrap();
            let expected = pauli_apply(&q, &rho).unwrap();
            assert!(out.matrix().approx_eq(expected.matrix(), 1e-10));
        }
    }

    #[test]
    fn quarter_path_vector_from_dense_oracle() {
        // n = 4, two collisions at eta = pi/8: accumulated angle pi/4.
        let q = PauliWeights::<f64>::universal_not();
        let env = DenseEngine::default().ghz_env(&q, 4).unwrap();
        let rho = DensityOperator::from_bloch([0.0, 0.0, 1.0]).unwrap();
        let dense = simulate_dense(&rho, &env, target_eta(4), 2).unwrap().bloch().unwrap();
        let closed = simulate_closed(&rho, &q, std::f64::consts::FRAC_PI_4).unwrap().bloch().unwrap();
        let third = 1.0 / 3.0;
        for (k, expected) in [-third, third, third].into_iter().enumerate() {
            assert!((dense[k] - expected).abs() < 1e-12);
            assert!((closed[k] - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_excess_steps_and_cap() {
        let q = PauliWeights::<f64>::universal_not();
        let env = DenseEngine::new(3).ghz_env(&q, 2).unwrap();
        let rho = DensityOperator::maximally_mixed(2);
        assert!(simulate_dense(&rho, &env, 0.1, 3).is_err());
        let big = DenseEngine::new(5).ghz_env(&q, 5).unwrap();
        assert!(matches!(DenseEngine::new(4).simulate(&rho, &big, 0.1, 1), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn env_partial_trace_is_untouched_environment_marginal() {
        // The environment marginal after collisions keeps its diagonal.
        let q = PauliWeights::<f64>::new(0.2, 0.3, 0.5).unwrap();
        let omega: ComplexMatrix<f64> = DenseEngine::default().ghz_env(&q, 2).unwrap().dense_omega().unwrap();
        let rho = DensityOperator::from_bloch([0.0, 0.0, 1.0]).unwrap();
        let mut joint = kron(rho.matrix(), &omega);
        apply_collision(&mut joint, &control_unitary(0.3), 2, 3, 2, 0);
        let sys = partial_trace_env(&joint, 2, 9).unwrap();
        assert!((sys.trace().re - 1.0).abs() < 1e-14);
    }
}
