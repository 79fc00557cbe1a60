//! Collision-model engines.
//!
//! A qubit collides once with each of `n` environment qutrits through the
//! controlled interaction `U_eta = sum_k exp(i eta sigma_k) (x) |k><k|`.
//! With the GHZ-diagonal environment `sum_k q_k |k^n><k^n|` and
//! `eta = pi / (2n)`, the `n`-step channel is the Pauli channel with weights
//! `q`. Tensor ordering is system first, environment second; environment
//! labels map x -> 0, y -> 1, z -> 2.

mod closed;
mod dense;
mod env;
mod random_unitary;

pub use closed::simulate_closed;
pub(crate) use closed::closed_map;
pub use dense::{apply_collision, simulate_dense, DenseEngine, DEFAULT_DENSE_CAP};
pub use env::{ghz_env, EnvSpec};
pub use random_unitary::{ru_collision, ru_collision_with_roots, ru_dense_check, RandomUnitarySpec};

use num_complex::Complex;

use crate::channels::{affine_of, AffineQubitMap, PauliWeights};
use crate::error::{Error, Result};
use crate::matlin::{herm_unitary_exp, kron, pauli, ComplexMatrix, DensityOperator};
use crate::scalar::Real;

/// The controlled interaction `C = sum_k sigma_k (x) |k><k|` on qubit (x) qutrit.
pub fn control_operator<T: Real>() -> ComplexMatrix<T> {
    pauli::all::<T>().iter().enumerate().fold(ComplexMatrix::zeros(6, 6), |acc, (k, s)| {
        let mut proj = ComplexMatrix::zeros(3, 3);
        proj[(k, k)] = Complex::new(T::one(), T::zero());
        &acc + &kron(s, &proj)
    })
}

/// `exp(i eta C)`, block-diagonal in the control basis with blocks `exp(i eta sigma_k)`.
pub fn control_unitary<T: Real>(eta: T) -> ComplexMatrix<T> {
    herm_unitary_exp(&control_operator(), eta).expect("C is Hermitian and unitary")
}

/// Interaction strength that reaches the target channel after `n` collisions.
pub fn target_eta<T: Real>(n: usize) -> T {
    T::FRAC_PI_2() / T::from_usize(n).unwrap()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    /// Full system (x) environment evolution.
    Dense,
    /// Closed-form collision channel.
    Fast,
}

#[derive(Debug, Clone, Copy)]
pub struct CollisionConfig<T: Real> {
    pub eta: T,
    pub n: usize,
    pub backend: Backend,
    pub dense_cap: usize,
}

impl<T: Real> CollisionConfig<T> {
    /// Configuration that simulates the target channel in `n` steps.
    pub fn target(n: usize, backend: Backend) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("collision count must be at least 1".into()));
        }
        Ok(Self { eta: target_eta(n), n, backend, dense_cap: DEFAULT_DENSE_CAP })
    }

    pub fn with_eta(mut self, eta: T) -> Self {
        self.eta = eta;
        self
    }

    pub fn with_dense_cap(mut self, cap: usize) -> Self {
        self.dense_cap = cap;
        self
    }

    /// State after `steps` collisions with the GHZ-diagonal environment for `q`.
    pub fn simulate(&self, rho: &DensityOperator<T>, q: &PauliWeights<T>, steps: usize) -> Result<DensityOperator<T>> {
        if steps > self.n {
            return Err(Error::InvalidArgument(format!("{steps} steps requested with only {} particles", self.n)));
        }
        match self.backend {
            Backend::Fast => simulate_closed(rho, q, self.eta * T::from_usize(steps).unwrap()),
            Backend::Dense => {
                let engine = DenseEngine::new(self.dense_cap);
                let env = engine.ghz_env(q, self.n)?;
                engine.simulate(rho, &env, self.eta, steps)
            }
        }
    }

    /// Affine map of the `steps`-collision channel.
    pub fn channel(&self, q: &PauliWeights<T>, steps: usize) -> Result<AffineQubitMap<T>> {
        if steps > self.n {
            return Err(Error::InvalidArgument(format!("{steps} steps requested with only {} particles", self.n)));
        }
        match self.backend {
            Backend::Fast => {
                let theta = self.eta * T::from_usize(steps).unwrap();
                affine_of(|m| closed::closed_map(q, theta, m))
            }
            Backend::Dense => {
                let engine = DenseEngine::new(self.dense_cap);
                let env = engine.ghz_env(q, self.n)?;
                let omega = env.dense_omega()?;
                let u = control_unitary(self.eta);
                affine_of(|m| dense::evolve_operator(m, &omega, &u, 2, 3, self.n, steps))
            }
        }
    }
}
