use crate::channels::PauliWeights;
use crate::error::{Error, Result};
use crate::matlin::{ComplexMatrix, DensityOperator};
use crate::scalar::{cr, Real};

use super::dense::{check_cap, DEFAULT_DENSE_CAP};

/// Initial state of `n` environment qutrits.
#[derive(Debug, Clone)]
pub enum EnvSpec<T: Real> {
    /// `sum_k q_k |k^n><k^n|`, kept symbolic.
    GhzDiagonal { q: PauliWeights<T>, n: usize },
    /// Explicit `3^n`-dimensional density operator.
    Dense { omega: DensityOperator<T>, n: usize },
}

impl<T: Real> EnvSpec<T> {
    /// Wraps an explicit environment state; its dimension must be `3^n`.
    pub fn dense(omega: DensityOperator<T>, n: usize) -> Result<Self> {
        let expected = 3usize.checked_pow(n as u32).ok_or_else(|| Error::InvalidEnv("3^n overflows".into()))?;
        if omega.dim() != expected {
            return Err(Error::InvalidEnv(format!("expected dimension 3^{n} = {expected}, got {}", omega.dim())));
        }
        Ok(Self::Dense { omega, n })
    }

    pub fn particles(&self) -> usize {
        match self {
            Self::GhzDiagonal { n, .. } | Self::Dense { n, .. } => *n,
        }
    }

    /// `<k^n| omega |k^n>` for k = x, y, z.
    pub fn homogeneous_weights(&self) -> [T; 3] {
        match self {
            Self::GhzDiagonal { q, .. } => q.as_array(),
            Self::Dense { omega, n } => [0, 1, 2].map(|k| omega.matrix()[(homogeneous_index(k, *n), homogeneous_index(k, *n))].re),
        }
    }

    /// Whether the targeting condition `<k^n|omega|k^n> = q_k` holds.
    pub fn targets(&self, q: &PauliWeights<T>, tol: T) -> bool {
        let w = self.homogeneous_weights();
        (0..3).all(|k| (w[k] - q.get(k)).abs() <= tol)
    }

    pub(crate) fn dense_omega(&self) -> Result<ComplexMatrix<T>> {
        match self {
            Self::Dense { omega, .. } => Ok(omega.matrix().clone()),
            Self::GhzDiagonal { q, n } => Ok(ghz_matrix(q, *n)),
        }
    }
}

/// Index of the basis string `k k ... k` in the `3^n` environment space.
pub(crate) fn homogeneous_index(k: usize, n: usize) -> usize {
    (0..n).fold(0, |acc, _| acc * 3 + k)
}

fn ghz_matrix<T: Real>(q: &PauliWeights<T>, n: usize) -> ComplexMatrix<T> {
    let dim = 3usize.pow(n as u32);
    let mut m = ComplexMatrix::zeros(dim, dim);
    for k in 0..3 {
        let i = homogeneous_index(k, n);
        m[(i, i)] = m[(i, i)] + cr(q.get(k));
    }
    m
}

/// GHZ-diagonal environment `sum_k q_k |k^n><k^n|` as an explicit state,
/// subject to the default dense cap.
pub fn ghz_env<T: Real>(q: &PauliWeights<T>, n: usize) -> Result<EnvSpec<T>> {
    ghz_env_capped(q, n, DEFAULT_DENSE_CAP)
}

pub(crate) fn ghz_env_capped<T: Real>(q: &PauliWeights<T>, n: usize, cap: usize) -> Result<EnvSpec<T>> {
    check_cap(n, cap)?;
    if n == 0 {
        return Err(Error::InvalidEnv("environment needs at least one particle".into()));
    }
    let omega = DensityOperator::new(ghz_matrix(q, n))?;
    Ok(EnvSpec::Dense { omega, n })
}
