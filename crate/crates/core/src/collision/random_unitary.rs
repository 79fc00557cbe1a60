use num_complex::Complex;

use super::dense::{evolve_operator, DenseEngine};
use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::matlin::{ComplexMatrix, DensityOperator, UnitarySpectrum};
use crate::scalar::Real;

/// Random-unitary channel `sum_j q_j V_j rho V_j^dagger` together with the
/// number of collisions `n` used to reach it.
#[derive(Debug, Clone)]
pub struct RandomUnitarySpec<T: Real> {
    dim: usize,
    n: usize,
    terms: Vec<(T, ComplexMatrix<T>)>,
}

impl<T: Real> RandomUnitarySpec<T> {
    pub fn new(dim: usize, n: usize, terms: Vec<(T, ComplexMatrix<T>)>) -> Result<Self> {
        Self::with_unitarity_tol(dim, n, terms, T::validation_tol())
    }

    pub fn with_unitarity_tol(dim: usize, n: usize, terms: Vec<(T, ComplexMatrix<T>)>, tol: T) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpec("n must be at least 1".into()));
        }
        if terms.is_empty() {
            return Err(Error::InvalidSpec("no terms".into()));
        }
        let mut sum = T::zero();
        for (j, (q, v)) in terms.iter().enumerate() {
            if !q.is_finite() || *q < T::zero() {
                return Err(Error::InvalidSpec(format!("term {j}: weight {q} is not a probability")));
            }
            if v.rows() != dim || v.cols() != dim {
                return Err(Error::InvalidSpec(format!("term {j}: V is {}x{}, expected {dim}x{dim}", v.rows(), v.cols())));
            }
            let dev = v.unitarity_deviation();
            if dev > tol {
                return Err(Error::NotUnitary { deviation: dev.to_f64_lossy() });
            }
            sum += *q;
        }
        if (sum - T::one()).abs() > T::validation_tol() {
            return Err(Error::InvalidSpec(format!("weights sum to {sum}")));
        }
        Ok(Self { dim, n, terms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn steps(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(T, ComplexMatrix<T>)] {
        &self.terms
    }

    /// Eigen-structure of every `V_j`, from which roots on any branch follow.
    pub fn spectra(&self) -> Result<Vec<UnitarySpectrum<T>>> {
        self.terms.iter().map(|(_, v)| UnitarySpectrum::of(v)).collect()
    }

    /// Principal `n`-th roots of the `V_j`.
    pub fn roots(&self) -> Result<Vec<ComplexMatrix<T>>> {
        Ok(self.spectra()?.iter().map(|s| s.root(self.n)).collect())
    }

    /// The channel reached after all `n` collisions.
    pub fn target(&self) -> Result<KrausChannel<T>> {
        KrausChannel::random_unitary(&self.terms)
    }
}

/// `sum_j q_j W_j^k rho (W_j^k)^dagger` with `W_j` the principal `n`-th root of `V_j`.
pub fn ru_collision<T: Real>(rho: &DensityOperator<T>, spec: &RandomUnitarySpec<T>, k: usize) -> Result<DensityOperator<T>> {
    ru_collision_with_roots(rho, spec, &spec.roots()?, k)
}

/// As [`ru_collision`] with caller-chosen roots (one per term).
pub fn ru_collision_with_roots<T: Real>(
    rho: &DensityOperator<T>,
    spec: &RandomUnitarySpec<T>,
    roots: &[ComplexMatrix<T>],
    k: usize,
) -> Result<DensityOperator<T>> {
    check_step(spec, k)?;
    if rho.dim() != spec.dim {
        return Err(Error::DimensionMismatch(format!("{}-dim state for a {}-dim spec", rho.dim(), spec.dim)));
    }
    if roots.len() != spec.terms.len() {
        return Err(Error::InvalidArgument("one root per term required".into()));
    }
    let out = spec.terms.iter().zip(roots).fold(ComplexMatrix::zeros(spec.dim, spec.dim), |acc, ((q, _), w)| {
        &acc + &w.powi(k).conjugate(rho.matrix()).scale_real(*q)
    });
    DensityOperator::with_tolerances(out, T::equality_tol(), T::psd_tol())
}

fn check_step<T: Real>(spec: &RandomUnitarySpec<T>, k: usize) -> Result<()> {
    if k > spec.n {
        return Err(Error::InvalidArgument(format!("step {k} exceeds n = {}", spec.n)));
    }
    Ok(())
}

impl DenseEngine {
    /// Full dense model: environment of `n` particles of dimension `m` (one
    /// level per term) in `sum_j q_j |j^n><j^n|`, collisions
    /// `sum_j W_j (x) |j><j|` in system-first order.
    pub fn ru_dense_check<T: Real>(
        &self,
        rho: &DensityOperator<T>,
        spec: &RandomUnitarySpec<T>,
        k: usize,
    ) -> Result<DensityOperator<T>> {
        check_step(spec, k)?;
        if rho.dim() != spec.dim {
            return Err(Error::DimensionMismatch(format!("{}-dim state for a {}-dim spec", rho.dim(), spec.dim)));
        }
        let m = spec.terms.len();
        let n = spec.n;
        let joint = m
            .checked_pow(n as u32)
            .and_then(|e| e.checked_mul(spec.dim))
            .filter(|&j| j <= self.max_joint_dim())
            .ok_or(Error::CapExceeded { particles: n, cap: self.cap })?;
        debug_assert!(joint > 0);

        let roots = spec.roots()?;
        let ds = spec.dim;
        let mut u = ComplexMatrix::zeros(ds * m, ds * m);
        for (j, w) in roots.iter().enumerate() {
            for a in 0..ds {
                for b in 0..ds {
                    u[(a * m + j, b * m + j)] = w[(a, b)];
                }
            }
        }
        let env_dim = m.pow(n as u32);
        let mut omega = ComplexMatrix::zeros(env_dim, env_dim);
        for (j, (q, _)) in spec.terms.iter().enumerate() {
            let idx = (0..n).fold(0, |acc, _| acc * m + j);
            omega[(idx, idx)] = Complex::new(*q, T::zero());
        }
        let out = evolve_operator(rho.matrix(), &omega, &u, ds, m, n, k);
        DensityOperator::with_tolerances(out, T::equality_tol(), T::psd_tol())
    }
}

/// Dense simulation of the random-unitary collision model with the default cap.
pub fn ru_dense_check<T: Real>(rho: &DensityOperator<T>, spec: &RandomUnitarySpec<T>, k: usize) -> Result<DensityOperator<T>> {
    DenseEngine::default().ru_dense_check(rho, spec, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{pauli_apply, PauliWeights};
    use crate::matlin::pauli;
    use crate::random::{random_density, random_unitary, seeded};

    fn pauli_spec(q: [f64; 3], n: usize) -> RandomUnitarySpec<f64> {
        let terms = pauli::all::<f64>().into_iter().zip(q).map(|(s, w)| (w, s)).collect();
        RandomUnitarySpec::new(2, n, terms).unwrap()
    }

    #[test]
    fn endpoints() {
        let spec = pauli_spec([0.5, 0.3, 0.2], 4);
        let rho = DensityOperator::from_bloch([0.1, 0.5, -0.4]).unwrap();
        assert!(ru_collision(&rho, &spec, 0).unwrap().matrix().approx_eq(rho.matrix(), 1e-15));
        let end = ru_collision(&rho, &spec, 4).unwrap();
        let target = pauli_apply(&PauliWeights::new(0.5, 0.3, 0.2).unwrap(), &rho).unwrap();
        assert!(end.matrix().approx_eq(target.matrix(), 1e-12));
        let dense = ru_dense_check(&rho, &spec, 4).unwrap();
        assert!(dense.matrix().approx_eq(target.matrix(), 1e-12));
        assert!(ru_dense_check(&rho, &spec, 0).unwrap().matrix().approx_eq(rho.matrix(), 1e-15));
    }

    #[test]
    fn single_term_is_unitary_channel() {
        let mut rng = seeded(3);
        let v = random_unitary::<f64>(3, &mut rng);
        let spec = RandomUnitarySpec::new(3, 5, vec![(1.0, v)]).unwrap();
        let rho = random_density::<f64>(3, &mut rng);
        let w = spec.roots().unwrap().remove(0);
        for k in 0..=5 {
            let out = ru_collision(&rho, &spec, k).unwrap();
            assert!(out.matrix().approx_eq(&w.powi(k).conjugate(rho.matrix()), 1e-12));
            // purity is preserved by a unitary channel
            assert!((out.purity() - rho.purity()).abs() < 1e-12);
        }
    }

    #[test]
    fn dense_matches_closed_for_qutrit_system() {
        let mut rng = seeded(11);
        let terms = vec![(0.35, random_unitary::<f64>(3, &mut rng)), (0.65, random_unitary::<f64>(3, &mut rng))];
        let spec = RandomUnitarySpec::new(3, 3, terms).unwrap();
        let rho = random_density::<f64>(3, &mut rng);
        for k in 1..=3 {
            let a = ru_collision(&rho, &spec, k).unwrap();
            let b = ru_dense_check(&rho, &spec, k).unwrap();
            assert!(a.matrix().approx_eq(b.matrix(), 1e-10));
        }
    }

    #[test]
    fn spec_validation() {
        let v = pauli::x::<f64>();
        assert!(RandomUnitarySpec::new(2, 0, vec![(1.0, v.clone())]).is_err());
        assert!(RandomUnitarySpec::new(2, 2, vec![(0.4, v.clone())]).is_err());
        assert!(RandomUnitarySpec::new(3, 2, vec![(1.0, v.clone())]).is_err());
        let bad = v.scale_real(1.1);
        assert!(matches!(RandomUnitarySpec::new(2, 2, vec![(1.0, bad)]), Err(Error::NotUnitary { .. })));
        let spec = pauli_spec([0.2, 0.3, 0.5], 2);
        let rho = DensityOperator::maximally_mixed(2);
        assert!(ru_collision(&rho, &spec, 3).is_err());
    }
}
