//! Stroboscopic simulation of indivisible qubit channels with collision
//! models over correlated environments.
//!
//! The numerical core is generic over the real scalar type ([`Real`], with
//! `f64` and `f32` implementations). The aliases at the crate root fix the
//! scalar to `f64`, which is what the pinned tolerances are stated for.
//!
//! * [`matlin`]: dense complex linear algebra.
//! * [`channels`]: Pauli, Kraus, affine Bloch and Choi representations.
//! * [`collision`]: dense and closed-form collision engines, plus the
//!   random-unitary generalization.
//! * [`dynamics`]: the continuous family of channels, its time-local
//!   generator, master-equation integration and step-distance analysis.

pub mod bloch;
pub mod channels;
pub mod collision;
pub mod dynamics;
pub mod error;
pub mod matlin;
pub mod random;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type ComplexMatrix = matlin::ComplexMatrix<f64>;
pub type DensityOperator = matlin::DensityOperator<f64>;
pub type PauliWeights = channels::PauliWeights<f64>;
pub type AffineQubitMap = channels::AffineQubitMap<f64>;
pub type KrausChannel = channels::KrausChannel<f64>;
pub type ChoiMatrix = channels::ChoiMatrix<f64>;
pub type Mat4 = bloch::Mat4<f64>;
pub type Mat3 = bloch::Mat3<f64>;
pub type EnvSpec = collision::EnvSpec<f64>;
pub type RandomUnitarySpec = collision::RandomUnitarySpec<f64>;
pub type CollisionConfig = collision::CollisionConfig<f64>;
pub type FamilyParams = dynamics::FamilyParams<f64>;
pub type GeneratorCoeffs = dynamics::GeneratorCoeffs<f64>;
pub type StepBound = dynamics::StepBound<f64>;
pub type Trajectory = dynamics::Trajectory<f64>;

pub type ComplexMatrix32 = matlin::ComplexMatrix<f32>;
pub type DensityOperator32 = matlin::DensityOperator<f32>;
pub type PauliWeights32 = channels::PauliWeights<f32>;
pub type AffineQubitMap32 = channels::AffineQubitMap<f32>;
