//! Two-source randomness extraction with quantum side information.
//!
//! The crate is split into five layers:
//!
//! * [`gf2`]: packed GF(2) vectors and matrices, polynomial arithmetic and the
//!   family of matrices `A_1..A_m` whose non-empty subset sums are all invertible.
//! * [`extractors`]: the inner-product and DEOR two-source extractors, Toeplitz
//!   and Trevisan seeded extractors, and their composition.
//! * [`qsim`]: exact dense density-matrix numerics (trace distance, cq-states,
//!   pretty good measurement, Helstrom) used to certify extractor security.
//! * [`adversaries`]: explicit storage strategies and attacks, including the
//!   entangled SMP protocol for inner product.
//! * [`bounds`]: closed-form parameter calculators.
//!
//! Numerical code in [`qsim`] and [`adversaries`] is generic over the scalar
//! type (`f32` or `f64`, see [`Real`]); the aliases below fix it to `f64`.

pub mod adversaries;
pub mod bounds;
pub mod error;
pub mod extractors;
pub mod gf2;
pub mod qsim;
pub mod scalar;

pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector, Gf2Poly};
pub use scalar::Real;

/// Dense complex matrix in double precision.
pub type CMatrix = qsim::CMatrix<f64>;
/// Validated density matrix in double precision.
pub type DensityMatrix = qsim::DensityMatrix<f64>;
/// Classical-quantum state in double precision.
pub type CqState = qsim::CqState<f64>;
/// POVM in double precision.
pub type Povm = qsim::Povm<f64>;
/// Storage strategy in double precision.
pub type StorageStrategy = adversaries::StorageStrategy<f64>;

/// Single-precision variants, mostly useful for quick sweeps.
pub type CMatrixF32 = qsim::CMatrix<f32>;
pub type DensityMatrixF32 = qsim::DensityMatrix<f32>;
