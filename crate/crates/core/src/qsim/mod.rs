//! Exact dense numerics for small quantum systems.
//!
//! Norms follow the half-L1 convention: the trace distance of `A` and `B` is
//! `½ Σ |eig(A − B)|`. Everything is generic over [`Real`](crate::Real).

mod cq;
mod density;
mod eigen;
mod matrix;
mod measure;
pub mod random;

pub use cq::{
    boolean_reduce, character_norm, cq_distance_from_uniform, extractor_output_state, xor_lemma_check, CqEntry,
    CqState, Label, OutputMode, XorLemmaReport,
};
pub use density::{epr_vector, kron_all, pauli, trace_distance, DensityMatrix};
pub use eigen::{hermitian_eigen, hermitian_eigenvalues, trace_norm, HermitianEigen};
pub use matrix::CMatrix;
pub use measure::{
    guess_success, guessing_entropy_bounds, helstrom_advantage, kt_reduction_check, pgm, renner_norm_check,
    GuessingBounds, KtCheck, Povm, PSEUDO_INVERSE_CUTOFF,
};
