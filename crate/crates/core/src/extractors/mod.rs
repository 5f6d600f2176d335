//! Two-source and seeded extractors.
//!
//! All extractors are deterministic functions of packed bit vectors. The
//! two-source ones implement [`TwoSourceExtractor`] so the quantum verifier can
//! evaluate any of them against a storage strategy.

mod compose;
mod field;
mod source;
mod toeplitz;
mod trevisan;
mod two_source;

pub use compose::{compose_two_source, Composed, SeededExtractorSpec, SeededKind, Side, TrevisanParams};
pub use field::GaloisField;
pub use source::FlatSource;
pub use toeplitz::{toeplitz_extract, toeplitz_matrix};
pub use trevisan::{one_bit_extract, trevisan_extract, weak_design, weak_design_with};
pub use two_source::{e_deor, e_ip, e_ip_a, Deor, FnExtractor, InnerProduct, TwoSourceExtractor};
