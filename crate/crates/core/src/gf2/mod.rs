//! Packed linear algebra over GF(2).
//!
//! Bit order is little-endian everywhere: bit `j` of a vector lives in bit
//! `j % 64` of word `j / 64`, and bit 0 is the first source coordinate. Text
//! forms write bit 0 first, so `"100"` is the vector with only bit 0 set.

mod bitvec;
mod deor;
mod matrix;
mod poly;

pub use bitvec::BitVector;
pub use deor::{deor_matrices, subset_matrix, DeorFamily};
pub use matrix::{read_matrices, write_matrices, BitMatrix};
pub use poly::{find_irreducible, Gf2Poly};

use crate::Result;

/// Parity of the bitwise AND of `x` and `y`.
pub fn inner_product(x: &BitVector, y: &BitVector) -> Result<bool> {
    x.dot(y)
}

/// `A x` over GF(2).
pub fn mat_vec_mul(a: &BitMatrix, x: &BitVector) -> Result<BitVector> {
    a.mul_vec(x)
}

/// GF(2) rank by bitwise Gaussian elimination.
pub fn rank(a: &BitMatrix) -> usize {
    a.rank()
}
