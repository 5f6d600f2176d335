use rand::seq::index;
use rand::Rng;

use crate::error::Error;
use crate::gf2::BitVector;
use crate::Result;

/// Uniform distribution over an explicit support of `n`-bit strings.
///
/// The support is kept sorted and duplicate-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatSource {
    n: usize,
    support: Vec<BitVector>,
}

impl FlatSource {
    pub fn new(n: usize, mut support: Vec<BitVector>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::param("flat source needs a non-empty support"));
        }
        if let Some(bad) = support.iter().find(|v| v.len() != n) {
            return Err(Error::Dimension { expected: n, got: bad.len() });
        }
        support.sort();
        support.dedup();
        Ok(Self { n, support })
    }

    /// Support given as integers, bit `j` of the integer being coordinate `j`.
    pub fn from_u64s(n: usize, values: &[u64]) -> Result<Self> {
        if n > 64 {
            return Err(Error::param("integer supports need n <= 64"));
        }
        if n < 64 && values.iter().any(|&v| v >> n != 0) {
            return Err(Error::param(format!("support value exceeds {n} bits")));
        }
        Self::new(n, values.iter().map(|&v| BitVector::from_u64(v, n)).collect())
    }

    /// All `2^n` strings.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 || n > 24 {
            return Err(Error::param("uniform source needs 1 <= n <= 24"));
        }
        Self::from_u64s(n, &(0..1u64 << n).collect::<Vec<_>>())
    }

    /// A uniformly random support of size `2^k` inside `{0,1}^n`.
    pub fn random<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<Self> {
        if n == 0 || n > 24 || k > n {
            return Err(Error::param(format!("need 1 <= n <= 24 and k <= n, got n={n}, k={k}")));
        }
        let picks = index::sample(rng, 1 << n, 1 << k);
        let values: Vec<u64> = picks.into_iter().map(|v| v as u64).collect();
        Self::from_u64s(n, &values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &[BitVector] {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.support.binary_search(v).is_ok()
    }

    pub fn probability(&self) -> f64 {
        1.0 / self.support.len() as f64
    }

    pub fn min_entropy(&self) -> f64 {
        (self.support.len() as f64).log2()
    }
}
