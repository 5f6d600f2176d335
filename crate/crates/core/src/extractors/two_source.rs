use crate::error::{check_dim, Error};
use crate::gf2::{BitMatrix, BitVector, DeorFamily};
use crate::Result;

/// A deterministic function `{0,1}^n x {0,1}^n -> {0,1}^m`.
pub trait TwoSourceExtractor: Send + Sync {
    fn output_len(&self) -> usize;

    fn extract(&self, x: &BitVector, y: &BitVector) -> Result<BitVector>;
}

/// `x · y`.
pub fn e_ip(x: &BitVector, y: &BitVector) -> Result<bool> {
    x.dot(y)
}

/// `Ax · y`. Full rank of `A` is checked by [`InnerProduct::with_matrix`],
/// not here.
pub fn e_ip_a(a: &BitMatrix, x: &BitVector, y: &BitVector) -> Result<bool> {
    check_dim(a.rows(), a.cols())?;
    check_dim(a.rows(), y.len())?;
    a.mul_vec(x)?.dot(y)
}

/// The DEOR extractor: bit `i` is `A_(i+1) x · y`.
pub fn e_deor(x: &BitVector, y: &BitVector, m: usize) -> Result<BitVector> {
    check_dim(x.len(), y.len())?;
    DeorFamily::new(x.len(), m)?.apply(x, y)
}

/// One-bit extractor `Ax · y`, with `A = I` by default.
#[derive(Clone, Debug, Default)]
pub struct InnerProduct {
    matrix: Option<BitMatrix>,
}

impl InnerProduct {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_matrix(a: BitMatrix) -> Result<Self> {
        check_dim(a.rows(), a.cols())?;
        if !a.is_full_rank() {
            return Err(Error::param("inner-product matrix must have full rank"));
        }
        Ok(Self { matrix: Some(a) })
    }
}

impl TwoSourceExtractor for InnerProduct {
    fn output_len(&self) -> usize {
        1
    }

    fn extract(&self, x: &BitVector, y: &BitVector) -> Result<BitVector> {
        let bit = match &self.matrix {
            Some(a) => e_ip_a(a, x, y)?,
            None => e_ip(x, y)?,
        };
        Ok(BitVector::from_bits(&[bit]).expect("one bit"))
    }
}

/// [`e_deor`] with the field modulus resolved once.
#[derive(Clone, Debug)]
pub struct Deor {
    family: DeorFamily,
}

impl Deor {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        Ok(Self { family: DeorFamily::new(n, m)? })
    }

    pub fn family(&self) -> &DeorFamily {
        &self.family
    }
}

impl TwoSourceExtractor for Deor {
    fn output_len(&self) -> usize {
        self.family.m()
    }

    fn extract(&self, x: &BitVector, y: &BitVector) -> Result<BitVector> {
        self.family.apply(x, y)
    }
}

/// Wraps a closure as an extractor.
pub struct FnExtractor<F> {
    m: usize,
    f: F,
}

impl<F> FnExtractor<F>
where
    F: Fn(&BitVector, &BitVector) -> Result<BitVector> + Send + Sync,
{
    pub fn new(m: usize, f: F) -> Self {
        Self { m, f }
    }
}

impl<F> TwoSourceExtractor for FnExtractor<F>
where
    F: Fn(&BitVector, &BitVector) -> Result<BitVector> + Send + Sync,
{
    fn output_len(&self) -> usize {
        self.m
    }

    fn extract(&self, x: &BitVector, y: &BitVector) -> Result<BitVector> {
        let out = (self.f)(x, y)?;
        check_dim(self.m, out.len())?;
        Ok(out)
    }
}
