use serde::{Deserialize, Serialize};

use super::field::prime_power;
use super::toeplitz::toeplitz_extract;
use super::trevisan::trevisan_extract;
use super::two_source::{Deor, TwoSourceExtractor};
use crate::error::Error;
use crate::gf2::BitVector;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeededKind {
    Toeplitz,
    Trevisan,
}

/// Which source feeds the seeded extractor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    X,
    Y,
}

/// Trevisan parameters: design field GF(t), `a` evaluation points per design
/// set (so `d = a·t`), and symbol width `w` of the one-bit extractor, which
/// reads `2w` bits of each sub-seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrevisanParams {
    pub t: u32,
    pub a: usize,
    pub w: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeededExtractorSpec {
    pub kind: SeededKind,
    pub n: usize,
    pub d: usize,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trevisan: Option<TrevisanParams>,
}

impl SeededExtractorSpec {
    pub fn toeplitz(n: usize, m: usize) -> Result<Self> {
        let spec = Self {
            kind: SeededKind::Toeplitz,
            n,
            d: n + m.max(1) - 1,
            m,
            trevisan: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Trevisan extractor with seed length `d`, choosing the smallest prime
    /// power `t` with `d = a·t` and `a <= t`, and `w = min(a/2, 16)`.
    pub fn trevisan(n: usize, d: usize, m: usize) -> Result<Self> {
        let t = (1..=d)
            .filter(|&t| d % t == 0 && d / t <= t && d / t >= 2)
            .find(|&t| prime_power(t as u32).is_some())
            .ok_or_else(|| Error::param(format!("no design field fits seed length {d}")))?;
        let a = d / t;
        Self::trevisan_with(n, m, TrevisanParams { t: t as u32, a, w: (a / 2).min(16) })
    }

    pub fn trevisan_with(n: usize, m: usize, params: TrevisanParams) -> Result<Self> {
        let spec = Self {
            kind: SeededKind::Trevisan,
            n,
            d: params.a * params.t as usize,
            m,
            trevisan: Some(params),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 {
            return Err(Error::param("seeded extractor needs n >= 1 and m >= 1"));
        }
        if self.m > self.d + self.n {
            return Err(Error::param(format!("m={} exceeds d + n = {}", self.m, self.d + self.n)));
        }
        match (self.kind, self.trevisan) {
            (SeededKind::Toeplitz, None) => {
                if self.d != self.n + self.m - 1 {
                    return Err(Error::param(format!(
                        "toeplitz seed length must be n + m - 1 = {}, got {}",
                        self.n + self.m - 1,
                        self.d
                    )));
                }
            }
            (SeededKind::Toeplitz, Some(_)) => {
                return Err(Error::param("toeplitz spec carries trevisan parameters"));
            }
            (SeededKind::Trevisan, None) => return Err(Error::param("trevisan spec lacks parameters")),
            (SeededKind::Trevisan, Some(p)) => {
                if prime_power(p.t).is_none() {
                    return Err(Error::param(format!("t={} is not a prime power", p.t)));
                }
                if p.a == 0 || p.a > p.t as usize {
                    return Err(Error::param(format!("need 1 <= a <= t, got a={}, t={}", p.a, p.t)));
                }
                if self.d != p.a * p.t as usize {
                    return Err(Error::param(format!("trevisan seed length must be a·t, got {}", self.d)));
                }
                if p.w == 0 || p.w > 16 || 2 * p.w > p.a {
                    return Err(Error::param(format!("need 1 <= w <= 16 and 2w <= a, got w={}", p.w)));
                }
            }
        }
        Ok(())
    }

    /// Smallest `c >= 1` with `t^c >= m`, the design's polynomial degree bound.
    pub fn degree_bound(&self) -> usize {
        let Some(p) = self.trevisan else { return 0 };
        let mut c = 1;
        let mut cap = p.t as u128;
        while cap < self.m as u128 {
            cap *= p.t as u128;
            c += 1;
        }
        c
    }

    pub fn extract(&self, x: &BitVector, seed: &BitVector) -> Result<BitVector> {
        match self.kind {
            SeededKind::Toeplitz => {
                self.validate()?;
                if x.len() != self.n {
                    return Err(Error::param(format!("input must have {} bits", self.n)));
                }
                toeplitz_extract(x, seed, self.m)
            }
            SeededKind::Trevisan => trevisan_extract(x, seed, self),
        }
    }
}

/// `E_S(x, E_D(x, y))` (X side) or `E_S(y, E_D(x, y))` (Y side), with `E_D`
/// the DEOR extractor emitting `spec.d` bits.
pub fn compose_two_source(
    x: &BitVector,
    y: &BitVector,
    m: usize,
    which: Side,
    spec: &SeededExtractorSpec,
) -> Result<BitVector> {
    Composed::new(spec.clone(), which)?.check_m(m)?.extract(x, y)
}

#[derive(Clone, Debug)]
pub struct Composed {
    inner: Deor,
    which: Side,
    spec: SeededExtractorSpec,
}

impl Composed {
    pub fn new(spec: SeededExtractorSpec, which: Side) -> Result<Self> {
        spec.validate()?;
        if spec.d > spec.n {
            return Err(Error::param(format!(
                "seed length d={} exceeds the {} bits the inner extractor can emit",
                spec.d, spec.n
            )));
        }
        Ok(Self { inner: Deor::new(spec.n, spec.d)?, which, spec })
    }

    fn check_m(self, m: usize) -> Result<Self> {
        if m != self.spec.m {
            return Err(Error::param(format!("requested m={m}, spec emits {}", self.spec.m)));
        }
        Ok(self)
    }

    pub fn spec(&self) -> &SeededExtractorSpec {
        &self.spec
    }
}

impl TwoSourceExtractor for Composed {
    fn output_len(&self) -> usize {
        self.spec.m
    }

    fn extract(&self, x: &BitVector, y: &BitVector) -> Result<BitVector> {
        let seed = self.inner.extract(x, y)?;
        match self.which {
            Side::X => self.spec.extract(x, &seed),
            Side::Y => self.spec.extract(y, &seed),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extractors::e_deor;

    #[test]
    fn spec_json_round_trip() {
        let spec = SeededExtractorSpec::trevisan(1024, 32, 896).unwrap();
        assert_eq!(spec.trevisan, Some(TrevisanParams { t: 8, a: 4, w: 2 }));
        let text = serde_json::to_string(&spec).unwrap();
        assert!(text.contains("\"kind\":\"trevisan\""));
        let back: SeededExtractorSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
        assert_eq!(spec.degree_bound(), 4);
    }

    #[test]
    fn invariants_enforced() {
        assert!(SeededExtractorSpec::toeplitz(8, 3).unwrap().d == 10);
        let mut bad = SeededExtractorSpec::toeplitz(8, 3).unwrap();
        bad.d = 9;
        assert!(bad.validate().is_err());
        assert!(SeededExtractorSpec::trevisan(8, 7, 3).is_err());
        assert!(SeededExtractorSpec::trevisan_with(8, 3, TrevisanParams { t: 4, a: 4, w: 3 }).is_err());
        assert!(SeededExtractorSpec::trevisan(8, 16, 25).is_err());
    }

    #[test]
    fn zero_input_toeplitz_gives_zero() {
        let spec = SeededExtractorSpec::toeplitz(8, 8).unwrap();
        let spec = SeededExtractorSpec { d: 8, ..spec };
        assert!(compose_two_source(&BitVector::zeros(8), &BitVector::ones(8), 8, Side::X, &spec).is_err());
        let spec = SeededExtractorSpec::toeplitz(16, 1).unwrap();
        let out = compose_two_source(&BitVector::zeros(16), &BitVector::ones(16), 1, Side::X, &spec).unwrap();
        assert!(out.is_zero());
    }

    #[test]
    fn symmetric_inputs_give_equal_sides() {
        let spec = SeededExtractorSpec::trevisan(64, 16, 20).unwrap();
        let x = BitVector::from_u64(0xdead_beef_0bad_f00d, 64);
        let a = compose_two_source(&x, &x, 20, Side::X, &spec).unwrap();
        let b = compose_two_source(&x, &x, 20, Side::Y, &spec).unwrap();
        assert_eq!(a, b);
        let seed = e_deor(&x, &x, 16).unwrap();
        assert_eq!(a, spec.extract(&x, &seed).unwrap());
    }

    #[test]
    fn wrong_m_rejected() {
        let spec = SeededExtractorSpec::trevisan(64, 16, 20).unwrap();
        let x = BitVector::zeros(64);
        assert!(matches!(
            compose_two_source(&x, &x, 21, Side::X, &spec),
            Err(Error::Parameter(_))
        ));
    }
}
