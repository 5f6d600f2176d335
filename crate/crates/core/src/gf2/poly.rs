use std::fmt;

use super::BitVector;
use crate::error::Error;
use crate::Result;

/// Polynomial over GF(2); bit `i` of the packed words is the coefficient of `x^i`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gf2Poly {
    words: Vec<u64>,
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    pub fn monomial(k: usize) -> Self {
        let mut words = vec![0u64; k / 64 + 1];
        words[k / 64] = 1 << (k % 64);
        Self { words }
    }

    pub fn from_words(words: Vec<u64>) -> Self {
        let mut p = Self { words };
        p.normalize();
        p
    }

    /// `x^degree + tail`, where `tail` holds the lower coefficients.
    pub fn with_tail(degree: usize, tail: &[u64]) -> Self {
        let mut p = Self::monomial(degree);
        for (a, b) in p.words.iter_mut().zip(tail) {
            *a ^= b;
        }
        p.words[degree / 64] |= 1 << (degree % 64);
        p.normalize();
        p
    }

    /// Parses coefficients written highest degree first, e.g. `"1011"` is
    /// `x^3 + x + 1`.
    pub fn from_coeff_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut words = vec![0u64; s.len() / 64 + 1];
        for (i, c) in s.chars().rev().enumerate() {
            match c {
                '0' => {}
                '1' => words[i / 64] |= 1 << (i % 64),
                other => return Err(Error::param(format!("invalid coefficient {other:?}"))),
            }
        }
        Ok(Self::from_words(words))
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - last.leading_zeros() as usize)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    /// Lower `degree()` coefficients as a bit vector of that length, i.e. the
    /// modulus without its leading term.
    pub fn tail_vector(&self) -> Result<BitVector> {
        let n = self
            .degree()
            .filter(|&d| d > 0)
            .ok_or_else(|| Error::param("tail needs a polynomial of positive degree"))?;
        let mut words = self.words.clone();
        words.resize(n.div_ceil(64), 0);
        BitVector::from_words(n, words)
    }

    pub fn add(&self, other: &Gf2Poly) -> Gf2Poly {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (a, b) in words.iter_mut().zip(&short.words) {
            *a ^= b;
        }
        Self::from_words(words)
    }

    pub fn mul(&self, other: &Gf2Poly) -> Gf2Poly {
        let Some(db) = other.degree() else {
            return Self::zero();
        };
        let Some(da) = self.degree() else {
            return Self::zero();
        };
        let mut out = vec![0u64; (da + db) / 64 + 1];
        for j in (0..=db).filter(|&j| other.coeff(j)) {
            xor_shifted(&mut out, &self.words, j);
        }
        Self::from_words(out)
    }

    pub fn square(&self) -> Gf2Poly {
        let mut out = vec![0u64; self.words.len() * 2];
        for (i, &w) in self.words.iter().enumerate() {
            out[2 * i] = spread(w as u32);
            out[2 * i + 1] = spread((w >> 32) as u32);
        }
        Self::from_words(out)
    }

    /// Remainder of division by `m` (schoolbook long division).
    pub fn rem(&self, m: &Gf2Poly) -> Gf2Poly {
        let dm = m.degree().expect("division by the zero polynomial");
        let mut r = self.words.clone();
        while let Some(dr) = degree_of(&r) {
            if dr < dm {
                break;
            }
            xor_shifted(&mut r, &m.words, dr - dm);
        }
        Self::from_words(r)
    }

    pub fn gcd(&self, other: &Gf2Poly) -> Gf2Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    /// Rabin's irreducibility test: `f` of degree `n` is irreducible iff
    /// `x^(2^n) = x (mod f)` and `gcd(x^(2^(n/p)) - x, f) = 1` for each prime
    /// `p` dividing `n`.
    pub fn is_irreducible(&self) -> bool {
        let Some(n) = self.degree() else {
            return false;
        };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        if !self.coeff(0) {
            return false;
        }
        let reducer = Reducer::new(self);
        let divisors: Vec<usize> = prime_factors(n).into_iter().map(|p| n / p).collect();
        let x = Gf2Poly::monomial(1);
        let mut h = x.clone();
        for k in 1..=n {
            h = reducer.reduce(h.square());
            if divisors.contains(&k) && !h.add(&x).gcd(self).degree().is_some_and(|d| d == 0) {
                return false;
            }
        }
        h == x
    }
}

impl fmt::Display for Gf2Poly {
    /// Coefficients highest degree first; the zero polynomial prints `"0"`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.degree() {
            None => f.write_str("0"),
            Some(d) => {
                for i in (0..=d).rev() {
                    f.write_str(if self.coeff(i) { "1" } else { "0" })?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Poly({self})")
    }
}

impl Gf2Poly {
    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }
}

/// Reduction modulo `f = x^n + g` by folding the part above degree `n` back
/// through `g`. Fast when `g` is sparse, which holds for the moduli returned
/// by [`find_irreducible`].
struct Reducer {
    n: usize,
    tail_bits: Vec<usize>,
}

impl Reducer {
    fn new(f: &Gf2Poly) -> Self {
        let n = f.degree().expect("nonzero modulus");
        let tail_bits = (0..n).filter(|&i| f.coeff(i)).collect();
        Self { n, tail_bits }
    }

    fn reduce(&self, a: Gf2Poly) -> Gf2Poly {
        let n = self.n;
        let mut words = a.words;
        loop {
            let Some(d) = degree_of(&words) else { break };
            if d < n {
                break;
            }
            let high = shr_words(&words, n);
            truncate_to(&mut words, n);
            for &j in &self.tail_bits {
                xor_shifted(&mut words, &high, j);
            }
        }
        Gf2Poly::from_words(words)
    }
}

/// Monic irreducible polynomial of degree `n` over GF(2), lexicographically
/// smallest when coefficients are read highest degree first.
///
/// Candidates `x^n + c` are scanned in increasing `c`; a sieve by small
/// irreducible factors discards most of them before the full Rabin test.
pub fn find_irreducible(n: usize) -> Gf2Poly {
    assert!(n >= 1, "degree must be positive");
    if n == 1 {
        return Gf2Poly::monomial(1);
    }
    let sieve: Vec<(u32, u32)> = small_irreducibles(10.min(n / 2))
        .into_iter()
        .map(|p| (p, xpow_mod_small(n, p)))
        .collect();
    let limit = if n >= 64 { u64::MAX } else { 1u64 << n };
    let mut c = 1u64;
    while c < limit {
        // constant term 1 (no root at 0) and an odd number of terms (no root at 1)
        if c.count_ones() % 2 == 0 && sieve.iter().all(|&(p, r)| rem_small(c, p) != r) {
            let f = Gf2Poly::with_tail(n, &[c]);
            if f.is_irreducible() {
                return f;
            }
        }
        c += 2;
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

fn small_irreducibles(max_degree: usize) -> Vec<u32> {
    (2..=max_degree)
        .flat_map(|d| (1u32 << d)..(1u32 << (d + 1)))
        .filter(|&p| Gf2Poly::from_words(vec![p as u64]).is_irreducible())
        .collect()
}

fn degree_small(p: u64) -> u32 {
    63 - p.leading_zeros()
}

fn rem_small(mut a: u64, p: u32) -> u32 {
    let dp = degree_small(p as u64);
    while a != 0 && degree_small(a) >= dp {
        a ^= (p as u64) << (degree_small(a) - dp);
    }
    a as u32
}

fn mulmod_small(a: u32, b: u32, p: u32) -> u32 {
    let mut acc = 0u64;
    for j in 0..32 {
        if (b >> j) & 1 == 1 {
            acc ^= (a as u64) << j;
        }
    }
    rem_small(acc, p)
}

fn xpow_mod_small(mut e: usize, p: u32) -> u32 {
    let mut base = rem_small(2, p);
    let mut acc = 1u32;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod_small(acc, base, p);
        }
        base = mulmod_small(base, base, p);
        e >>= 1;
    }
    acc
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn degree_of(words: &[u64]) -> Option<usize> {
    let (i, w) = words.iter().enumerate().rev().find(|(_, &w)| w != 0)?;
    Some(i * 64 + 63 - w.leading_zeros() as usize)
}

fn xor_shifted(dst: &mut Vec<u64>, src: &[u64], shift: usize) {
    let (ws, bs) = (shift / 64, shift % 64);
    let need = src.len() + ws + 1;
    if dst.len() < need {
        dst.resize(need, 0);
    }
    for (i, &w) in src.iter().enumerate() {
        if w == 0 {
            continue;
        }
        dst[i + ws] ^= w << bs;
        if bs != 0 {
            dst[i + ws + 1] ^= w >> (64 - bs);
        }
    }
}

fn shr_words(words: &[u64], shift: usize) -> Vec<u64> {
    let (ws, bs) = (shift / 64, shift % 64);
    if ws >= words.len() {
        return Vec::new();
    }
    let src = &words[ws..];
    (0..src.len())
        .map(|i| {
            let lo = src[i] >> bs;
            let hi = if bs != 0 {
                src.get(i + 1).map_or(0, |w| w << (64 - bs))
            } else {
                0
            };
            lo | hi
        })
        .collect()
}

fn truncate_to(words: &mut Vec<u64>, bits: usize) {
    words.truncate(bits.div_ceil(64));
    if bits % 64 != 0 {
        if let Some(last) = words.get_mut(bits / 64) {
            *last &= (1u64 << (bits % 64)) - 1;
        }
    }
}

/// Interleaves zeros between the bits of `x` (squaring over GF(2)).
fn spread(x: u32) -> u64 {
    let mut x = x as u64;
    x = (x | (x << 16)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x << 8)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x << 4)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    x = (x | (x << 1)) & 0x5555_5555_5555_5555;
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Gf2Poly {
        Gf2Poly::from_coeff_str(s).unwrap()
    }

    /// Irreducible iff no root-free factorization exists: brute force over
    /// all products of two lower-degree polynomials.
    fn irreducible_brute(f: u64) -> bool {
        let d = degree_small(f);
        for a in 2u64..(1 << d) {
            for b in 2u64..(1 << d) {
                let prod = Gf2Poly::from_words(vec![a]).mul(&Gf2Poly::from_words(vec![b]));
                if prod.words() == [f] {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn lowest_irreducibles() {
        assert_eq!(find_irreducible(1).to_string(), "10");
        assert_eq!(find_irreducible(2).to_string(), "111");
        assert_eq!(find_irreducible(3).to_string(), "1011");
        assert_eq!(find_irreducible(4).to_string(), "10011");
        assert_eq!(find_irreducible(8).to_string(), "100011011");
    }

    #[test]
    fn rabin_matches_brute_force() {
        for f in 4u64..256 {
            assert_eq!(
                Gf2Poly::from_words(vec![f]).is_irreducible(),
                irreducible_brute(f),
                "f = {f:b}"
            );
        }
    }

    #[test]
    fn find_irreducible_is_lexicographically_lowest() {
        for n in 2..=9 {
            let f = find_irreducible(n);
            let first = (1u64 << n..1u64 << (n + 1))
                .find(|&c| irreducible_brute(c))
                .unwrap();
            assert_eq!(f.words(), [first], "degree {n}");
        }
    }

    #[test]
    fn large_degrees_are_irreducible() {
        for n in [63, 64, 65, 127, 128, 200] {
            let f = find_irreducible(n);
            assert_eq!(f.degree(), Some(n));
            assert!(f.is_irreducible());
        }
    }

    #[test]
    fn arithmetic_basics() {
        assert_eq!(p("11").mul(&p("11")), p("101"));
        assert_eq!(p("11").square(), p("101"));
        assert_eq!(p("1000").rem(&p("1011")), p("11"));
        assert_eq!(p("110").gcd(&p("1010")), p("110"));
        assert_eq!(p("1011").tail_vector().unwrap().to_string(), "110");
        assert_eq!(Gf2Poly::zero().to_string(), "0");
    }

    #[test]
    fn reducer_agrees_with_long_division() {
        let f = find_irreducible(70);
        let r = Reducer::new(&f);
        let a = Gf2Poly::from_words(vec![0xdead_beef_1234_5678, 0x9abc_def0, 0x77]);
        assert_eq!(r.reduce(a.clone()), a.rem(&f));
        let dense = p("1111111101");
        let a = p("110101011101011101011");
        assert_eq!(Reducer::new(&dense).reduce(a.clone()), a.rem(&dense));
    }
}
