use std::fmt;
use std::str::FromStr;

use crate::error::{check_dim, Error};
use crate::Result;

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// Fixed-length bit string packed into 64-bit words.
///
/// Unused high bits of the last word are always zero, so word-level
/// comparisons and popcounts never need masking.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    /// All-zero vector of `len` bits.
    ///
    /// Panics if `len == 0`.
    pub fn zeros(len: usize) -> Self {
        assert!(len > 0, "bit vectors have positive length");
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        v.words.iter_mut().for_each(|w| *w = u64::MAX);
        v.mask_tail();
        v
    }

    /// Builds a vector from raw words, clearing any bits past `len`.
    pub fn from_words(len: usize, words: Vec<u64>) -> Result<Self> {
        if len == 0 {
            return Err(Error::param("bit vector length must be positive"));
        }
        check_dim(words_for(len), words.len())?;
        let mut v = Self { len, words };
        v.mask_tail();
        Ok(v)
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::param("bit vector length must be positive"));
        }
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        Ok(v)
    }

    /// Low `len` bits of `value`, bit 0 first. `len` must be at most 64.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= WORD, "from_u64 supports at most 64 bits");
        let mut v = Self::zeros(len);
        v.words[0] = value;
        v.mask_tail();
        v
    }

    /// Packs bytes little-endian: bit `j` of byte `i` becomes bit `8i + j`.
    ///
    /// Only the first `len` bits are used; fails if `bytes` is too short.
    pub fn from_bytes(bytes: &[u8], len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::param("bit vector length must be positive"));
        }
        if bytes.len() * 8 < len {
            return Err(Error::param(format!(
                "need {len} bits but input holds only {}",
                bytes.len() * 8
            )));
        }
        let mut words = vec![0u64; words_for(len)];
        for (i, &b) in bytes.iter().take(len.div_ceil(8)).enumerate() {
            words[i / 8] |= (b as u64) << (8 * (i % 8));
        }
        Self::from_words(len, words)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let nbytes = self.len.div_ceil(8);
        (0..nbytes)
            .map(|i| (self.words[i / 8] >> (8 * (i % 8))) as u8)
            .collect()
    }

    /// Value of the first 64 bits as an integer. Panics for longer vectors.
    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= WORD, "to_u64 supports at most 64 bits");
        self.words[0]
    }

    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false; present for API symmetry with collections.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if bit {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn parity(&self) -> bool {
        self.words.iter().fold(0u64, |acc, w| acc ^ w).count_ones() & 1 == 1
    }

    /// Inner product over GF(2): parity of `self AND other`.
    pub fn dot(&self, other: &BitVector) -> Result<bool> {
        check_dim(self.len, other.len)?;
        let acc = self
            .words
            .iter()
            .zip(&other.words)
            .fold(0u64, |acc, (a, b)| acc ^ (a & b));
        Ok(acc.count_ones() & 1 == 1)
    }

    pub fn xor(&self, other: &BitVector) -> Result<BitVector> {
        let mut out = self.clone();
        out.xor_assign(other)?;
        Ok(out)
    }

    pub fn xor_assign(&mut self, other: &BitVector) -> Result<()> {
        check_dim(self.len, other.len)?;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }

    pub fn and(&self, other: &BitVector) -> Result<BitVector> {
        check_dim(self.len, other.len)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & b)
            .collect();
        Ok(Self {
            len: self.len,
            words,
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + t)
            })
        })
    }

    /// Bits `start..start + len` as a new vector.
    pub fn slice(&self, start: usize, len: usize) -> Result<BitVector> {
        if len == 0 || start + len > self.len {
            return Err(Error::param(format!(
                "slice {start}..{} out of range {}",
                start + len,
                self.len
            )));
        }
        let mut out = Self::zeros(len);
        for i in 0..len {
            if self.get(start + i) {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut out = Self::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }

    /// Copy resized to `len` bits: truncated, or zero-padded at the end.
    pub fn resized(&self, len: usize) -> BitVector {
        let mut out = Self::zeros(len);
        let keep = words_for(len.min(self.len));
        out.words[..keep].copy_from_slice(&self.words[..keep]);
        out.mask_tail();
        out
    }

    /// Multiplies by `x` in GF(2)[x]/(x^len + tail): shift up one position,
    /// folding the overflow bit back in via `tail` (the modulus without its
    /// leading term).
    pub(crate) fn shift_up_reduce(&mut self, tail: &BitVector) {
        debug_assert_eq!(tail.len, self.len);
        let top = self.get(self.len - 1);
        let mut carry = 0u64;
        for w in self.words.iter_mut() {
            let next = *w >> 63;
            *w = (*w << 1) | carry;
            carry = next;
        }
        self.mask_tail();
        if top {
            for (a, b) in self.words.iter_mut().zip(&tail.words) {
                *a ^= b;
            }
        }
    }

    fn mask_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    /// Parses `'0'`/`'1'` characters, first character is bit 0.
    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::param(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(&bits)
    }
}
