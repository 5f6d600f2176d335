use super::compose::{SeededExtractorSpec, SeededKind};
use super::field::GaloisField;
use crate::error::Error;
use crate::gf2::BitVector;
use crate::Result;

/// Polynomial design with set size `t` over `[t^2]`; see [`weak_design_with`].
pub fn weak_design(m: usize, t: u32, c: usize) -> Result<Vec<Vec<usize>>> {
    weak_design_with(m, t, c, t as usize)
}

/// `m` subsets of `[a·t]`, one per polynomial `p` of degree `< c` over GF(t):
/// `S_p = {(e, p(e)) : e < a}` flattened as `e·t + p(e)`, with evaluation
/// points and values in field-element order.
///
/// Polynomial `i` has the base-`t` digits of `i` as coefficients, constant
/// term first. Two distinct polynomials agree on at most `c - 1` points, which
/// bounds every pairwise intersection.
pub fn weak_design_with(m: usize, t: u32, c: usize, a: usize) -> Result<Vec<Vec<usize>>> {
    let field = GaloisField::new(t)?;
    if m == 0 || c == 0 {
        return Err(Error::param("design needs m >= 1 and c >= 1"));
    }
    if a == 0 || a > t as usize {
        return Err(Error::param(format!("need 1 <= a <= t, got a={a}, t={t}")));
    }
    let capacity = (t as usize).checked_pow(c as u32).unwrap_or(usize::MAX);
    if m > capacity {
        return Err(Error::param(format!("m={m} exceeds t^c={capacity}")));
    }
    let design = (0..m)
        .map(|i| {
            let mut coeffs = Vec::with_capacity(c);
            let mut rest = i;
            for _ in 0..c {
                coeffs.push((rest % t as usize) as u32);
                rest /= t as usize;
            }
            (0..a as u32)
                .map(|e| e as usize * t as usize + field.eval(&coeffs, e) as usize)
                .collect()
        })
        .collect();
    Ok(design)
}

/// Bit of the Reed–Solomon-then-Hadamard encoding of `x` at the position
/// named by `sub_seed`.
///
/// `x` is cut into `w`-bit symbols `c_0, c_1, ..` of GF(2^w) (`w` is the field
/// degree); the first `w` seed bits give the evaluation point `β`, the next
/// `w` bits the Hadamard index `r`, and the output is `<P_x(β), r>` with
/// `P_x(z) = Σ c_j z^j`.
pub fn one_bit_extract(x: &BitVector, sub_seed: &BitVector, field: &GaloisField) -> Result<bool> {
    let symbols = symbols(x, field.degree() as usize)?;
    one_bit_from_symbols(&symbols, sub_seed, field)
}

fn symbols(x: &BitVector, w: usize) -> Result<Vec<u32>> {
    if w == 0 || w > 16 {
        return Err(Error::param("symbol width must be in 1..=16"));
    }
    let count = x.len().div_ceil(w);
    let mut out = vec![0u32; count];
    for i in x.iter_ones() {
        out[i / w] |= 1 << (i % w);
    }
    Ok(out)
}

fn one_bit_from_symbols(symbols: &[u32], sub_seed: &BitVector, field: &GaloisField) -> Result<bool> {
    let w = field.degree() as usize;
    if field.characteristic() != 2 {
        return Err(Error::param("one-bit extractor needs a binary field"));
    }
    if sub_seed.len() < 2 * w {
        return Err(Error::param(format!(
            "sub-seed needs {} bits, got {}",
            2 * w,
            sub_seed.len()
        )));
    }
    let read = |start: usize| (0..w).fold(0u32, |acc, j| acc | (sub_seed.get(start + j) as u32) << j);
    let (beta, r) = (read(0), read(w));
    let value = field.eval(symbols, beta);
    Ok((value & r).count_ones() % 2 == 1)
}

/// Trevisan's extractor: output bit `i` is the one-bit extractor applied to
/// `x` with the seed restricted to the `i`-th design set.
pub fn trevisan_extract(x: &BitVector, seed: &BitVector, spec: &SeededExtractorSpec) -> Result<BitVector> {
    spec.validate()?;
    let params = match (spec.kind, spec.trevisan) {
        (SeededKind::Trevisan, Some(p)) => p,
        _ => return Err(Error::param("spec is not a trevisan extractor")),
    };
    if x.len() != spec.n {
        return Err(Error::param(format!("input must have {} bits, got {}", spec.n, x.len())));
    }
    if seed.len() != spec.d {
        return Err(Error::param(format!("seed must have {} bits, got {}", spec.d, seed.len())));
    }
    let design = weak_design_with(spec.m, params.t, spec.degree_bound(), params.a)?;
    let field = GaloisField::new(1 << params.w)?;
    let symbols = symbols(x, params.w)?;
    let mut out = BitVector::zeros(spec.m);
    for (i, set) in design.iter().enumerate() {
        let bits: Vec<bool> = set.iter().take(2 * params.w).map(|&p| seed.get(p)).collect();
        let sub_seed = BitVector::from_bits(&bits)?;
        if one_bit_from_symbols(&symbols, &sub_seed, &field)? {
            out.set(i, true);
        }
    }
    Ok(out)
}
