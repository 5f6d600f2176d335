use crate::error::Error;
use crate::gf2::{BitMatrix, BitVector};
use crate::Result;

/// The `m x n` Toeplitz matrix of a seed of length `n + m - 1`.
///
/// Entry `(i, j)` depends only on `i - j`: it is `seed[i - j]` on and below
/// the diagonal and `seed[m - 1 + (j - i)]` above it. Column 0 is therefore
/// `seed[0..m)` and the remaining diagonals read `seed[m..)`.
pub fn toeplitz_matrix(seed: &BitVector, n: usize, m: usize) -> Result<BitMatrix> {
    if n == 0 || m == 0 {
        return Err(Error::param("toeplitz dimensions must be positive"));
    }
    if seed.len() != n + m - 1 {
        return Err(Error::param(format!(
            "toeplitz seed must have {} bits, got {}",
            n + m - 1,
            seed.len()
        )));
    }
    let mut t = BitMatrix::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            let k = if i >= j { i - j } else { m - 1 + (j - i) };
            if seed.get(k) {
                t.set(i, j, true);
            }
        }
    }
    Ok(t)
}

/// `T x` for the Toeplitz matrix `T` of `seed`.
pub fn toeplitz_extract(x: &BitVector, seed: &BitVector, m: usize) -> Result<BitVector> {
    toeplitz_matrix(seed, x.len(), m)?.mul_vec(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        assert!(toeplitz_extract(&bv("1101"), &BitVector::zeros(6), 3).unwrap().is_zero());
        for x in ["1101", "1000", "0110"] {
            let x = bv(x);
            let out = toeplitz_extract(&x, &BitVector::ones(4), 1).unwrap();
            assert_eq!(out.get(0), x.parity());
        }
        let t = toeplitz_matrix(&bv("1000"), 3, 2).unwrap();
        assert_eq!(t.row(0), &bv("100"));
        assert_eq!(t.row(1), &bv("010"));
        assert_eq!(toeplitz_extract(&bv("101"), &bv("1000"), 2).unwrap(), bv("10"));
    }

    #[test]
    fn seed_length_checked() {
        assert!(matches!(
            toeplitz_extract(&bv("101"), &bv("100"), 2),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn diagonals_are_constant() {
        let seed = bv("1101001110");
        let t = toeplitz_matrix(&seed, 7, 4).unwrap();
        for i in 1..4 {
            for j in 1..7 {
                assert_eq!(t.get(i, j), t.get(i - 1, j - 1));
            }
        }
    }

    #[test]
    fn two_universal_exhaustive() {
        let (n, m) = (4, 2);
        let d = n + m - 1;
        let seeds: Vec<BitVector> = (0..1u64 << d).map(|s| BitVector::from_u64(s, d)).collect();
        for a in 0..16u64 {
            for b in a + 1..16 {
                let (x, xp) = (BitVector::from_u64(a, n), BitVector::from_u64(b, n));
                let collisions = seeds
                    .iter()
                    .filter(|s| toeplitz_extract(&x, s, m).unwrap() == toeplitz_extract(&xp, s, m).unwrap())
                    .count();
                // collision probability <= 2^-m
                assert!(collisions << m <= seeds.len(), "x={a}, x'={b}");
            }
        }
    }
}
