use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use super::{find_irreducible, BitMatrix, BitVector, Gf2Poly};
use crate::error::{check_dim, Error};
use crate::Result;

/// Matrices `A_1..A_m` of multiplication by `1, α, .., α^(m-1)` in
/// GF(2^n) = GF(2)[x]/(f), with `f = find_irreducible(n)`.
///
/// Any non-empty subset sum is multiplication by a non-zero field element,
/// hence invertible. The family never materializes the matrices unless asked:
/// `A_i x` is computed by repeated multiplication by `α`.
#[derive(Clone, Debug)]
pub struct DeorFamily {
    n: usize,
    m: usize,
    modulus: Gf2Poly,
    tail: BitVector,
}

impl DeorFamily {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("n must be positive"));
        }
        if m == 0 || m > n {
            return Err(Error::param(format!("need 1 <= m <= n, got m={m}, n={n}")));
        }
        let modulus = cached_irreducible(n);
        let tail = if n == 1 {
            BitVector::zeros(1)
        } else {
            modulus.tail_vector()?
        };
        Ok(Self { n, m, modulus, tail })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> &Gf2Poly {
        &self.modulus
    }

    /// Multiplies a field element (coefficient vector) by `α`.
    pub fn mul_alpha(&self, z: &mut BitVector) {
        z.shift_up_reduce(&self.tail);
    }

    /// `A_i` for `i` in `1..=m`; column `j` is `α^(i-1+j)`.
    pub fn matrix(&self, i: usize) -> BitMatrix {
        assert!((1..=self.m).contains(&i), "matrix index out of range");
        let mut z = BitVector::zeros(self.n);
        z.set(0, true);
        for _ in 1..i {
            self.mul_alpha(&mut z);
        }
        let mut columns = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            columns.push(z.clone());
            self.mul_alpha(&mut z);
        }
        BitMatrix::from_columns(&columns).expect("columns share length n")
    }

    pub fn matrices(&self) -> Vec<BitMatrix> {
        let mut powers = Vec::with_capacity(self.n + self.m - 1);
        let mut z = BitVector::zeros(self.n);
        z.set(0, true);
        for _ in 0..self.n + self.m - 1 {
            powers.push(z.clone());
            self.mul_alpha(&mut z);
        }
        (0..self.m)
            .map(|i| BitMatrix::from_columns(&powers[i..i + self.n]).expect("columns share length n"))
            .collect()
    }

    /// The bits `A_1 x · y, .., A_m x · y`.
    pub fn apply(&self, x: &BitVector, y: &BitVector) -> Result<BitVector> {
        check_dim(self.n, x.len())?;
        check_dim(self.n, y.len())?;
        let mut out = BitVector::zeros(self.m);
        let mut z = x.clone();
        for i in 0..self.m {
            if z.dot(y)? {
                out.set(i, true);
            }
            if i + 1 < self.m {
                self.mul_alpha(&mut z);
            }
        }
        Ok(out)
    }
}

fn cached_irreducible(n: usize) -> Gf2Poly {
    static CACHE: OnceLock<Mutex<HashMap<usize, Gf2Poly>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(f) = cache.lock().expect("cache lock").get(&n) {
        return f.clone();
    }
    let f = find_irreducible(n);
    cache.lock().expect("cache lock").insert(n, f.clone());
    f
}

/// Explicit matrices `A_1..A_m` for GF(2^n).
pub fn deor_matrices(n: usize, m: usize) -> Result<Vec<BitMatrix>> {
    Ok(DeorFamily::new(n, m)?.matrices())
}

/// XOR of the matrices selected by the non-zero mask `s` (bit `i` selects
/// `mats[i]`).
pub fn subset_matrix(mats: &[BitMatrix], s: &BitVector) -> Result<BitMatrix> {
    check_dim(mats.len(), s.len())?;
    let mut chosen = s.iter_ones();
    let first = chosen
        .next()
        .ok_or_else(|| Error::param("subset must be non-empty"))?;
    let mut acc = mats[first].clone();
    for i in chosen {
        acc = acc.xor(&mats[i])?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    /// Dense elimination on `Vec<Vec<bool>>`, independent of the packed rank.
    fn naive_rank(a: &BitMatrix) -> usize {
        let mut m: Vec<Vec<bool>> = (0..a.rows())
            .map(|i| (0..a.cols()).map(|j| a.get(i, j)).collect())
            .collect();
        let mut r = 0;
        for c in 0..a.cols() {
            let Some(p) = (r..m.len()).find(|&i| m[i][c]) else {
                continue;
            };
            m.swap(r, p);
            for i in 0..m.len() {
                if i != r && m[i][c] {
                    let pivot = m[r].clone();
                    for (x, y) in m[i].iter_mut().zip(pivot) {
                        *x ^= y;
                    }
                }
            }
            r += 1;
        }
        r
    }

    #[test]
    fn first_matrix_is_identity() {
        assert_eq!(deor_matrices(3, 1).unwrap(), vec![BitMatrix::identity(3)]);
    }

    #[test]
    fn multiplication_by_alpha_mod_x3_x_1() {
        let mats = deor_matrices(3, 2).unwrap();
        let a = &mats[1];
        assert_eq!(a.column(0), bv("010"));
        assert_eq!(a.column(1), bv("001"));
        assert_eq!(a.column(2), bv("110"));
        assert!(a.mul_vec(&bv("100")).unwrap().dot(&bv("010")).unwrap());
    }

    #[test]
    fn m_above_n_rejected() {
        assert!(matches!(deor_matrices(3, 4), Err(Error::Parameter(_))));
        assert!(matches!(deor_matrices(3, 0), Err(Error::Parameter(_))));
    }

    #[test]
    fn subset_examples() {
        let mats = deor_matrices(3, 2).unwrap();
        assert_eq!(subset_matrix(&mats, &bv("10")).unwrap(), mats[0]);
        assert!(subset_matrix(&mats, &bv("11")).unwrap().is_full_rank());
        let twice = vec![mats[1].clone(), mats[1].clone()];
        assert!(subset_matrix(&twice, &bv("11")).unwrap().is_zero());
        assert!(matches!(
            subset_matrix(&mats, &bv("00")),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn all_subsets_full_rank_small_n() {
        for n in 1..=7 {
            let mats = deor_matrices(n, n).unwrap();
            for s in 1u64..(1 << n) {
                let a = subset_matrix(&mats, &BitVector::from_u64(s, n)).unwrap();
                assert_eq!(naive_rank(&a), n, "n={n}, S={s:b}");
            }
        }
    }

    #[test]
    fn apply_matches_explicit_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [5, 17, 64, 70] {
            let fam = DeorFamily::new(n, n.min(9)).unwrap();
            let mats = fam.matrices();
            assert_eq!(fam.matrix(fam.m()), mats[fam.m() - 1]);
            for _ in 0..10 {
                let x = BitVector::from_bits(&(0..n).map(|_| rng.gen()).collect::<Vec<_>>()).unwrap();
                let y = BitVector::from_bits(&(0..n).map(|_| rng.gen()).collect::<Vec<_>>()).unwrap();
                let out = fam.apply(&x, &y).unwrap();
                for (i, a) in mats.iter().enumerate() {
                    assert_eq!(out.get(i), a.mul_vec(&x).unwrap().dot(&y).unwrap());
                }
            }
        }
    }

    #[test]
    fn packed_rank_matches_naive_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let r = rng.gen_range(1..=16);
            let c = rng.gen_range(1..=16);
            let density = rng.gen_range(0.05..0.95);
            let rows = (0..r)
                .map(|_| BitVector::from_bits(&(0..c).map(|_| rng.gen_bool(density)).collect::<Vec<_>>()).unwrap())
                .collect();
            let a = BitMatrix::from_rows(rows).unwrap();
            assert_eq!(a.rank(), naive_rank(&a));
        }
    }
}
