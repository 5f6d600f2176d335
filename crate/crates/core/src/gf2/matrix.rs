use std::fmt;

use super::BitVector;
use crate::error::{check_dim, Error};
use crate::Result;

/// Dense GF(2) matrix stored as packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrices have positive shape");
        Self {
            cols,
            rows: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i].set(i, true);
        }
        m
    }

    pub fn from_rows(rows: Vec<BitVector>) -> Result<Self> {
        let cols = rows
            .first()
            .map(BitVector::len)
            .ok_or_else(|| Error::param("matrix needs at least one row"))?;
        for r in &rows {
            check_dim(cols, r.len())?;
        }
        Ok(Self { cols, rows })
    }

    /// Parses rows written as `'0'`/`'1'` strings, column 0 first.
    pub fn from_strs<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|s| s.as_ref().parse())
                .collect::<Result<_>>()?,
        )
    }

    /// Builds the matrix whose column `j` is `columns[j]`.
    pub fn from_columns(columns: &[BitVector]) -> Result<Self> {
        let rows = columns
            .first()
            .map(BitVector::len)
            .ok_or_else(|| Error::param("matrix needs at least one column"))?;
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            check_dim(rows, c.len())?;
            for i in c.iter_ones() {
                m.rows[i].set(j, true);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, bit: bool) {
        self.rows[i].set(j, bit)
    }

    pub fn column(&self, j: usize) -> BitVector {
        let mut c = BitVector::zeros(self.rows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.get(j) {
                c.set(i, true);
            }
        }
        c
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = Self::zeros(self.cols, self.rows());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.iter_ones() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    /// `A x`: bit `i` of the result is `row_i · x`.
    pub fn mul_vec(&self, x: &BitVector) -> Result<BitVector> {
        check_dim(self.cols, x.len())?;
        let mut out = BitVector::zeros(self.rows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.dot(x)? {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    pub fn xor(&self, other: &BitMatrix) -> Result<BitMatrix> {
        check_dim(self.rows(), other.rows())?;
        check_dim(self.cols, other.cols)?;
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.xor(b))
            .collect::<Result<_>>()?;
        Ok(Self {
            cols: self.cols,
            rows,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVector::is_zero)
    }

    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<u64>> = self.rows.iter().map(|r| r.words().to_vec()).collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let (w, bit) = (col / 64, 1u64 << (col % 64));
            let Some(p) = (rank..rows.len()).find(|&i| rows[i][w] & bit != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (i, r) in rows.iter_mut().enumerate() {
                if i != rank && r[w] & bit != 0 {
                    // words below `w` are already zero in the pivot row
                    for (a, b) in r[w..].iter_mut().zip(&pivot[w..]) {
                        *a ^= b;
                    }
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.rows().min(self.cols)
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix {}x{}:\n{self}", self.rows(), self.cols)
    }
}

/// Serializes square matrices of a common size: a header line `"n m"` (side
/// length and matrix count), then each matrix as `n` lines of `'0'`/`'1'`,
/// with a blank line between matrices.
pub fn write_matrices(mats: &[BitMatrix]) -> Result<String> {
    let n = mats
        .first()
        .map(BitMatrix::rows)
        .ok_or_else(|| Error::param("nothing to serialize"))?;
    let mut out = format!("{n} {}\n", mats.len());
    for (k, m) in mats.iter().enumerate() {
        check_dim(n, m.rows())?;
        check_dim(n, m.cols())?;
        if k > 0 {
            out.push('\n');
        }
        out.push_str(&m.to_string());
    }
    Ok(out)
}

/// Inverse of [`write_matrices`].
pub fn read_matrices(text: &str) -> Result<Vec<BitMatrix>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::param("missing header line"))?;
    let nums: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::param(format!("bad header {header:?}"))))
        .collect::<Result<_>>()?;
    let [n, m] = nums[..] else {
        return Err(Error::param(format!("bad header {header:?}")));
    };
    let rows: Vec<&str> = lines.map(str::trim).filter(|l| !l.is_empty()).collect();
    check_dim(n * m, rows.len())?;
    rows.chunks(n)
        .map(|chunk| {
            let mat = BitMatrix::from_strs(chunk)?;
            check_dim(n, mat.cols())?;
            Ok(mat)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mat_vec_examples() {
        let x: BitVector = "101".parse().unwrap();
        assert_eq!(BitMatrix::identity(3).mul_vec(&x).unwrap(), x);
        assert!(BitMatrix::zeros(3, 3).mul_vec(&x).unwrap().is_zero());
        let a = BitMatrix::from_strs(&["110", "011", "111"]).unwrap();
        assert_eq!(a.mul_vec(&x).unwrap().to_string(), "110");
        assert!(BitMatrix::identity(2).mul_vec(&x).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::identity(5).rank(), 5);
        assert_eq!(BitMatrix::zeros(4, 4).rank(), 0);
        assert_eq!(BitMatrix::from_strs(&["10", "10"]).unwrap().rank(), 1);
        assert_eq!(BitMatrix::identity(130).rank(), 130);
    }

    #[test]
    fn columns_round_trip() {
        let a = BitMatrix::from_strs(&["110", "011", "111"]).unwrap();
        let cols: Vec<_> = (0..3).map(|j| a.column(j)).collect();
        assert_eq!(BitMatrix::from_columns(&cols).unwrap(), a);
        assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn text_format() {
        let mats = vec![
            BitMatrix::identity(3),
            BitMatrix::from_strs(&["110", "011", "111"]).unwrap(),
        ];
        let text = write_matrices(&mats).unwrap();
        assert_eq!(text, "3 2\n100\n010\n001\n\n110\n011\n111\n");
        assert_eq!(read_matrices(&text).unwrap(), mats);
        assert!(read_matrices("3 2\n100\n").is_err());
    }
}
