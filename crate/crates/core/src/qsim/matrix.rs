use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;

use crate::error::{check_dim, Error};
use crate::scalar::Real;
use crate::Result;

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex::new(T::zero(), T::zero()); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        check_dim(rows * cols, data.len())?;
        Ok(Self { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        check_dim(rows * cols, data.len())?;
        let data = data.iter().map(|&v| Complex::new(T::lit(v), T::zero())).collect();
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn diag(values: &[T]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex::new(v, T::zero());
        }
        m
    }

    /// `|v><w|`.
    pub fn outer(v: &[Complex<T>], w: &[Complex<T>]) -> Self {
        Self::from_fn(v.len(), w.len(), |i, j| v[i] * w[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: T) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn scale_complex(&self, s: Complex<T>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * s).collect() }
    }

    /// Adds `s · other` in place.
    pub fn add_scaled(&mut self, other: &CMatrix<T>, s: T) -> Result<()> {
        self.check_same(other)?;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
        Ok(())
    }

    pub fn matmul(&self, other: &CMatrix<T>) -> Result<CMatrix<T>> {
        check_dim(self.cols, other.rows)?;
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        check_dim(self.cols, v.len())?;
        Ok((0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (&a, &b)| acc + a * b)
            })
            .collect())
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols)).fold(Complex::new(T::zero(), T::zero()), |acc, i| acc + self[(i, i)])
    }

    /// `tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &CMatrix<T>) -> Result<Complex<T>> {
        check_dim(self.cols, other.rows)?;
        check_dim(self.rows, other.cols)?;
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        Ok(acc)
    }

    pub fn frobenius(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
    }

    pub fn max_abs_diff(&self, other: &CMatrix<T>) -> Result<T> {
        self.check_same(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |acc, (&a, &b)| acc.max((a - b).norm())))
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermitian_defect(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermitian_defect() <= tol
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &CMatrix<T>) -> CMatrix<T> {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        Self::from_fn(r, c, |i, j| {
            self[(i / other.rows, j / other.cols)] * other[(i % other.rows, j % other.cols)]
        })
    }

    /// `U self U†`.
    pub fn conjugate_by(&self, u: &CMatrix<T>) -> Result<CMatrix<T>> {
        u.matmul(self)?.matmul(&u.adjoint())
    }

    /// Traces out the qubits not listed in `keep`. Qubit 0 is the most
    /// significant bit of the basis index; `keep` must be increasing.
    pub fn partial_trace_qubits(&self, qubits: usize, keep: &[usize]) -> Result<CMatrix<T>> {
        check_dim(1 << qubits, self.rows)?;
        check_dim(self.rows, self.cols)?;
        if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&q| q >= qubits) {
            return Err(Error::param("kept qubits must be increasing and in range"));
        }
        let traced: Vec<usize> = (0..qubits).filter(|q| !keep.contains(q)).collect();
        let place = |kept: usize, tr: usize| -> usize {
            let mut idx = 0;
            for (pos, &q) in keep.iter().enumerate() {
                if (kept >> (keep.len() - 1 - pos)) & 1 == 1 {
                    idx |= 1 << (qubits - 1 - q);
                }
            }
            for (pos, &q) in traced.iter().enumerate() {
                if (tr >> (traced.len() - 1 - pos)) & 1 == 1 {
                    idx |= 1 << (qubits - 1 - q);
                }
            }
            idx
        };
        let (dk, dt) = (1 << keep.len(), 1 << traced.len());
        let mut out = Self::zeros(dk, dk);
        for i in 0..dk {
            for j in 0..dk {
                let mut acc = Complex::new(T::zero(), T::zero());
                for t in 0..dt {
                    acc += self[(place(i, t), place(j, t))];
                }
                out[(i, j)] = acc;
            }
        }
        Ok(out)
    }

    /// Traces out the right factor of a `d_left · d_right` bipartite operator.
    pub fn partial_trace_right(&self, d_left: usize, d_right: usize) -> Result<CMatrix<T>> {
        check_dim(d_left * d_right, self.rows)?;
        check_dim(self.rows, self.cols)?;
        Ok(Self::from_fn(d_left, d_left, |i, j| {
            (0..d_right).fold(Complex::new(T::zero(), T::zero()), |acc, t| {
                acc + self[(i * d_right + t, j * d_right + t)]
            })
        }))
    }

    /// Traces out the left factor of a `d_left · d_right` bipartite operator.
    pub fn partial_trace_left(&self, d_left: usize, d_right: usize) -> Result<CMatrix<T>> {
        check_dim(d_left * d_right, self.rows)?;
        check_dim(self.rows, self.cols)?;
        Ok(Self::from_fn(d_right, d_right, |i, j| {
            (0..d_left).fold(Complex::new(T::zero(), T::zero()), |acc, t| {
                acc + self[(t * d_right + i, t * d_right + j)]
            })
        }))
    }

    pub fn cast<U: Real>(&self) -> CMatrix<U> {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(U::lit(z.re.to_f64_lossy()), U::lit(z.im.to_f64_lossy())))
                .collect(),
        }
    }

    fn check_same(&self, other: &CMatrix<T>) -> Result<()> {
        check_dim(self.rows, other.rows)?;
        check_dim(self.cols, other.cols)
    }
}

impl<T> Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Add for &CMatrix<T> {
    type Output = CMatrix<T>;

    /// Panics on a shape mismatch.
    fn add(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        let mut out = self.clone();
        out.add_scaled(rhs, T::one()).expect("matching shapes");
        out
    }
}

impl<T: Real> Sub for &CMatrix<T> {
    type Output = CMatrix<T>;

    /// Panics on a shape mismatch.
    fn sub(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        let mut out = self.clone();
        out.add_scaled(rhs, -T::one()).expect("matching shapes");
        out
    }
}

impl<T: Real> Mul for &CMatrix<T> {
    type Output = CMatrix<T>;

    /// Panics on a shape mismatch.
    fn mul(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        self.matmul(rhs).expect("matching shapes")
    }
}

impl<T: fmt::Debug> fmt::Debug for CMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let z = &self.data[i * self.cols + j];
                write!(f, " {:+.4?}{:+.4?}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
