use num_complex::Complex;

use super::CMatrix;
use crate::error::Error;
use crate::scalar::Real;
use crate::Result;

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T> {
    /// Eigenvalues in descending order.
    pub values: Vec<T>,
    /// Eigenvectors as columns, in the order of `values`.
    pub vectors: CMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    /// `V f(Λ) V†`.
    pub fn apply(&self, f: impl Fn(T) -> T) -> CMatrix<T> {
        let n = self.values.len();
        let fv: Vec<T> = self.values.iter().map(|&v| f(v)).collect();
        CMatrix::from_fn(n, n, |i, j| {
            (0..n).fold(Complex::new(T::zero(), T::zero()), |acc, k| {
                acc + self.vectors[(i, k)] * self.vectors[(j, k)].conj() * fv[k]
            })
        })
    }

    /// Projector onto the eigenvectors whose eigenvalue exceeds `cutoff`.
    pub fn support_projector(&self, cutoff: T) -> CMatrix<T> {
        self.apply(|v| if v > cutoff { T::one() } else { T::zero() })
    }
}

/// Cyclic complex Jacobi rotations until the off-diagonal Frobenius mass is
/// below `max(1e-12, 16·eps·‖M‖_F)`.
pub fn hermitian_eigen<T: Real>(m: &CMatrix<T>) -> Result<HermitianEigen<T>> {
    if !m.is_square() {
        return Err(Error::invalid("eigenvalues need a square matrix"));
    }
    let frob = m.frobenius();
    let scale = T::one().max(frob);
    if !m.is_hermitian(T::tol(1e-10) * scale) {
        return Err(Error::invalid(format!(
            "matrix is not Hermitian (defect {})",
            m.hermitian_defect()
        )));
    }
    let n = m.rows();
    let mut a = m.clone();
    // symmetrize away the tolerated defect
    for i in 0..n {
        a[(i, i)].im = T::zero();
        for j in i + 1..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()).scale(T::lit(0.5));
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    let mut v = CMatrix::identity(n);
    let tol = T::lit(1e-12).max(T::lit(16.0) * T::epsilon() * frob);
    let two = T::lit(2.0);
    for _ in 0..MAX_SWEEPS {
        if off_diagonal(&a) < tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == T::zero() {
                    continue;
                }
                let w = apq / r;
                let tau = (a[(q, q)].re - a[(p, p)].re) / (two * r);
                let t = if tau == T::zero() {
                    T::one()
                } else {
                    tau.signum() / (tau.abs() + (T::one() + tau * tau).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                rotate(&mut a, &mut v, p, q, c, s, w);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.partial_cmp(&a[(i, i)].re).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues of a Hermitian matrix in descending order.
pub fn hermitian_eigenvalues<T: Real>(m: &CMatrix<T>) -> Result<Vec<T>> {
    Ok(hermitian_eigen(m)?.values)
}

/// `½ Σ |λ|`, the trace norm in the half-L1 convention.
pub fn trace_norm<T: Real>(m: &CMatrix<T>) -> Result<T> {
    let values = hermitian_eigenvalues(m)?;
    Ok(values.iter().fold(T::zero(), |acc, v| acc + v.abs()) * T::lit(0.5))
}

fn off_diagonal<T: Real>(a: &CMatrix<T>) -> T {
    let n = a.rows();
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// `A <- U† A U`, `V <- V U` with `U` equal to the identity except for
/// `U_pp = c`, `U_pq = s`, `U_qp = -s·w̄`, `U_qq = c·w̄`, where `w` is the
/// phase of `A_pq`. This zeroes `A_pq`.
fn rotate<T: Real>(a: &mut CMatrix<T>, v: &mut CMatrix<T>, p: usize, q: usize, c: T, s: T, w: Complex<T>) {
    let n = a.rows();
    let wb = w.conj();
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * c - akq * wb * s;
        a[(k, q)] = akp * s + akq * wb * c;
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * c - vkq * wb * s;
        v[(k, q)] = vkp * s + vkq * wb * c;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = apk * c - aqk * w * s;
        a[(q, k)] = apk * s + aqk * w * c;
    }
    let zero = Complex::new(T::zero(), T::zero());
    a[(p, q)] = zero;
    a[(q, p)] = zero;
    a[(p, p)].im = T::zero();
    a[(q, q)].im = T::zero();
}
