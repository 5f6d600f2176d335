use num_complex::Complex;

use super::eigen::{hermitian_eigenvalues, trace_norm};
use super::CMatrix;
use crate::error::{check_dim, Error};
use crate::scalar::Real;
use crate::Result;

/// Hermitian, positive semidefinite, unit-trace operator on `2^q` dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T> {
    m: CMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates Hermiticity (1e-12 relative), positivity (min eigenvalue
    /// >= -1e-10) and unit trace (1e-10).
    pub fn new(m: CMatrix<T>) -> Result<Self> {
        let dim = m.rows();
        if !m.is_square() || !dim.is_power_of_two() {
            return Err(Error::invalid(format!(
                "density matrix must be square with power-of-two dimension, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        if !m.is_hermitian(T::tol(1e-12) * T::one().max(m.frobenius())) {
            return Err(Error::invalid("density matrix is not Hermitian"));
        }
        let tr = m.trace().re;
        if (tr - T::one()).abs() > T::tol(1e-10) {
            return Err(Error::invalid(format!("density matrix has trace {tr}")));
        }
        let min = *hermitian_eigenvalues(&m)?.last().expect("non-empty");
        if min < -T::tol(1e-10) {
            return Err(Error::invalid(format!("density matrix has eigenvalue {min}")));
        }
        Ok(Self { m })
    }

    /// Normalizes a non-zero PSD operator to unit trace.
    pub fn from_unnormalized(m: CMatrix<T>) -> Result<Self> {
        let tr = m.trace().re;
        if tr <= T::zero() {
            return Err(Error::invalid("cannot normalize an operator with non-positive trace"));
        }
        Self::new(m.scale(T::one() / tr))
    }

    /// Skips validation; for operators built from valid states by trusted
    /// internal code.
    pub(crate) fn trusted(m: CMatrix<T>) -> Self {
        Self { m }
    }

    pub fn pure(psi: &[Complex<T>]) -> Result<Self> {
        let norm = psi.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());
        if norm <= T::zero() {
            return Err(Error::invalid("zero state vector"));
        }
        let s = T::one() / norm.sqrt();
        let v: Vec<Complex<T>> = psi.iter().map(|&z| z * s).collect();
        Self::new(CMatrix::outer(&v, &v))
    }

    /// `|i><i|` in dimension `dim`.
    pub fn basis(dim: usize, i: usize) -> Result<Self> {
        if i >= dim {
            return Err(Error::param(format!("basis index {i} out of range {dim}")));
        }
        let mut m = CMatrix::zeros(dim, dim);
        m[(i, i)] = Complex::new(T::one(), T::zero());
        Self::new(m)
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::new(CMatrix::identity(dim).scale(T::one() / T::lit(dim as f64)))
    }

    /// The one-dimensional state `[1]`.
    pub fn scalar_one() -> Self {
        Self { m: CMatrix::identity(1) }
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn tensor(&self, other: &DensityMatrix<T>) -> DensityMatrix<T> {
        Self { m: self.m.kron(&other.m) }
    }

    pub fn evolve(&self, u: &CMatrix<T>) -> Result<DensityMatrix<T>> {
        Ok(Self { m: self.m.conjugate_by(u)? })
    }

    pub fn partial_trace_qubits(&self, keep: &[usize]) -> Result<DensityMatrix<T>> {
        Ok(Self { m: self.m.partial_trace_qubits(self.qubits(), keep)? })
    }
}

/// `½ Σ |eig(A - B)|`.
pub fn trace_distance<T: Real>(a: &DensityMatrix<T>, b: &DensityMatrix<T>) -> Result<T> {
    check_dim(a.dim(), b.dim())?;
    trace_norm(&(&a.m - &b.m))
}

/// `σ_{b1 b2}`: `σ00 = I`, `σ01 = Z`, `σ10 = X`, `σ11 = ZX`.
pub fn pauli<T: Real>(b1: bool, b2: bool) -> CMatrix<T> {
    let x = CMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).expect("2x2");
    let z = CMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).expect("2x2");
    match (b1, b2) {
        (false, false) => CMatrix::identity(2),
        (false, true) => z,
        (true, false) => x,
        (true, true) => &z * &x,
    }
}

/// `(|00> + |11>)/√2`.
pub fn epr_vector<T: Real>() -> Vec<Complex<T>> {
    let h = T::one() / T::lit(2.0).sqrt();
    let zero = Complex::new(T::zero(), T::zero());
    vec![Complex::new(h, T::zero()), zero, zero, Complex::new(h, T::zero())]
}

/// Kronecker product of a list of matrices, left to right.
pub fn kron_all<T: Real>(factors: &[CMatrix<T>]) -> CMatrix<T> {
    factors.iter().fold(CMatrix::identity(1), |acc, f| acc.kron(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::random::{random_density, trial_rng};

    type D = DensityMatrix<f64>;

    #[test]
    fn trace_distance_examples() {
        let z0 = D::basis(2, 0).unwrap();
        let z1 = D::basis(2, 1).unwrap();
        let mixed = D::maximally_mixed(2).unwrap();
        assert_eq!(trace_distance(&z0, &z0).unwrap(), 0.0);
        assert!((trace_distance(&z0, &z1).unwrap() - 1.0).abs() < 1e-15);
        assert!((trace_distance(&mixed, &z0).unwrap() - 0.5).abs() < 1e-15);
        assert!(trace_distance(&z0, &D::maximally_mixed(4).unwrap()).is_err());
    }

    #[test]
    fn validation() {
        assert!(D::new(CMatrix::identity(2)).is_err());
        assert!(D::new(CMatrix::diag(&[1.5, -0.5])).is_err());
        assert!(D::new(CMatrix::identity(3).scale(1.0 / 3.0)).is_err());
        assert!(D::new(CMatrix::from_real(2, 2, &[0.5, 0.5, -0.5, 0.5]).unwrap()).is_err());
        assert!(D::from_unnormalized(CMatrix::diag(&[2.0, 2.0])).is_ok());
    }

    #[test]
    fn paulis() {
        let x: CMatrix<f64> = pauli(true, false);
        let z: CMatrix<f64> = pauli(false, true);
        let zx: CMatrix<f64> = pauli(true, true);
        assert_eq!(&z * &x, zx);
        assert!((&x * &x).max_abs_diff(&CMatrix::identity(2)).unwrap() < 1e-15);
        assert!((&zx * &zx.adjoint()).max_abs_diff(&CMatrix::identity(2)).unwrap() < 1e-15);
    }

    #[test]
    fn triangle_inequality() {
        for trial in 0..100 {
            let mut rng = trial_rng(5, trial);
            let dim = 1 << (trial % 3 + 1);
            let (a, b, c): (D, D, D) = (
                random_density(dim, &mut rng),
                random_density(dim, &mut rng),
                random_density(dim, &mut rng),
            );
            let ab = trace_distance(&a, &b).unwrap();
            let bc = trace_distance(&b, &c).unwrap();
            let ac = trace_distance(&a, &c).unwrap();
            assert!(ac <= ab + bc + 1e-9);
            assert!((ab - trace_distance(&b, &a).unwrap()).abs() < 1e-12);
        }
    }
}
