use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::eigen::{hermitian_eigen, hermitian_eigenvalues, trace_norm};
use super::{boolean_reduce, cq_distance_from_uniform, CMatrix, CqState, DensityMatrix, Label};
use crate::error::{check_dim, Error};
use crate::scalar::Real;
use crate::Result;

/// Eigenvalues at or below this are treated as zero when inverting.
pub const PSEUDO_INVERSE_CUTOFF: f64 = 1e-10;

/// Labelled POVM elements.
#[derive(Clone, Debug)]
pub struct Povm<T> {
    elements: Vec<(Label, CMatrix<T>)>,
}

impl<T: Real> Povm<T> {
    /// Checks that every element is PSD (1e-10) and that they sum to the
    /// identity (1e-9 entrywise).
    pub fn new(elements: Vec<(Label, CMatrix<T>)>) -> Result<Self> {
        let povm = Self::unchecked(elements)?;
        povm.validate()?;
        Ok(povm)
    }

    fn unchecked(mut elements: Vec<(Label, CMatrix<T>)>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::invalid("POVM needs at least one element"));
        }
        let dim = elements[0].1.rows();
        for (_, e) in &elements {
            check_dim(dim, e.rows())?;
            check_dim(dim, e.cols())?;
        }
        elements.sort_by_key(|(l, _)| *l);
        if elements.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::invalid("duplicate POVM labels"));
        }
        Ok(Self { elements })
    }

    pub fn validate(&self) -> Result<()> {
        for (label, e) in &self.elements {
            let min = *hermitian_eigenvalues(e)?.last().expect("non-empty");
            if min < -T::tol(1e-10) {
                return Err(Error::invalid(format!("POVM element {label:?} has eigenvalue {min}")));
            }
        }
        let defect = self.completeness_defect();
        if defect > T::tol(1e-9) {
            return Err(Error::invalid(format!("POVM elements miss the identity by {defect}")));
        }
        Ok(())
    }

    /// Largest entry of `|Σ E_z − I|`.
    pub fn completeness_defect(&self) -> T {
        let dim = self.dim();
        let mut sum = CMatrix::zeros(dim, dim);
        for (_, e) in &self.elements {
            sum.add_scaled(e, T::one()).expect("uniform dims");
        }
        sum.max_abs_diff(&CMatrix::identity(dim)).expect("uniform dims")
    }

    pub fn elements(&self) -> &[(Label, CMatrix<T>)] {
        &self.elements
    }

    pub fn element(&self, label: &Label) -> Option<&CMatrix<T>> {
        self.elements
            .binary_search_by_key(label, |(l, _)| *l)
            .ok()
            .map(|i| &self.elements[i].1)
    }

    pub fn dim(&self) -> usize {
        self.elements[0].1.rows()
    }
}

struct PgmParts<T> {
    povm: Povm<T>,
    /// `max_z λ_max(p_z ρ^{-1/2} ρ_z ρ^{-1/2})`.
    certificate: T,
}

fn pgm_parts<T: Real>(s: &CqState<T>) -> Result<PgmParts<T>> {
    let eig = hermitian_eigen(&s.average())?;
    let cutoff = T::tol(PSEUDO_INVERSE_CUTOFF);
    let inv_sqrt = eig.apply(|v| if v > cutoff { T::one() / v.sqrt() } else { T::zero() });
    let support = eig.support_projector(cutoff);
    let kernel = &CMatrix::identity(s.dim()) - &support;
    let share = T::one() / T::lit(s.len() as f64);
    let mut certificate = T::zero();
    let mut elements = Vec::with_capacity(s.len());
    for e in s.entries() {
        let mut el = inv_sqrt.matmul(&e.state.matrix().scale(e.prob))?.matmul(&inv_sqrt)?;
        certificate = certificate.max(hermitian_eigenvalues(&el)?[0]);
        el.add_scaled(&kernel, share)?;
        elements.push((e.label, el));
    }
    Ok(PgmParts { povm: Povm::unchecked(elements)?, certificate })
}

/// Pretty good measurement `E_z = p(z) ρ^{-1/2} ρ_z ρ^{-1/2}`, with the
/// inverse square root taken on the support of `ρ` and the kernel projector
/// shared equally among the elements.
pub fn pgm<T: Real>(s: &CqState<T>) -> Result<Povm<T>> {
    Ok(pgm_parts(s)?.povm)
}

/// `Σ_z p(z) tr(M_z ρ_z)`.
pub fn guess_success<T: Real>(s: &CqState<T>, m: &Povm<T>) -> Result<T> {
    check_dim(s.dim(), m.dim())?;
    let mut total = T::zero();
    for e in s.entries() {
        let el = m
            .element(&e.label)
            .ok_or_else(|| Error::param(format!("POVM has no element for {:?}", e.label)))?;
        total += e.prob * el.trace_product(e.state.matrix())?.re;
    }
    Ok(total)
}

/// Bracket on the guessing entropy `H_g(Z ← ρ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GuessingBounds<T> {
    pub lower: T,
    pub upper: T,
    /// Success probability of the pretty good measurement.
    pub pgm_success: T,
    /// Upper bound on the optimal success probability.
    pub success_upper: T,
    /// `H_∞(Z) − log dim`.
    pub storage_floor: T,
}

/// Brackets `H_g` without solving for the optimal measurement.
///
/// The PGM success `P` satisfies `P <= P_opt <= √P`. The optimum is also at
/// most `max_z λ_max(E_z)` restricted to the support of `ρ`, since `λ ρ`
/// dominates every `p(z) ρ_z` for that `λ`. The storage floor
/// `H_∞ − log dim` is an independent lower bound.
pub fn guessing_entropy_bounds<T: Real>(s: &CqState<T>) -> Result<GuessingBounds<T>> {
    let parts = pgm_parts(s)?;
    let pgm_success = guess_success(s, &parts.povm)?.min(T::one());
    let success_upper = pgm_success.sqrt().min(parts.certificate).min(T::one()).max(pgm_success);
    let storage_floor = s.min_entropy() - T::lit(s.qubits() as f64);
    let upper = -pgm_success.log2();
    let lower = (-success_upper.log2()).max(storage_floor).min(upper);
    Ok(GuessingBounds { lower, upper, pgm_success, success_upper, storage_floor })
}

/// Optimal probability of telling `ρ0` from `ρ1` with priors `p0, p1`:
/// `½ + ½‖p0 ρ0 − p1 ρ1‖₁` (full L1 norm).
pub fn helstrom_advantage<T: Real>(p0: T, rho0: &DensityMatrix<T>, p1: T, rho1: &DensityMatrix<T>) -> Result<T> {
    if p0 < T::zero() || p1 < T::zero() || (p0 + p1 - T::one()).abs() > T::tol(1e-10) {
        return Err(Error::param("priors must be a probability pair"));
    }
    check_dim(rho0.dim(), rho1.dim())?;
    let mut diff = rho0.matrix().scale(p0);
    diff.add_scaled(rho1.matrix(), -p1)?;
    Ok(T::lit(0.5) + trace_norm(&diff)?)
}

/// Both sides of the reduction from quantum to PGM-classical side
/// information for one Boolean function of the register.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KtCheck<T> {
    pub lhs: T,
    /// Variational distance of `(f(Z), PGM outcome)` from `(U_1, PGM outcome)`.
    pub classical: T,
    /// `√(½ · classical)`.
    pub rhs: T,
}

pub fn kt_reduction_check<T: Real>(s: &CqState<T>, f: impl Fn(&Label) -> bool) -> Result<KtCheck<T>> {
    let lhs = cq_distance_from_uniform(&boolean_reduce(s, &f), 1)?;
    let povm = pgm(s)?;
    let mut joint: BTreeMap<Label, [T; 2]> = BTreeMap::new();
    for e in s.entries() {
        let b = f(&e.label) as usize;
        for (outcome, el) in povm.elements() {
            let q = e.prob * el.trace_product(e.state.matrix())?.re;
            joint.entry(*outcome).or_insert([T::zero(); 2])[b] += q;
        }
    }
    let classical = joint.values().fold(T::zero(), |acc, q| acc + (q[0] - q[1]).abs()) * T::lit(0.5);
    Ok(KtCheck { lhs, classical, rhs: (T::lit(0.5) * classical).sqrt() })
}

/// `(½‖S‖₁, ½√(tr σ · tr(σ^{-1/2} S σ^{-1/2} S)))` for Hermitian `S` and
/// PSD `σ` whose support contains that of `S`.
pub fn renner_norm_check<T: Real>(s: &CMatrix<T>, sigma: &CMatrix<T>) -> Result<(T, T)> {
    check_dim(sigma.rows(), s.rows())?;
    let eig = hermitian_eigen(sigma)?;
    let scale = T::one().max(eig.values[0]);
    if *eig.values.last().expect("non-empty") < -T::tol(1e-10) * scale {
        return Err(Error::invalid("sigma is not positive semidefinite"));
    }
    let cutoff = T::tol(PSEUDO_INVERSE_CUTOFF) * scale;
    let support = eig.support_projector(cutoff);
    let inside = support.matmul(s)?.matmul(&support)?;
    let leak = inside.max_abs_diff(s)?;
    if leak > T::tol(1e-9) * T::one().max(s.frobenius()) {
        return Err(Error::invalid(format!("S leaves the support of sigma (by {leak})")));
    }
    let lhs = trace_norm(s)?;
    let inv_sqrt = eig.apply(|v| if v > cutoff { T::one() / v.sqrt() } else { T::zero() });
    let sandwiched = inv_sqrt.matmul(s)?.matmul(&inv_sqrt)?;
    let q = sandwiched.trace_product(s)?.re.max(T::zero());
    let rhs = T::lit(0.5) * (sigma.trace().re * q).sqrt();
    Ok((lhs, rhs))
}
