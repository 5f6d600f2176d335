use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error};
use crate::extractors::FlatSource;
use crate::gf2::BitVector;
use crate::qsim::random::{random_probabilities, random_pure_vector, random_unitary, trial_rng};
use crate::qsim::{CMatrix, DensityMatrix};
use crate::scalar::Real;
use crate::Result;

/// Largest total register (budgets plus one purifying qubit per side) that
/// [`random_storage`] will simulate.
const MAX_RANDOM_QUBITS: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Product,
    Entangled,
    Classical,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Flavor::Product => "product",
            Flavor::Entangled => "entangled",
            Flavor::Classical => "classical",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Flavor::Product, Flavor::Entangled, Flavor::Classical]
            .into_iter()
            .find(|f| f.to_string() == s)
            .ok_or_else(|| Error::param(format!("unknown flavor {s:?}")))
    }
}

/// Input-to-state map of a storage strategy.
///
/// `joint` is the stored state on `b1 + b2` qubits, Alice's first. The
/// full-side maps keep one party's entire register (next to the other party's
/// stored qubits) and are only needed for superstrong evaluation.
pub trait StateMap<T>: Send + Sync {
    fn joint(&self, x: &BitVector, y: &BitVector) -> Result<DensityMatrix<T>>;

    fn alice_full(&self, _x: &BitVector, _y: &BitVector) -> Option<Result<DensityMatrix<T>>> {
        None
    }

    fn bob_full(&self, _x: &BitVector, _y: &BitVector) -> Option<Result<DensityMatrix<T>>> {
        None
    }
}

pub(crate) type StateFn<T> = Box<dyn Fn(&BitVector, &BitVector) -> Result<DensityMatrix<T>> + Send + Sync>;

struct FnMap<T> {
    joint: StateFn<T>,
    alice_full: Option<StateFn<T>>,
    bob_full: Option<StateFn<T>>,
}

impl<T> StateMap<T> for FnMap<T> {
    fn joint(&self, x: &BitVector, y: &BitVector) -> Result<DensityMatrix<T>> {
        (self.joint)(x, y)
    }

    fn alice_full(&self, x: &BitVector, y: &BitVector) -> Option<Result<DensityMatrix<T>>> {
        self.alice_full.as_ref().map(|f| f(x, y))
    }

    fn bob_full(&self, x: &BitVector, y: &BitVector) -> Option<Result<DensityMatrix<T>>> {
        self.bob_full.as_ref().map(|f| f(x, y))
    }
}

/// `(b1, b2)` storage: what Alice and Bob keep of their registers after
/// seeing `x` and `y`.
#[derive(Clone)]
pub struct StorageStrategy<T> {
    b1: usize,
    b2: usize,
    flavor: Flavor,
    map: Arc<dyn StateMap<T>>,
    referee: Option<String>,
}

impl<T: Real> StorageStrategy<T> {
    pub fn new(b1: usize, b2: usize, flavor: Flavor, map: Arc<dyn StateMap<T>>) -> Self {
        Self { b1, b2, flavor, map, referee: None }
    }

    /// Strategy from closures; see [`StateMap`] for their meaning.
    pub fn from_fns<J>(b1: usize, b2: usize, flavor: Flavor, joint: J) -> Self
    where
        J: Fn(&BitVector, &BitVector) -> Result<DensityMatrix<T>> + Send + Sync + 'static,
    {
        Self::with_full_fns(b1, b2, flavor, joint, None, None)
    }

    pub fn with_full_fns<J>(
        b1: usize,
        b2: usize,
        flavor: Flavor,
        joint: J,
        alice_full: Option<StateFn<T>>,
        bob_full: Option<StateFn<T>>,
    ) -> Self
    where
        J: Fn(&BitVector, &BitVector) -> Result<DensityMatrix<T>> + Send + Sync + 'static,
    {
        let map = FnMap { joint: Box::new(joint), alice_full, bob_full };
        Self::new(b1, b2, flavor, Arc::new(map))
    }

    /// No storage at all: every state is the scalar `[1]`.
    pub fn trivial() -> Self {
        Self::from_fns(0, 0, Flavor::Classical, |_, _| Ok(DensityMatrix::scalar_one()))
    }

    /// Attaches a description of the referee's measurement.
    pub fn with_referee(mut self, description: impl Into<String>) -> Self {
        self.referee = Some(description.into());
        self
    }

    pub fn b1(&self) -> usize {
        self.b1
    }

    pub fn b2(&self) -> usize {
        self.b2
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn referee(&self) -> Option<&str> {
        self.referee.as_deref()
    }

    /// Stored state for inputs `(x, y)`; its dimension is checked against the
    /// budgets.
    pub fn joint(&self, x: &BitVector, y: &BitVector) -> Result<DensityMatrix<T>> {
        let rho = self.map.joint(x, y)?;
        check_dim(1 << (self.b1 + self.b2), rho.dim())?;
        Ok(rho)
    }

    pub fn alice_full(&self, x: &BitVector, y: &BitVector) -> Result<DensityMatrix<T>> {
        self.map
            .alice_full(x, y)
            .unwrap_or_else(|| Err(Error::Capability("strategy has no Alice-side full state".into())))
    }

    pub fn bob_full(&self, x: &BitVector, y: &BitVector) -> Result<DensityMatrix<T>> {
        self.map
            .bob_full(x, y)
            .unwrap_or_else(|| Err(Error::Capability("strategy has no Bob-side full state".into())))
    }

    /// Largest entrywise deviation of `ρ_xy` from `ρ^A_x ⊗ ρ^B_y` over the
    /// given supports, where the factors are the marginals of `ρ_xy`.
    pub fn factorization_defect(&self, xs: &FlatSource, ys: &FlatSource) -> Result<T> {
        let (da, db) = (1usize << self.b1, 1usize << self.b2);
        let mut worst = T::zero();
        for x in xs.support() {
            for y in ys.support() {
                let rho = self.joint(x, y)?;
                let a = rho.matrix().partial_trace_right(da, db)?;
                let b = rho.matrix().partial_trace_left(da, db)?;
                worst = worst.max(rho.matrix().max_abs_diff(&a.kron(&b))?);
            }
        }
        Ok(worst)
    }
}

impl<T> fmt::Debug for StorageStrategy<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StorageStrategy")
            .field("b1", &self.b1)
            .field("b2", &self.b2)
            .field("flavor", &self.flavor)
            .field("referee", &self.referee)
            .finish_non_exhaustive()
    }
}

/// Random `(b1, b2)` storage for `n`-bit inputs, deterministic in `seed`.
///
/// Every party owns its budget plus one extra qubit which is discarded, so
/// stored states are generically mixed.
///
/// * entangled: one shared Haar state on both registers, Alice applies a
///   random unitary `U_x`, Bob `V_y`;
/// * product: independent random pure states per input;
/// * classical: independent random diagonal states per input.
///
/// Randomness for input `x` comes from stream `2x + 1` and for `y` from
/// stream `2y + 2`; the shared state uses stream 0.
pub fn random_storage<T: Real>(n: usize, b1: usize, b2: usize, flavor: Flavor, seed: u64) -> Result<StorageStrategy<T>> {
    if n == 0 || n > 62 {
        return Err(Error::param(format!("random storage needs 1 <= n <= 62, got {n}")));
    }
    if b1 + b2 + 2 > MAX_RANDOM_QUBITS {
        return Err(Error::param(format!(
            "random storage is limited to b1 + b2 <= {}, got {}",
            MAX_RANDOM_QUBITS - 2,
            b1 + b2
        )));
    }
    let strategy = match flavor {
        Flavor::Entangled => entangled_random(n, b1, b2, seed),
        Flavor::Product => product_random(n, b1, b2, seed),
        Flavor::Classical => classical_random(n, b1, b2, seed),
    };
    Ok(strategy)
}

fn input_index(v: &BitVector, n: usize) -> Result<u64> {
    check_dim(n, v.len())?;
    Ok(v.to_u64())
}

fn alice_stream(x: u64) -> u64 {
    2 * x + 1
}

fn bob_stream(y: u64) -> u64 {
    2 * y + 2
}

/// Pure state of one party's register `(budget + 1 qubits)` for an input.
fn local_pure<T: Real>(seed: u64, stream: u64, qubits: usize) -> Vec<Complex<T>> {
    random_pure_vector(1 << qubits, &mut trial_rng(seed, stream))
}

/// Discards the last qubit of a `(b + 1)`-qubit pure state.
fn drop_last_qubit<T: Real>(psi: &[Complex<T>]) -> DensityMatrix<T> {
    let d = psi.len() / 2;
    let m = CMatrix::from_fn(d, d, |i, j| psi[2 * i] * psi[2 * j].conj() + psi[2 * i + 1] * psi[2 * j + 1].conj());
    DensityMatrix::trusted(m)
}

fn product_random<T: Real>(n: usize, b1: usize, b2: usize, seed: u64) -> StorageStrategy<T> {
    let joint = move |x: &BitVector, y: &BitVector| -> Result<DensityMatrix<T>> {
        let a = drop_last_qubit(&local_pure::<T>(seed, alice_stream(input_index(x, n)?), b1 + 1));
        let b = drop_last_qubit(&local_pure::<T>(seed, bob_stream(input_index(y, n)?), b2 + 1));
        Ok(a.tensor(&b))
    };
    let alice_full: StateFn<T> = Box::new(move |x, y| {
        let a = DensityMatrix::pure(&local_pure::<T>(seed, alice_stream(input_index(x, n)?), b1 + 1))?;
        let b = drop_last_qubit(&local_pure::<T>(seed, bob_stream(input_index(y, n)?), b2 + 1));
        Ok(a.tensor(&b))
    });
    let bob_full: StateFn<T> = Box::new(move |x, y| {
        let a = drop_last_qubit(&local_pure::<T>(seed, alice_stream(input_index(x, n)?), b1 + 1));
        let b = DensityMatrix::pure(&local_pure::<T>(seed, bob_stream(input_index(y, n)?), b2 + 1))?;
        Ok(a.tensor(&b))
    });
    StorageStrategy::with_full_fns(b1, b2, Flavor::Product, joint, Some(alice_full), Some(bob_full))
}

fn classical_random<T: Real>(n: usize, b1: usize, b2: usize, seed: u64) -> StorageStrategy<T> {
    let local = move |stream: u64, b: usize| -> DensityMatrix<T> {
        let p: Vec<T> = random_probabilities(1 << b, &mut trial_rng(seed, stream));
        DensityMatrix::trusted(CMatrix::diag(&p))
    };
    let joint = move |x: &BitVector, y: &BitVector| -> Result<DensityMatrix<T>> {
        let a = local(alice_stream(input_index(x, n)?), b1);
        let b = local(bob_stream(input_index(y, n)?), b2);
        Ok(a.tensor(&b))
    };
    StorageStrategy::from_fns(b1, b2, Flavor::Classical, joint)
}

/// `(U ⊗ V)|ψ⟩` for `ψ` laid out as a `dA x dB` row-major matrix: `U ψ Vᵀ`.
fn apply_local<T: Real>(psi: &[Complex<T>], u: &CMatrix<T>, v: &CMatrix<T>) -> Result<Vec<Complex<T>>> {
    let (da, db) = (u.rows(), v.rows());
    let m = CMatrix::from_fn(da, db, |i, j| psi[i * db + j]);
    let out = u.matmul(&m)?.matmul(&v.transpose())?;
    Ok(out.data().to_vec())
}

fn entangled_random<T: Real>(n: usize, b1: usize, b2: usize, seed: u64) -> StorageStrategy<T> {
    let (qa, qb) = (b1 + 1, b2 + 1);
    let shared: Arc<Vec<Complex<T>>> = Arc::new(random_pure_vector(1 << (qa + qb), &mut trial_rng(seed, 0)));
    let full_state = move |x: &BitVector, y: &BitVector| -> Result<DensityMatrix<T>> {
        let u = random_unitary(1 << qa, &mut trial_rng(seed, alice_stream(input_index(x, n)?)));
        let v = random_unitary(1 << qb, &mut trial_rng(seed, bob_stream(input_index(y, n)?)));
        let phi = apply_local(&shared, &u, &v)?;
        Ok(DensityMatrix::trusted(CMatrix::outer(&phi, &phi)))
    };
    let full = Arc::new(full_state);
    let alice_keep: Vec<usize> = (0..b1).collect();
    let bob_keep: Vec<usize> = (qa..qa + b2).collect();
    let joint_keep: Vec<usize> = alice_keep.iter().chain(&bob_keep).copied().collect();
    let alice_full_keep: Vec<usize> = (0..qa).chain(bob_keep.iter().copied()).collect();
    let bob_full_keep: Vec<usize> = alice_keep.iter().copied().chain(qa..qa + qb).collect();
    let f = Arc::clone(&full);
    let joint = move |x: &BitVector, y: &BitVector| f(x, y)?.partial_trace_qubits(&joint_keep);
    let f = Arc::clone(&full);
    let alice_full: StateFn<T> = Box::new(move |x, y| f(x, y)?.partial_trace_qubits(&alice_full_keep));
    let bob_full: StateFn<T> = Box::new(move |x, y| full(x, y)?.partial_trace_qubits(&bob_full_keep));
    StorageStrategy::with_full_fns(b1, b2, Flavor::Entangled, joint, Some(alice_full), Some(bob_full))
}
