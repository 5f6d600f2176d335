use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::eigen::trace_norm;
use super::{CMatrix, DensityMatrix};
use crate::adversaries::StorageStrategy;
use crate::error::{check_dim, Error};
use crate::extractors::{FlatSource, TwoSourceExtractor};
use crate::gf2::BitVector;
use crate::scalar::Real;
use crate::Result;

/// Classical register value: an output string plus, in strong modes, the
/// exposed source value it is paired with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Label {
    pub value: u64,
    pub context: Option<u64>,
}

impl Label {
    pub fn plain(value: u64) -> Self {
        Self { value, context: None }
    }

    pub fn with_context(value: u64, context: u64) -> Self {
        Self { value, context: Some(context) }
    }
}

#[derive(Clone, Debug)]
pub struct CqEntry<T> {
    pub label: Label,
    pub prob: T,
    pub state: DensityMatrix<T>,
}

/// Ensemble `{(z, p(z), ρ_z)}` sorted by label.
#[derive(Clone, Debug)]
pub struct CqState<T> {
    entries: Vec<CqEntry<T>>,
}

impl<T: Real> CqState<T> {
    pub fn new(entries: Vec<(Label, T, DensityMatrix<T>)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("cq-state needs at least one entry"));
        }
        let dim = entries[0].2.dim();
        let mut total = T::zero();
        for (label, p, state) in &entries {
            check_dim(dim, state.dim())?;
            if *p < -T::tol(1e-12) {
                return Err(Error::invalid(format!("negative probability {p} for {label:?}")));
            }
            total += *p;
        }
        if (total - T::one()).abs() > T::tol(1e-10) {
            return Err(Error::invalid(format!("probabilities sum to {total}")));
        }
        let mut entries: Vec<CqEntry<T>> = entries
            .into_iter()
            .map(|(label, prob, state)| CqEntry { label, prob: prob.max(T::zero()), state })
            .collect();
        entries.sort_by_key(|e| e.label);
        if entries.windows(2).any(|w| w[0].label == w[1].label) {
            return Err(Error::invalid("duplicate cq-state labels"));
        }
        Ok(Self { entries })
    }

    /// Builds from `(label, Σ p ρ)` pairs, reading each probability off the
    /// trace; zero-weight entries are dropped.
    pub(crate) fn from_weighted(weighted: BTreeMap<Label, CMatrix<T>>) -> Self {
        let entries = weighted
            .into_iter()
            .filter_map(|(label, w)| {
                let prob = w.trace().re;
                (prob > T::zero()).then(|| CqEntry {
                    label,
                    prob,
                    state: DensityMatrix::trusted(w.scale(T::one() / prob)),
                })
            })
            .collect();
        Self { entries }
    }

    pub fn entries(&self) -> &[CqEntry<T>] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.entries[0].state.dim()
    }

    pub fn qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn get(&self, label: &Label) -> Option<&CqEntry<T>> {
        self.entries
            .binary_search_by_key(label, |e| e.label)
            .ok()
            .map(|i| &self.entries[i])
    }

    /// `ρ = Σ p(z) ρ_z`.
    pub fn average(&self) -> CMatrix<T> {
        let mut acc = CMatrix::zeros(self.dim(), self.dim());
        for e in &self.entries {
            acc.add_scaled(e.state.matrix(), e.prob).expect("uniform dims");
        }
        acc
    }

    pub fn total_probability(&self) -> T {
        self.entries.iter().fold(T::zero(), |acc, e| acc + e.prob)
    }

    /// `-log2 max_z p(z)`.
    pub fn min_entropy(&self) -> T {
        let pmax = self.entries.iter().fold(T::zero(), |acc, e| acc.max(e.prob));
        -pmax.log2()
    }
}

/// How the classical register of an extractor's output state is formed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OutputMode {
    Weak,
    XStrong,
    YStrong,
    XSuperstrong,
    YSuperstrong,
}

/// Exact cq-state of `E(X, Y)` together with the adversary's storage, for
/// independent flat `X` and `Y`.
///
/// Strong modes pair each output with the exposed source value; superstrong
/// modes additionally replace the stored state by the one in which the
/// exposed side keeps its entire state.
pub fn extractor_output_state<T, E>(
    e: &E,
    xs: &FlatSource,
    ys: &FlatSource,
    storage: &StorageStrategy<T>,
    mode: OutputMode,
) -> Result<CqState<T>>
where
    T: Real,
    E: TwoSourceExtractor + ?Sized,
{
    if e.output_len() > 63 {
        return Err(Error::param("output labels are limited to 63 bits"));
    }
    let exposed = |v: &BitVector| -> Result<u64> {
        if v.len() > 64 {
            return Err(Error::param("exposed sources are limited to 64 bits"));
        }
        Ok(v.to_u64())
    };
    let weight = T::one() / T::lit((xs.len() * ys.len()) as f64);
    let mut blocks: BTreeMap<Label, CMatrix<T>> = BTreeMap::new();
    for x in xs.support() {
        for y in ys.support() {
            let value = e.extract(x, y)?.to_u64();
            let (context, state) = match mode {
                OutputMode::Weak => (None, storage.joint(x, y)?),
                OutputMode::XStrong => (Some(exposed(x)?), storage.joint(x, y)?),
                OutputMode::YStrong => (Some(exposed(y)?), storage.joint(x, y)?),
                OutputMode::XSuperstrong => (Some(exposed(x)?), storage.alice_full(x, y)?),
                OutputMode::YSuperstrong => (Some(exposed(y)?), storage.bob_full(x, y)?),
            };
            let label = Label { value, context };
            let dim = state.dim();
            blocks
                .entry(label)
                .or_insert_with(|| CMatrix::zeros(dim, dim))
                .add_scaled(state.matrix(), weight)?;
        }
    }
    Ok(CqState::from_weighted(blocks))
}

/// `‖Z ρ_Z − U_m ρ_Z‖` in the half-L1 norm, evaluated block by block.
///
/// Labels are grouped by context; within a context with average operator
/// `M`, each of the `2^m` output values `e` contributes
/// `½‖p_e ρ_e − 2^{-m} M‖₁`, values absent from the state contributing
/// `½·2^{-m}·tr M`.
pub fn cq_distance_from_uniform<T: Real>(s: &CqState<T>, label_bits: usize) -> Result<T> {
    if label_bits > 62 {
        return Err(Error::param("label_bits must be at most 62"));
    }
    let count = 1u64 << label_bits;
    let u = T::one() / T::lit(count as f64);
    let mut groups: BTreeMap<Option<u64>, Vec<&CqEntry<T>>> = BTreeMap::new();
    for e in s.entries() {
        if e.label.value >= count {
            return Err(Error::param(format!(
                "label value {} exceeds {label_bits} bits",
                e.label.value
            )));
        }
        groups.entry(e.label.context).or_default().push(e);
    }
    let mut total = T::zero();
    for members in groups.values() {
        let mut avg = CMatrix::zeros(s.dim(), s.dim());
        for e in members {
            avg.add_scaled(e.state.matrix(), e.prob)?;
        }
        let missing = count - members.len() as u64;
        total += T::lit(missing as f64) * u * avg.trace().re * T::lit(0.5);
        for e in members {
            let mut block = e.state.matrix().scale(e.prob);
            block.add_scaled(&avg, -u)?;
            total += trace_norm(&block)?;
        }
    }
    Ok(total)
}

/// Merges labels through a Boolean function: the new value is `f(label)`,
/// contexts are kept.
pub fn boolean_reduce<T: Real>(s: &CqState<T>, f: impl Fn(&Label) -> bool) -> CqState<T> {
    let mut blocks: BTreeMap<Label, CMatrix<T>> = BTreeMap::new();
    for e in s.entries() {
        let label = Label { value: f(&e.label) as u64, context: e.label.context };
        blocks
            .entry(label)
            .or_insert_with(|| CMatrix::zeros(s.dim(), s.dim()))
            .add_scaled(e.state.matrix(), e.prob)
            .expect("uniform dims");
    }
    CqState::from_weighted(blocks)
}

/// `½‖Σ_z (-1)^{f(z)} p(z) ρ_z‖₁ = ½‖ρ_0 − ρ_1‖₁`, computed directly.
pub fn character_norm<T: Real>(s: &CqState<T>, f: impl Fn(&Label) -> bool) -> Result<T> {
    let mut acc = CMatrix::zeros(s.dim(), s.dim());
    for e in s.entries() {
        let sign = if f(&e.label) { -e.prob } else { e.prob };
        acc.add_scaled(e.state.matrix(), sign)?;
    }
    trace_norm(&acc)
}

/// Both sides of the cq XOR inequality.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct XorLemmaReport<T> {
    /// Squared distance of the `m`-bit register from uniform.
    pub lhs: T,
    /// `Σ_{S≠0}` of the squared one-bit character distances.
    pub character_sum: T,
    /// `2^d · character_sum`.
    pub rhs_factor_d: T,
    /// `2^m · character_sum`.
    pub rhs_factor_m: T,
    /// `2^{min(d,m)} · character_sum`.
    pub rhs: T,
}

pub fn xor_lemma_check<T: Real>(s: &CqState<T>, m: usize) -> Result<XorLemmaReport<T>> {
    if m == 0 || m > 16 {
        return Err(Error::param("xor check needs 1 <= m <= 16"));
    }
    let dist = cq_distance_from_uniform(s, m)?;
    let mut character_sum = T::zero();
    for mask in 1u64..(1 << m) {
        let reduced = boolean_reduce(s, |l| (l.value & mask).count_ones() % 2 == 1);
        let d = cq_distance_from_uniform(&reduced, 1)?;
        character_sum += d * d;
    }
    let d = s.qubits();
    let pow = |k: usize| T::lit(2f64.powi(k as i32));
    Ok(XorLemmaReport {
        lhs: dist * dist,
        character_sum,
        rhs_factor_d: pow(d) * character_sum,
        rhs_factor_m: pow(m) * character_sum,
        rhs: pow(d.min(m)) * character_sum,
    })
}
