use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::seq::index;
use serde::{Deserialize, Serialize};

use super::smp::{embed, pair_labels, pairs_state, pure_state, restrict, smp_storage};
use super::storage::{Flavor, StateFn, StorageStrategy};
use crate::error::{check_dim, Error};
use crate::extractors::{FlatSource, InnerProduct};
use crate::gf2::BitVector;
use crate::qsim::random::trial_rng;
use crate::qsim::{cq_distance_from_uniform, extractor_output_state, CMatrix, DensityMatrix, OutputMode};
use crate::scalar::Real;
use crate::Result;

/// Longest block length handled by [`biased_product_sources`].
pub const MAX_BIASED_LEN: usize = 10;

const RESTARTS: u64 = 32;
const ROUNDS: usize = 64;
const SEARCH_SEED: u64 = 0xb1a5;

/// Flat sources on `l` bits with min-entropy `l − 3` each and
/// `Pr[X · Y = 0] = probability`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiasedSources {
    pub x: FlatSource,
    pub y: FlatSource,
    pub probability: f64,
}

impl BiasedSources {
    /// `½ + 2^{-(l-1)/2}`, the probability the pair has to beat.
    pub fn target(l: usize) -> f64 {
        0.5 + (-(l as f64 - 1.0) / 2.0).exp2()
    }
}

/// Exact `Pr[X · Y = 0]` for independent flat sources.
pub fn orthogonality_probability(x: &FlatSource, y: &FlatSource) -> Result<f64> {
    check_dim(x.n(), y.n())?;
    let mut hits = 0usize;
    for a in x.support() {
        for b in y.support() {
            if !a.dot(b)? {
                hits += 1;
            }
        }
    }
    Ok(hits as f64 / (x.len() * y.len()) as f64)
}

fn hits(xs: &[u64], ys: &[u64]) -> usize {
    xs.iter().map(|&a| ys.iter().filter(|&&b| (a & b).count_ones() % 2 == 0).count()).sum()
}

/// The `size` strings of `{0,1}^l` orthogonal to the most members of
/// `other`, ties broken towards smaller strings.
fn best_response(other: &[u64], l: usize, size: usize) -> Vec<u64> {
    let mut scored: Vec<(usize, u64)> = (0..1u64 << l)
        .map(|v| (other.iter().filter(|&&o| (v & o).count_ones() % 2 == 0).count(), v))
        .collect();
    scored.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut out: Vec<u64> = scored[..size].iter().map(|&(_, v)| v).collect();
    out.sort_unstable();
    out
}

fn climb(start: Vec<u64>, l: usize, size: usize, iterations: &mut usize) -> (Vec<u64>, Vec<u64>, usize) {
    let mut x = start;
    let mut y = best_response(&x, l, size);
    let mut best = hits(&x, &y);
    for _ in 0..ROUNDS {
        *iterations += 1;
        let nx = best_response(&y, l, size);
        let ny = best_response(&nx, l, size);
        let h = hits(&nx, &ny);
        if h <= best {
            break;
        }
        (x, y, best) = (nx, ny, h);
    }
    (x, y, best)
}

fn exhaustive_pairs(l: usize) -> (Vec<u64>, Vec<u64>, usize, usize) {
    let n = 1u64 << l;
    let subsets: Vec<[u64; 2]> = (0..n).flat_map(|a| (a + 1..n).map(move |b| [a, b])).collect();
    let mut best = (Vec::new(), Vec::new(), 0usize);
    let mut iterations = 0;
    'outer: for xs in &subsets {
        for ys in &subsets {
            iterations += 1;
            let h = hits(xs, ys);
            if h > best.2 {
                best = (xs.to_vec(), ys.to_vec(), h);
                if h == 4 {
                    break 'outer;
                }
            }
        }
    }
    (best.0, best.1, best.2, iterations)
}

/// Independent flat sources on `l` bits, min-entropy `l − 3` each, with
/// `Pr[X · Y = 0] > ½ + 2^{-(l-1)/2}`.
///
/// `l = 4` is searched exhaustively. For `5 <= l <= 10` alternating best
/// responses are run from a structured start (`X` on the low `l − 3`
/// coordinates, `Y` on the high ones) and from seeded random restarts; the
/// best pair found must beat the target.
pub fn biased_product_sources(l: usize) -> Result<BiasedSources> {
    if l < 4 {
        return Err(Error::param(format!("biased sources need l >= 4, got {l}")));
    }
    if l > MAX_BIASED_LEN {
        return Err(Error::SearchExhausted { iterations: 0, best_bias: 0.0 });
    }
    let size = 1usize << (l - 3);
    let (xs, ys, best, iterations) = if l == 4 {
        exhaustive_pairs(l)
    } else {
        let mut iterations = 0;
        let structured: Vec<u64> = (0..size as u64).collect();
        let mut best = climb(structured, l, size, &mut iterations);
        for r in 0..RESTARTS {
            let mut rng = trial_rng(SEARCH_SEED, r);
            let mut start: Vec<u64> = index::sample(&mut rng, 1 << l, size).into_iter().map(|v| v as u64).collect();
            start.sort_unstable();
            let found = climb(start, l, size, &mut iterations);
            if found.2 > best.2 {
                best = found;
            }
        }
        (best.0, best.1, best.2, iterations)
    };
    let probability = best as f64 / (size * size) as f64;
    if probability <= BiasedSources::target(l) {
        return Err(Error::SearchExhausted { iterations, best_bias: probability - 0.5 });
    }
    Ok(BiasedSources { x: FlatSource::from_u64s(l, &xs)?, y: FlatSource::from_u64s(l, &ys)?, probability })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Setting {
    Entangled,
    NonEntangled,
    SuperstrongEntangled,
    SuperstrongNonEntangled,
}

impl Setting {
    pub const ALL: [Setting; 4] = [
        Setting::Entangled,
        Setting::NonEntangled,
        Setting::SuperstrongEntangled,
        Setting::SuperstrongNonEntangled,
    ];

    /// Number of source bits whose inner product the storage reveals.
    pub fn revealed_bits(self, b1: usize, b2: usize) -> usize {
        match self {
            Setting::Entangled => 2 * b1.min(b2).saturating_sub(2),
            Setting::NonEntangled => b1.min(b2),
            Setting::SuperstrongEntangled => 2 * b1.max(b2),
            Setting::SuperstrongNonEntangled => b1.max(b2),
        }
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Setting::Entangled => "entangled",
            Setting::NonEntangled => "non-entangled",
            Setting::SuperstrongEntangled => "superstrong-entangled",
            Setting::SuperstrongNonEntangled => "superstrong-non-entangled",
        };
        f.write_str(s)
    }
}

impl FromStr for Setting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Setting::ALL
            .into_iter()
            .find(|v| v.to_string() == s)
            .ok_or_else(|| Error::param(format!("unknown setting {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// `Δ <= b`: the storage computes the whole inner product.
    Exact,
    /// `Δ > b`: biased sources on the part the storage cannot see.
    Biased,
}

/// Sources and storage breaking inner product, with the advantage the
/// construction guarantees.
#[derive(Clone, Debug)]
pub struct TightnessAttack<T> {
    pub setting: Setting,
    pub n: usize,
    pub k1: usize,
    pub k2: usize,
    pub b1: usize,
    pub b2: usize,
    /// `k1 + k2 − n`.
    pub delta: i64,
    /// Bits of `x · y` the storage reveals.
    pub b: usize,
    pub branch: Branch,
    /// Length of the biased block in the `Δ > b` branch.
    pub l: Option<usize>,
    pub biased_probability: Option<f64>,
    pub x: FlatSource,
    pub y: FlatSource,
    pub storage: StorageStrategy<T>,
    /// Which cq-state the advantage refers to.
    pub mode: OutputMode,
    /// `½` in the exact branch, `2^{-(k1+k2-b-n+5)/2}` otherwise; a strict
    /// lower bound on the advantage in the latter case.
    pub predicted_advantage: f64,
}

impl<T: Real> TightnessAttack<T> {
    /// `‖(X · Y) ρ − U ρ‖` on the constructed instance.
    pub fn measured_advantage(&self) -> Result<T> {
        let s = extractor_output_state(&InnerProduct::new(), &self.x, &self.y, &self.storage, self.mode)?;
        cq_distance_from_uniform(&s, 1)
    }
}

fn trusted_basis<T: Real>(qubits: usize, index: usize) -> DensityMatrix<T> {
    let dim = 1 << qubits;
    let mut m = CMatrix::zeros(dim, dim);
    m[(index, index)] = Complex::new(T::one(), T::zero());
    DensityMatrix::trusted(m)
}

/// Bits of `v` at `coords`, first coordinate most significant.
fn packed(v: &BitVector, coords: &[usize]) -> usize {
    coords.iter().fold(0, |acc, &c| (acc << 1) | v.get(c) as usize)
}

/// Classical storage: each party keeps its bits at `coords` (or nothing),
/// padded with zeros to its budget.
fn copy_storage<T: Real>(
    coords: &[usize],
    alice_copies: bool,
    bob_copies: bool,
    b1: usize,
    b2: usize,
) -> Result<StorageStrategy<T>> {
    let len = coords.len();
    if (alice_copies && len > b1) || (bob_copies && len > b2) {
        return Err(Error::param(format!("cannot store {len} bits in budgets ({b1}, {b2})")));
    }
    let coords = coords.to_vec();
    let joint = move |x: &BitVector, y: &BitVector| -> Result<DensityMatrix<T>> {
        let a = if alice_copies { packed(x, &coords) << (b1 - len) } else { 0 };
        let b = if bob_copies { packed(y, &coords) << (b2 - len) } else { 0 };
        Ok(trusted_basis(b1 + b2, (a << b2) | b))
    };
    Ok(StorageStrategy::from_fns(b1, b2, Flavor::Classical, joint))
}

/// Superdense coding of the sender's bits at `coords` into the sender's
/// stored halves; the receiver keeps the other halves outside its budget and
/// stores `|0⟩`. Alice sends when `b1 >= b2`.
fn superdense_storage<T: Real>(n: usize, coords: &[usize], b1: usize, b2: usize) -> Result<StorageStrategy<T>> {
    let alice_sends = b1 >= b2;
    let k = coords.len().div_ceil(2);
    let budget = b1.max(b2);
    if k > budget {
        return Err(Error::param(format!("superdense coding of {} bits needs {k} qubits", coords.len())));
    }
    if b1 + b2 + k > 14 {
        return Err(Error::param("superdense storage is limited to b1 + b2 + pairs <= 14"));
    }
    let coords = coords.to_vec();
    let identity = vec![(false, false); k];
    let full = move |x: &BitVector, y: &BitVector| -> Result<DensityMatrix<T>> {
        check_dim(n, x.len())?;
        check_dim(n, y.len())?;
        let psi = if alice_sends {
            let amps = pairs_state::<T>(&pair_labels(&restrict(x, &coords)), &identity);
            embed(&amps, k, (0, b1 - k), (0, b2))
        } else {
            let amps = pairs_state::<T>(&identity, &pair_labels(&restrict(y, &coords)));
            embed(&amps, k, (0, b1), (0, b2 - k))
        };
        Ok(pure_state(&psi))
    };
    let keep: Vec<usize> = if alice_sends {
        (0..b1).chain(b1 + k..b1 + k + b2).collect()
    } else {
        (k..k + b1 + b2).collect()
    };
    let full = std::sync::Arc::new(full);
    let f = std::sync::Arc::clone(&full);
    let joint = move |x: &BitVector, y: &BitVector| f(x, y)?.partial_trace_qubits(&keep);
    let exposed: StateFn<T> =
        Box::new(move |x, y| full(x, y));
    let (alice_full, bob_full) = if alice_sends { (None, Some(exposed)) } else { (Some(exposed), None) };
    Ok(StorageStrategy::with_full_fns(b1, b2, Flavor::Entangled, joint, alice_full, bob_full)
        .with_referee("Bell-measure the sender's stored halves against the receiver's halves, then take the inner product with the exposed input"))
}

/// Classical superstrong storage: the party with the larger budget stores its
/// bits at `coords`; the full side adds nothing.
fn superstrong_copy_storage<T: Real>(coords: &[usize], b1: usize, b2: usize) -> Result<StorageStrategy<T>> {
    let alice_sends = b1 >= b2;
    let inner = copy_storage::<T>(coords, alice_sends, !alice_sends, b1, b2)?;
    let a = inner.clone();
    let joint = move |x: &BitVector, y: &BitVector| a.joint(x, y);
    let exposed: StateFn<T> =
        Box::new(move |x, y| inner.joint(x, y));
    let (alice_full, bob_full) = if alice_sends { (None, Some(exposed)) } else { (Some(exposed), None) };
    Ok(StorageStrategy::with_full_fns(b1, b2, Flavor::Classical, joint, alice_full, bob_full)
        .with_referee("read the stored bits and take the inner product with the exposed input"))
}

fn storage_for<T: Real>(
    setting: Setting,
    n: usize,
    coords: Vec<usize>,
    b1: usize,
    b2: usize,
) -> Result<(StorageStrategy<T>, OutputMode)> {
    let superstrong_mode = if b1 >= b2 { OutputMode::YSuperstrong } else { OutputMode::XSuperstrong };
    match setting {
        Setting::Entangled if coords.is_empty() => Ok((copy_storage(&coords, false, false, b1, b2)?, OutputMode::Weak)),
        Setting::Entangled => Ok((smp_storage(n, coords, b1, b2)?, OutputMode::Weak)),
        Setting::NonEntangled => Ok((
            copy_storage(&coords, true, true, b1, b2)?
                .with_referee("read both stored strings and output their inner product"),
            OutputMode::Weak,
        )),
        Setting::SuperstrongEntangled => Ok((superdense_storage(n, &coords, b1, b2)?, superstrong_mode)),
        Setting::SuperstrongNonEntangled => Ok((superstrong_copy_storage(&coords, b1, b2)?, superstrong_mode)),
    }
}

fn source_from(n: usize, values: Vec<u64>) -> Result<FlatSource> {
    FlatSource::from_u64s(n, &values)
}

/// Sources with min-entropy `k1`, `k2` and `(b1, b2)` storage whose
/// inner-product advantage is large.
///
/// With `Δ = k1 + k2 − n` and `b` the number of bits the storage can
/// multiply ([`Setting::revealed_bits`]):
///
/// * `Δ <= b`: `X` is uniform on the first `k1` coordinates and `Y` on the
///   last `k2`; the storage computes the inner product on the `Δ`
///   overlapping coordinates exactly, so the advantage is `½`.
/// * `Δ > b`: `X = X₁X₂X₃X₄` with `X₁` uniform on `b` bits, `X₂` uniform on
///   `k1 − Δ − 3`, `X₃` the first biased source on `l = Δ + 6 − b` bits and
///   `X₄ = 0^{n−k1−3}`; `Y = Y₁Y₂Y₃Y₄` with `Y₁` uniform on `b`,
///   `Y₂ = 0^{n−k2−3}`, `Y₃` the second biased source and `Y₄` uniform on
///   `k2 − Δ − 3`. The storage computes `x₁ · y₁`. This needs
///   `k1, k2 <= n − 3`.
///
/// Superstrong settings store in the party with the larger budget and are
/// evaluated with the other party's input and full register exposed.
pub fn tightness_attack<T: Real>(
    n: usize,
    k1: usize,
    k2: usize,
    b1: usize,
    b2: usize,
    setting: Setting,
) -> Result<TightnessAttack<T>> {
    if n == 0 || n > 62 || k1 > n || k2 > n || k1 == 0 || k2 == 0 {
        return Err(Error::param(format!("need 1 <= k1, k2 <= n <= 62, got n={n}, k1={k1}, k2={k2}")));
    }
    if k1 + k2 > 20 {
        return Err(Error::param("exact evaluation is limited to k1 + k2 <= 20"));
    }
    if b1 + b2 > 14 {
        return Err(Error::param("exact evaluation is limited to b1 + b2 <= 14"));
    }
    let delta = (k1 + k2) as i64 - n as i64;
    let b = setting.revealed_bits(b1, b2);

    if delta <= b as i64 {
        let coords: Vec<usize> = (n - k2..k1.max(n - k2)).collect();
        let x = source_from(n, (0..1u64 << k1).collect())?;
        let y = source_from(n, (0..1u64 << k2).map(|v| v << (n - k2)).collect())?;
        let (storage, mode) = storage_for(setting, n, coords, b1, b2)?;
        return Ok(TightnessAttack {
            setting,
            n,
            k1,
            k2,
            b1,
            b2,
            delta,
            b,
            branch: Branch::Exact,
            l: None,
            biased_probability: None,
            x,
            y,
            storage,
            mode,
            predicted_advantage: 0.5,
        });
    }

    if k1 + 3 > n || k2 + 3 > n {
        return Err(Error::param(format!(
            "the Δ > b construction needs k1, k2 <= n - 3, got n={n}, k1={k1}, k2={k2}"
        )));
    }
    let delta_u = delta as usize;
    let l = delta_u + 6 - b;
    let biased = biased_product_sources(l)?;
    let x2_len = k1 - delta_u - 3;
    let y4_len = k2 - delta_u - 3;
    let off3 = b + x2_len;
    let x3: Vec<u64> = biased.x.support().iter().map(BitVector::to_u64).collect();
    let y3: Vec<u64> = biased.y.support().iter().map(BitVector::to_u64).collect();

    let mut xs = Vec::with_capacity(1 << k1);
    for x1 in 0..1u64 << b {
        for x2 in 0..1u64 << x2_len {
            for &v in &x3 {
                xs.push(x1 | (x2 << b) | (v << off3));
            }
        }
    }
    let mut ys = Vec::with_capacity(1 << k2);
    for y1 in 0..1u64 << b {
        for &v in &y3 {
            for y4 in 0..1u64 << y4_len {
                ys.push(y1 | (v << off3) | (y4 << (off3 + l)));
            }
        }
    }
    let (storage, mode) = storage_for(setting, n, (0..b).collect(), b1, b2)?;
    Ok(TightnessAttack {
        setting,
        n,
        k1,
        k2,
        b1,
        b2,
        delta,
        b,
        branch: Branch::Biased,
        l: Some(l),
        biased_probability: Some(biased.probability),
        x: source_from(n, xs)?,
        y: source_from(n, ys)?,
        storage,
        mode,
        predicted_advantage: (-((delta - b as i64 + 5) as f64) / 2.0).exp2(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    type A = TightnessAttack<f64>;

    #[test]
    fn exhaustive_l4_reaches_probability_one() {
        let s = biased_product_sources(4).unwrap();
        assert_eq!(s.probability, 1.0);
        assert!(s.probability > BiasedSources::target(4));
        assert_eq!(s.x.min_entropy(), 1.0);
        assert_eq!(s.y.min_entropy(), 1.0);
        assert_eq!(orthogonality_probability(&s.x, &s.y).unwrap(), 1.0);
    }

    #[test]
    fn listed_l4_pair_is_orthogonal() {
        let bits = |s: &str| BitVector::from_bits(&s.chars().map(|c| c == '1').collect::<Vec<_>>()).unwrap();
        let x = FlatSource::new(4, vec![bits("0001"), bits("0010")]).unwrap();
        let y = FlatSource::new(4, vec![bits("0100"), bits("1000")]).unwrap();
        assert_eq!(orthogonality_probability(&x, &y).unwrap(), 1.0);
    }

    #[test]
    fn search_beats_target_up_to_ten() {
        for l in 5..=MAX_BIASED_LEN {
            let s = biased_product_sources(l).unwrap();
            assert!(s.probability > BiasedSources::target(l), "l={l}: {}", s.probability);
            assert_eq!(s.x.min_entropy(), (l - 3) as f64);
            assert_eq!(s.y.min_entropy(), (l - 3) as f64);
            assert!((orthogonality_probability(&s.x, &s.y).unwrap() - s.probability).abs() < 1e-15);
        }
    }

    #[test]
    fn search_range_is_bounded() {
        assert!(matches!(biased_product_sources(11), Err(Error::SearchExhausted { .. })));
        assert!(matches!(biased_product_sources(3), Err(Error::Parameter(_))));
    }

    #[test]
    fn exact_branch_non_entangled() {
        let a: A = tightness_attack(4, 4, 4, 4, 4, Setting::NonEntangled).unwrap();
        assert_eq!(a.branch, Branch::Exact);
        assert!((a.measured_advantage().unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn exact_branch_entangled() {
        let a: A = tightness_attack(4, 3, 3, 3, 3, Setting::Entangled).unwrap();
        assert_eq!((a.delta, a.b, a.branch), (2, 2, Branch::Exact));
        assert!((a.measured_advantage().unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn exact_branch_superstrong() {
        for setting in [Setting::SuperstrongEntangled, Setting::SuperstrongNonEntangled] {
            for (b1, b2) in [(2, 1), (1, 2)] {
                let a: A = tightness_attack(4, 3, 3, b1, b2, setting).unwrap();
                assert_eq!(a.branch, Branch::Exact, "{setting}");
                assert!((a.measured_advantage().unwrap() - 0.5).abs() < 1e-9, "{setting} {b1} {b2}");
            }
        }
    }

    #[test]
    fn exact_branch_with_nothing_to_store() {
        for setting in Setting::ALL {
            let a: A = tightness_attack(4, 2, 1, 1, 0, setting).unwrap();
            assert_eq!(a.branch, Branch::Exact, "{setting}");
            assert!((a.measured_advantage().unwrap() - 0.5).abs() < 1e-9, "{setting}");
        }
    }

    #[test]
    fn superstrong_storage_alone_hides_the_product() {
        let a: A = tightness_attack(4, 3, 3, 2, 1, Setting::SuperstrongEntangled).unwrap();
        let s = extractor_output_state(&InnerProduct::new(), &a.x, &a.y, &a.storage, OutputMode::YStrong).unwrap();
        assert!(cq_distance_from_uniform(&s, 1).unwrap() < 0.5 - 1e-3);
    }

    #[test]
    fn biased_branch_non_entangled() {
        let a: A = tightness_attack(8, 5, 5, 1, 1, Setting::NonEntangled).unwrap();
        assert_eq!((a.branch, a.l), (Branch::Biased, Some(7)));
        let measured = a.measured_advantage().unwrap();
        assert!(measured > a.predicted_advantage);
        assert!((measured - (a.biased_probability.unwrap() - 0.5)).abs() < 1e-9);
    }

    #[test]
    fn biased_branch_entangled() {
        let a: A = tightness_attack(9, 6, 6, 3, 3, Setting::Entangled).unwrap();
        assert_eq!((a.b, a.l), (2, Some(7)));
        assert!(a.measured_advantage().unwrap() > a.predicted_advantage);
    }

    #[test]
    fn constructed_sources_have_the_promised_entropy() {
        for (n, k, b, setting) in [(8, 5, 1, Setting::NonEntangled), (9, 6, 3, Setting::Entangled), (4, 4, 4, Setting::NonEntangled)] {
            let a: A = tightness_attack(n, k, k, b, b, setting).unwrap();
            assert!(a.x.min_entropy() >= k as f64);
            assert!(a.y.min_entropy() >= k as f64);
            let x = &a.x.support()[0];
            assert_eq!(a.storage.joint(x, x).unwrap().dim(), 1 << (a.b1 + a.b2));
        }
    }

    #[test]
    fn biased_branch_needs_slack_coordinates() {
        assert!(matches!(tightness_attack::<f64>(4, 4, 4, 2, 2, Setting::Entangled), Err(Error::Parameter(_))));
    }

    #[test]
    fn settings_round_trip_through_strings() {
        for s in Setting::ALL {
            assert_eq!(s.to_string().parse::<Setting>().unwrap(), s);
        }
    }
}
