use num_complex::Complex;
use serde::Serialize;

use super::storage::{Flavor, StorageStrategy};
use crate::error::{check_dim, Error};
use crate::gf2::BitVector;
use crate::qsim::{pauli, CMatrix, DensityMatrix};
use crate::scalar::Real;
use crate::Result;

/// Two-bit Pauli label `(b1, b2)` naming `σ_{b1 b2}`.
pub type PauliLabel = (bool, bool);

/// `½((|x| + |y| − |x ⊕ y|) mod 4)` as a bit, from the weights mod 4.
///
/// Equals `x · y` because `|x| + |y| − |x ⊕ y| = 2|x ∧ y|`.
pub fn ip_from_weights(wx: usize, wy: usize, wxor: usize) -> bool {
    (wx % 4 + wy % 4 + 4 - wxor % 4) % 4 == 2
}

fn index_label(i: usize) -> PauliLabel {
    (i & 2 != 0, i & 1 != 0)
}

/// `(σ_a ⊗ σ_b)|Φ⟩`, amplitude `2p + q` equal to `(σ_a σ_bᵀ)[p][q] / √2`.
pub fn pair_state<T: Real>(a: PauliLabel, b: PauliLabel) -> Vec<Complex<T>> {
    let m = pauli::<T>(a.0, a.1).matmul(&pauli::<T>(b.0, b.1).transpose()).expect("2x2");
    let h = T::one() / T::lit(2.0).sqrt();
    (0..4).map(|i| m[(i >> 1, i & 1)] * h).collect()
}

/// Bell basis vector `(σ_c ⊗ I)|Φ⟩`.
pub fn bell_vector<T: Real>(c: PauliLabel) -> Vec<Complex<T>> {
    pair_state(c, (false, false))
}

/// Outcome distribution of a Bell measurement on a two-qubit pure state,
/// indexed by `2 c1 + c2`.
pub fn bell_distribution<T: Real>(psi: &[Complex<T>]) -> Result<[T; 4]> {
    check_dim(4, psi.len())?;
    let mut out = [T::zero(); 4];
    for (i, p) in out.iter_mut().enumerate() {
        let beta = bell_vector::<T>(index_label(i));
        let amp = beta.iter().zip(psi).fold(Complex::new(T::zero(), T::zero()), |acc, (b, s)| acc + b.conj() * s);
        *p = amp.norm_sqr();
    }
    Ok(out)
}

fn decode_pair<T: Real>(psi: &[Complex<T>]) -> Result<PauliLabel> {
    let dist = bell_distribution(psi)?;
    dist.iter()
        .position(|&p| p >= T::one() - T::tol(1e-9))
        .map(index_label)
        .ok_or_else(|| Error::invalid("Bell measurement outcome is not deterministic"))
}

/// Sends two classical bits through one EPR pair: `σ_bits` on Alice's half,
/// then a Bell measurement.
pub fn superdense_roundtrip<T: Real>(bits: [bool; 2]) -> Result<[bool; 2]> {
    let c = decode_pair(&pair_state::<T>((bits[0], bits[1]), (false, false)))?;
    Ok([c.0, c.1])
}

/// Superdense coding of an `n`-bit message over `⌈n/2⌉` pairs.
pub fn superdense_message<T: Real>(msg: &BitVector) -> Result<BitVector> {
    let n = msg.len();
    let mut out = BitVector::zeros(n);
    for i in 0..n.div_ceil(2) {
        let hi = msg.get(2 * i);
        let lo = 2 * i + 1 < n && msg.get(2 * i + 1);
        let [a, b] = superdense_roundtrip::<T>([hi, lo])?;
        out.set(2 * i, a);
        if 2 * i + 1 < n {
            out.set(2 * i + 1, b);
        }
    }
    Ok(out)
}

/// What each party sends in the SMP protocol.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmpTranscript {
    pub alice_paulis: Vec<PauliLabel>,
    pub bob_paulis: Vec<PauliLabel>,
    pub alice_weight: u8,
    pub bob_weight: u8,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmpRun<T> {
    /// Referee output on the most likely measurement record.
    pub output: bool,
    /// Probability that the referee outputs `x · y`.
    pub success_probability: T,
    pub qubits_per_party: usize,
    pub transcript: SmpTranscript,
}

fn paulis_of(v: &BitVector, pairs: usize) -> Vec<PauliLabel> {
    let bit = |i: usize| i < v.len() && v.get(i);
    (0..pairs).map(|i| (bit(2 * i), bit(2 * i + 1))).collect()
}

/// Entangled SMP protocol for inner product with `n/2 + 2` qubits per party.
///
/// Pair `i` carries `σ_{x_{2i} x_{2i+1}}` from Alice and `σ_{y_{2i} y_{2i+1}}`
/// from Bob; the referee Bell-measures every pair, which yields
/// `x_{2i}x_{2i+1} ⊕ y_{2i}y_{2i+1}`, and combines `|x ⊕ y|` with the two
/// weights sent in the clear. Odd `n` is padded with a zero bit. The
/// distribution of the decoded weight is propagated exactly over the pairs.
pub fn smp_entangled_ip<T: Real>(x: &BitVector, y: &BitVector) -> Result<SmpRun<T>> {
    check_dim(x.len(), y.len())?;
    let pairs = x.len().div_ceil(2);
    let alice_paulis = paulis_of(x, pairs);
    let bob_paulis = paulis_of(y, pairs);
    let (wx, wy) = (x.count_ones() % 4, y.count_ones() % 4);

    let mut dist = vec![T::zero(); 2 * pairs + 1];
    dist[0] = T::one();
    for (&a, &b) in alice_paulis.iter().zip(&bob_paulis) {
        let probs = bell_distribution(&pair_state::<T>(a, b))?;
        let mut next = vec![T::zero(); dist.len()];
        for (w, &pw) in dist.iter().enumerate() {
            if pw == T::zero() {
                continue;
            }
            for (c, &pc) in probs.iter().enumerate() {
                let step = c.count_ones() as usize;
                if w + step < next.len() {
                    next[w + step] += pw * pc;
                }
            }
        }
        dist = next;
    }

    let expected = x.dot(y)?;
    let success = dist
        .iter()
        .enumerate()
        .filter(|&(w, _)| ip_from_weights(wx, wy, w) == expected)
        .fold(T::zero(), |acc, (_, &p)| acc + p);
    let likely = dist
        .iter()
        .enumerate()
        .fold((0, T::neg_infinity()), |best, (w, &p)| if p > best.1 { (w, p) } else { best })
        .0;
    Ok(SmpRun {
        output: ip_from_weights(wx, wy, likely),
        success_probability: success,
        qubits_per_party: pairs + 2,
        transcript: SmpTranscript { alice_paulis, bob_paulis, alice_weight: wx as u8, bob_weight: wy as u8 },
    })
}

/// Joint pure state of `k` pairs after Alice applies `σ_{a_i}` and Bob
/// `σ_{b_i}` to their halves of pair `i`.
///
/// Indexed by `(p << k) | q`, with Alice's halves in `p` and Bob's in `q`,
/// half 0 most significant.
pub(crate) fn pairs_state<T: Real>(a: &[PauliLabel], b: &[PauliLabel]) -> Vec<Complex<T>> {
    let k = a.len();
    let factors: Vec<Vec<Complex<T>>> = a.iter().zip(b).map(|(&s, &t)| pair_state(s, t)).collect();
    let mut out = vec![Complex::new(T::zero(), T::zero()); 1 << (2 * k)];
    for (idx, amp) in out.iter_mut().enumerate() {
        let (p, q) = (idx >> k, idx & ((1 << k) - 1));
        let mut z = Complex::new(T::one(), T::zero());
        for (i, f) in factors.iter().enumerate() {
            let shift = k - 1 - i;
            z *= f[(((p >> shift) & 1) << 1) | ((q >> shift) & 1)];
            if z == Complex::new(T::zero(), T::zero()) {
                break;
            }
        }
        *amp = z;
    }
    out
}

/// Appends computational-basis tails `(value, qubits)` to each party's
/// halves of a [`pairs_state`] vector.
pub(crate) fn embed<T: Real>(
    amps: &[Complex<T>],
    k: usize,
    a_tail: (usize, usize),
    b_tail: (usize, usize),
) -> Vec<Complex<T>> {
    let (va, ea) = a_tail;
    let (vb, eb) = b_tail;
    let mut out = vec![Complex::new(T::zero(), T::zero()); 1 << (2 * k + ea + eb)];
    for (idx, &z) in amps.iter().enumerate() {
        let (p, q) = (idx >> k, idx & ((1 << k) - 1));
        let alice = (p << ea) | va;
        let bob = (q << eb) | vb;
        out[(alice << (k + eb)) | bob] = z;
    }
    out
}

/// Bits of `v` at `coords`, padded with zeros to even length.
/// Bits of `v` at `coords`, padded with a zero to even length.
pub(crate) fn restrict(v: &BitVector, coords: &[usize]) -> Vec<bool> {
    let mut out: Vec<bool> = coords.iter().map(|&c| v.get(c)).collect();
    if out.len() % 2 == 1 {
        out.push(false);
    }
    out
}

pub(crate) fn pair_labels(bits: &[bool]) -> Vec<PauliLabel> {
    bits.chunks(2).map(|c| (c[0], c[1])).collect()
}

pub(crate) fn pure_state<T: Real>(psi: &[Complex<T>]) -> DensityMatrix<T> {
    DensityMatrix::trusted(CMatrix::outer(psi, psi))
}

/// Storage of the SMP protocol run on the coordinates `coords` of `n`-bit
/// inputs, padded with `|0⟩` qubits to exactly `(b1, b2)`.
///
/// Each party's register is `[pair halves, weight mod 4 (2 qubits), padding]`.
pub fn smp_storage<T: Real>(n: usize, coords: Vec<usize>, b1: usize, b2: usize) -> Result<StorageStrategy<T>> {
    if coords.iter().any(|&c| c >= n) {
        return Err(Error::param("protocol coordinates out of range"));
    }
    let k = coords.len().div_ceil(2);
    if k + 2 > b1.min(b2) {
        return Err(Error::param(format!(
            "SMP protocol on {} bits needs {} qubits per party, budgets are ({b1}, {b2})",
            coords.len(),
            k + 2
        )));
    }
    if b1 + b2 > 14 {
        return Err(Error::param("SMP storage is limited to b1 + b2 <= 14"));
    }
    let (pad_a, pad_b) = (b1 - k - 2, b2 - k - 2);
    let joint = move |x: &BitVector, y: &BitVector| -> Result<DensityMatrix<T>> {
        check_dim(n, x.len())?;
        check_dim(n, y.len())?;
        let (xs, ys) = (restrict(x, &coords), restrict(y, &coords));
        let amps = pairs_state::<T>(&pair_labels(&xs), &pair_labels(&ys));
        let wx = xs.iter().filter(|b| **b).count() % 4;
        let wy = ys.iter().filter(|b| **b).count() % 4;
        let psi = embed(&amps, k, (wx << pad_a, 2 + pad_a), (wy << pad_b, 2 + pad_b));
        Ok(pure_state(&psi))
    };
    let strategy = StorageStrategy::from_fns(b1, b2, Flavor::Entangled, joint).with_referee(
        "Bell-measure each pair to learn x XOR y on the protocol coordinates, read both weights mod 4, \
         output ((|x|+|y|-|x XOR y|) mod 4)/2",
    );
    Ok(strategy)
}

#[cfg(test)]
mod tests {
    use super::*;

    type R = SmpRun<f64>;

    fn all(n: usize) -> Vec<BitVector> {
        (0..1u64 << n).map(|v| BitVector::from_u64(v, n)).collect()
    }

    #[test]
    fn weight_identity_matches_inner_product() {
        for n in 1..=6 {
            for x in all(n) {
                for y in all(n) {
                    let ip = x.dot(&y).unwrap();
                    let w = x.xor(&y).unwrap().count_ones();
                    assert_eq!(ip_from_weights(x.count_ones(), y.count_ones(), w), ip);
                }
            }
        }
    }

    #[test]
    fn bell_states_are_orthonormal() {
        for i in 0..4 {
            let d = bell_distribution(&bell_vector::<f64>(index_label(i))).unwrap();
            for (j, p) in d.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((p - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_input_outputs_zero() {
        for y in all(4) {
            let run: R = smp_entangled_ip(&BitVector::zeros(4), &y).unwrap();
            assert!(!run.output);
            assert!((run.success_probability - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn two_bit_example() {
        let x = BitVector::from_u64(0b11, 2);
        let run: R = smp_entangled_ip(&x, &x).unwrap();
        assert!(!run.output);
        assert_eq!(run.qubits_per_party, 3);
    }

    #[test]
    fn exhaustive_small_n() {
        for n in [2, 4, 6] {
            for x in all(n) {
                for y in all(n) {
                    let run: R = smp_entangled_ip(&x, &y).unwrap();
                    assert_eq!(run.output, x.dot(&y).unwrap());
                    assert!((run.success_probability - 1.0).abs() < 1e-9);
                    assert_eq!(run.qubits_per_party, n / 2 + 2);
                }
            }
        }
    }

    #[test]
    fn odd_length_is_padded() {
        for x in all(3) {
            for y in all(3) {
                let run: R = smp_entangled_ip(&x, &y).unwrap();
                assert_eq!(run.output, x.dot(&y).unwrap());
                assert_eq!(run.qubits_per_party, 4);
            }
        }
    }

    #[test]
    fn superdense_roundtrips() {
        assert_eq!(superdense_roundtrip::<f64>([false, false]).unwrap(), [false, false]);
        for i in 0..4 {
            let bits = [i & 2 != 0, i & 1 != 0];
            assert_eq!(superdense_roundtrip::<f64>(bits).unwrap(), bits);
        }
        for n in 1..=8 {
            for m in all(n) {
                assert_eq!(superdense_message::<f64>(&m).unwrap(), m);
            }
        }
    }

    #[test]
    fn superdense_in_single_precision() {
        for i in 0..4 {
            let bits = [i & 2 != 0, i & 1 != 0];
            assert_eq!(superdense_roundtrip::<f32>(bits).unwrap(), bits);
        }
    }

    #[test]
    fn pairs_state_matches_kronecker_product() {
        let a = [(true, false), (true, true)];
        let b = [(false, true), (true, false)];
        let psi = pairs_state::<f64>(&a, &b);
        let p0 = pair_state::<f64>(a[0], b[0]);
        let p1 = pair_state::<f64>(a[1], b[1]);
        for (idx, z) in psi.iter().enumerate() {
            let (p, q) = (idx >> 2, idx & 3);
            let i0 = (((p >> 1) & 1) << 1) | ((q >> 1) & 1);
            let i1 = ((p & 1) << 1) | (q & 1);
            assert!((z - p0[i0] * p1[i1]).norm() < 1e-12);
        }
    }

    #[test]
    fn smp_storage_respects_budgets() {
        let s = smp_storage::<f64>(4, vec![1, 2], 4, 3).unwrap();
        let x = BitVector::from_u64(0b0110, 4);
        assert_eq!(s.joint(&x, &x).unwrap().dim(), 1 << 7);
        assert!(smp_storage::<f64>(4, vec![0, 1, 2], 3, 3).is_err());
    }
}
