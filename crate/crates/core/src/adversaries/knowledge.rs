use std::collections::HashMap;

use serde::Serialize;

use super::smp::ip_from_weights;
use crate::error::Error;
use crate::Result;

/// Largest `n` for which all `2^{3n}` triples are enumerated.
pub const MAX_KNOWLEDGE_N: usize = 8;

/// `(x ⊕ r, |x| mod 4, y ⊕ r, |y| mod 4)`.
type BothRecords = (u64, u8, u64, u8);

/// Outcome of the weight-mod-4 attack on uniform sources.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KnowledgeReport {
    pub n: usize,
    /// Number of `(x, y, r)` triples checked.
    pub triples: u64,
    /// Triples on which the referee output equals `x · y`.
    pub referee_correct: u64,
    /// `H_g(X | both parties' storage)`.
    pub combined_guessing_entropy: f64,
    /// `H_g(X | Alice's storage)`; Bob's storage alone is independent of `X`.
    pub alice_guessing_entropy: f64,
}

impl KnowledgeReport {
    pub fn referee_always_correct(&self) -> bool {
        self.referee_correct == self.triples
    }
}

/// Alice's storage `(x ⊕ r, |x| mod 4)`.
pub fn alice_record(x: u64, r: u64) -> (u64, u8) {
    (x ^ r, (x.count_ones() % 4) as u8)
}

/// Referee: `x ⊕ y` from the two masked strings, then
/// `½((|x| + |y| − |x ⊕ y|) mod 4)`.
pub fn knowledge_referee(alice: (u64, u8), bob: (u64, u8)) -> bool {
    let xor = (alice.0 ^ bob.0).count_ones() as usize;
    ip_from_weights(alice.1 as usize, bob.1 as usize, xor)
}

/// `−log2 Σ_s max_x P(x, s)` from joint counts over a uniform space of
/// `total` outcomes.
fn guessing_entropy<K: std::hash::Hash + Eq>(counts: HashMap<(K, u64), u64>, total: u64) -> f64 {
    let mut best: HashMap<K, u64> = HashMap::new();
    for ((s, _), c) in counts {
        let e = best.entry(s).or_insert(0);
        *e = (*e).max(c);
    }
    let hit: u64 = best.values().sum();
    -((hit as f64) / (total as f64)).log2()
}

/// Uniform `x, y, r` on `n` bits; Alice stores `(x ⊕ r, |x| mod 4)`, Bob
/// `(y ⊕ r, |y| mod 4)`. Checks the referee on every triple and computes the
/// guessing entropy of `X` from the exact posterior over all storage values.
pub fn knowledge_counterexample(n: usize) -> Result<KnowledgeReport> {
    if !(3..=MAX_KNOWLEDGE_N).contains(&n) {
        return Err(Error::param(format!("need 3 <= n <= {MAX_KNOWLEDGE_N}, got {n}")));
    }
    let size = 1u64 << n;
    let mut correct = 0;
    let mut combined: HashMap<(BothRecords, u64), u64> = HashMap::new();
    let mut alice: HashMap<((u64, u8), u64), u64> = HashMap::new();
    for x in 0..size {
        for y in 0..size {
            let ip = (x & y).count_ones() % 2 == 1;
            for r in 0..size {
                let a = alice_record(x, r);
                let b = alice_record(y, r);
                if knowledge_referee(a, b) == ip {
                    correct += 1;
                }
                *combined.entry(((a.0, a.1, b.0, b.1), x)).or_insert(0) += 1;
                *alice.entry((a, x)).or_insert(0) += 1;
            }
        }
    }
    let triples = size * size * size;
    Ok(KnowledgeReport {
        n,
        triples,
        referee_correct: correct,
        combined_guessing_entropy: guessing_entropy(combined, triples),
        alice_guessing_entropy: guessing_entropy(alice, triples),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Given the combined storage, `x` is pinned down by the weight classes
    /// of `x` and `x ⊕ c` with `c = (x ⊕ r) ⊕ (y ⊕ r)`; the optimal guess
    /// succeeds with probability `#{feasible (c, |x| mod 4, |x⊕c| mod 4)} / 4^n`.
    fn combined_oracle(n: usize) -> f64 {
        let mut feasible = std::collections::HashSet::new();
        for c in 0..1u64 << n {
            for x in 0..1u64 << n {
                feasible.insert((c, x.count_ones() % 4, (x ^ c).count_ones() % 4));
            }
        }
        -((feasible.len() as f64) / 4f64.powi(n as i32)).log2()
    }

    #[test]
    fn referee_is_always_right() {
        for n in [3, 4, 6] {
            let rep = knowledge_counterexample(n).unwrap();
            assert_eq!(rep.triples, 1 << (3 * n));
            assert!(rep.referee_always_correct());
        }
    }

    #[test]
    fn alice_storage_leaves_n_minus_two() {
        for n in [3, 4, 6] {
            let rep = knowledge_counterexample(n).unwrap();
            assert!((rep.alice_guessing_entropy - (n as f64 - 2.0)).abs() < 1e-9);
        }
    }

    #[test]
    fn combined_storage_matches_class_oracle() {
        for n in [3, 4, 6] {
            let rep = knowledge_counterexample(n).unwrap();
            assert!((rep.combined_guessing_entropy - combined_oracle(n)).abs() < 1e-9);
            assert!(rep.combined_guessing_entropy >= n as f64 - 4.0);
            assert!(rep.combined_guessing_entropy <= rep.alice_guessing_entropy);
        }
    }

    #[test]
    fn rejects_tiny_n() {
        assert!(knowledge_counterexample(2).is_err());
    }
}
