//! Closed-form parameter calculators.
//!
//! All logarithms are base 2 and `L = log(1/ε)` is used unrounded. The
//! constants hidden in `Ω(log³(n/ε))` and `O(1)` are explicit
//! ([`ParamSet::c_poly`], [`ParamSet::c_o1`]) and echoed in every report.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::extractors::Side;
use crate::Result;

/// Source, storage and error parameters shared by the calculators.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamSet {
    pub n: u64,
    pub k1: u64,
    pub k2: u64,
    #[serde(default)]
    pub b1: u64,
    #[serde(default)]
    pub b2: u64,
    #[serde(default = "default_m")]
    pub m: u64,
    pub eps: f64,
    /// Multiplier of `log³(n/ε)` in the side conditions.
    #[serde(default = "default_c_poly")]
    pub c_poly: f64,
    /// Additive constant subtracted from output lengths.
    #[serde(default)]
    pub c_o1: f64,
}

fn default_m() -> u64 {
    1
}

fn default_c_poly() -> f64 {
    1.0
}

impl ParamSet {
    /// Storage-free parameters with `m = 1`, `c_poly = 1`, `c_o1 = 0`.
    pub fn new(n: u64, k1: u64, k2: u64, eps: f64) -> Result<Self> {
        let p = Self { n, k1, k2, b1: 0, b2: 0, m: 1, eps, c_poly: 1.0, c_o1: 0.0 };
        p.validate()?;
        Ok(p)
    }

    pub fn with_storage(mut self, b1: u64, b2: u64) -> Self {
        self.b1 = b1;
        self.b2 = b2;
        self
    }

    pub fn with_constants(mut self, c_poly: f64, c_o1: f64) -> Self {
        self.c_poly = c_poly;
        self.c_o1 = c_o1;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k1 > self.n || self.k2 > self.n {
            return Err(Error::param(format!("need k1, k2 <= n, got n={}, k1={}, k2={}", self.n, self.k1, self.k2)));
        }
        if self.m == 0 {
            return Err(Error::param("m must be at least 1"));
        }
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(Error::param(format!("eps must be positive, got {}", self.eps)));
        }
        if !(self.c_poly >= 0.0 && self.c_o1.is_finite()) {
            return Err(Error::param("constants must be finite and c_poly non-negative"));
        }
        Ok(())
    }

    /// `log(1/ε)`.
    pub fn log_inv_eps(&self) -> f64 {
        log_inv(self.eps)
    }

    /// `c_poly · log³(n/ε)`.
    pub fn poly_threshold(&self) -> f64 {
        self.c_poly * ((self.n as f64).log2() + self.log_inv_eps()).powi(3)
    }

    fn sum_k(&self) -> f64 {
        (self.k1 + self.k2) as f64
    }
}

fn log_inv(eps: f64) -> f64 {
    -eps.log2()
}

fn storage_factor(entangled: bool) -> f64 {
    if entangled {
        2.0
    } else {
        1.0
    }
}

/// Outcome of evaluating one inequality.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub condition: String,
    pub satisfied: bool,
    /// `lhs − rhs` of the inequality.
    pub slack: f64,
    /// Derived `ε` or output length `m`.
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub side: Option<Side>,
    pub c_poly: f64,
    pub c_o1: f64,
}

/// `2^{-(k1+k2-f·b-n+2)/2}` with `f = 2` against entangled storage, `1`
/// otherwise. Not clamped; see [`reported_bias`].
pub fn ip_bias_bound(p: &ParamSet, b: u64, entangled: bool) -> f64 {
    let e = p.sum_k() - storage_factor(entangled) * b as f64 - p.n as f64 + 2.0;
    (-e / 2.0).exp2()
}

/// A bias bound clamped to `[0, ½]`.
pub fn reported_bias(bound: f64) -> f64 {
    bound.clamp(0.0, 0.5)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OneBitVariant {
    /// Plain extractor: storage enters through `min(b1, b2)`.
    WeakMin,
    /// Superstrong extractor: storage enters through `max(b1, b2)`.
    SuperstrongMax,
}

/// `k1 + k2 − f·sel(b1, b2) >= n − 2 + 2 log(1/ε)`; the derived value is the
/// smallest `ε` for which the inequality holds.
pub fn one_bit_condition(p: &ParamSet, variant: OneBitVariant, entangled: bool) -> BoundReport {
    let b = match variant {
        OneBitVariant::WeakMin => p.b1.min(p.b2),
        OneBitVariant::SuperstrongMax => p.b1.max(p.b2),
    };
    let lhs = p.sum_k() - storage_factor(entangled) * b as f64;
    let rhs = p.n as f64 - 2.0 + 2.0 * p.log_inv_eps();
    let slack = lhs - rhs;
    BoundReport {
        condition: format!(
            "one-bit {} {}",
            match variant {
                OneBitVariant::WeakMin => "weak-min",
                OneBitVariant::SuperstrongMax => "superstrong-max",
            },
            if entangled { "entangled" } else { "non-entangled" }
        ),
        satisfied: slack >= 0.0,
        slack,
        value: ip_bias_bound(p, b, entangled),
        side: None,
        c_poly: p.c_poly,
        c_o1: p.c_o1,
    }
}

/// `Pr[guess = X] <= 2^{-(k − f·b)}`, at most 1.
pub fn ns_guess_bound(k: u64, b: u64, entangled: bool) -> f64 {
    let e = k as f64 - storage_factor(entangled) * b as f64;
    (-e).exp2().min(1.0)
}

/// Largest `m` for which DEOR is a strong extractor with the given side
/// exposed, or 0.
///
/// Storage mode: `k1 + k2 − f·b_opp >= 2m + n − 2 + 2 log(1/ε)` where
/// `b_opp` is the storage of the side that is not exposed. Knowledge mode:
/// `k1 + k2 >= 6m + n − 2 + 6 log(1/ε)`.
pub fn deor_strong_output_len(p: &ParamSet, side: Side, entangled: bool, knowledge: bool) -> u64 {
    let l = p.log_inv_eps();
    let m = if knowledge {
        (p.sum_k() - p.n as f64 + 2.0 - 6.0 * l) / 6.0
    } else {
        let b_opp = match side {
            Side::X => p.b2,
            Side::Y => p.b1,
        };
        (p.sum_k() - storage_factor(entangled) * b_opp as f64 - p.n as f64 + 2.0 - 2.0 * l) / 2.0
    };
    if m >= 1.0 {
        m.floor() as u64
    } else {
        0
    }
}

/// `d + k − b − 8 log(k − b) − 8 log(1/ε) − c_o1`: output of the seeded
/// extractor secure against `b` qubits of storage.
pub fn seeded_output_len(d: f64, k: f64, b: f64, eps: f64, c_o1: f64) -> f64 {
    let kb = k - b;
    if kb < 1.0 {
        return f64::NEG_INFINITY;
    }
    d + kb - 8.0 * kb.log2() - 8.0 * log_inv(eps) - c_o1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Theorem {
    /// Non-entangled storage.
    Thm1,
    /// Entangled storage.
    Thm2,
    /// Guessing-entropy adversaries.
    Thm3,
    /// Non-entangled storage via the classical-to-quantum transfer.
    Appendix,
}

impl Theorem {
    pub const ALL: [Theorem; 4] = [Theorem::Thm1, Theorem::Thm2, Theorem::Thm3, Theorem::Appendix];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::Thm1 => "thm1",
            Theorem::Thm2 => "thm2",
            Theorem::Thm3 => "thm3",
            Theorem::Appendix => "appendix",
        }
    }
}

impl std::str::FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::param(format!("unknown theorem {s:?}")))
    }
}

/// `(output length, side-condition lhs)` of one side's composition;
/// `b_own`/`b_opp` are the storage of the side fed to the seeded extractor
/// and of the other side.
fn composed_side(p: &ParamSet, theorem: Theorem, k_own: f64, b_own: f64, b_opp: f64) -> (f64, f64) {
    let (n, l, sk) = (p.n as f64, p.log_inv_eps(), p.sum_k());
    match theorem {
        Theorem::Thm1 => {
            let strong = 0.5 * (sk - b_opp - n - 2.0 * l);
            (strong + seeded_output_len(0.0, k_own, b_own, p.eps, p.c_o1), sk - b_opp)
        }
        Theorem::Thm2 => {
            let strong = 0.5 * (sk - 2.0 * b_opp - n - 2.0 * l);
            (strong + seeded_output_len(0.0, k_own, b_own + b_opp, p.eps, p.c_o1), sk - 2.0 * b_opp)
        }
        Theorem::Thm3 => {
            let strong = (sk - n - 6.0 * l) / 6.0;
            (strong + seeded_output_len(0.0, k_own, 0.0, p.eps, p.c_o1), sk)
        }
        Theorem::Appendix => {
            let strong = sk - 10.0 * b_opp - n - 4.0 - 3.0 * l;
            (strong + seeded_output_len(0.0, k_own, b_own, p.eps, p.c_o1), sk - 10.0 * b_opp)
        }
    }
}

/// Output length of DEOR composed with a seeded extractor.
///
/// Both the X-side (seeded extractor on `X`) and Y-side compositions are
/// evaluated; the report carries the longer output among the sides whose
/// side condition `lhs > n + c_poly·log³(n/ε)` holds, or the longer output
/// overall if neither holds. `slack` is that side's `lhs − rhs`.
pub fn composed_output_len(p: &ParamSet, theorem: Theorem) -> BoundReport {
    let rhs = p.n as f64 + p.poly_threshold();
    let sides = [
        (Side::X, composed_side(p, theorem, p.k1 as f64, p.b1 as f64, p.b2 as f64)),
        (Side::Y, composed_side(p, theorem, p.k2 as f64, p.b2 as f64, p.b1 as f64)),
    ];
    let feasible = |&(_, (m, lhs)): &(Side, (f64, f64))| lhs - rhs > 0.0 && m.is_finite();
    let pick = |cands: Vec<(Side, (f64, f64))>| {
        cands.into_iter().fold(None, |best: Option<(Side, (f64, f64))>, c| match best {
            Some(b) if b.1 .0 >= c.1 .0 => Some(b),
            _ => Some(c),
        })
    };
    let chosen = pick(sides.iter().copied().filter(feasible).collect())
        .or_else(|| pick(sides.to_vec()))
        .expect("two sides");
    let (side, (m, lhs)) = chosen;
    let slack = lhs - rhs;
    BoundReport {
        condition: format!("{} composition", theorem.name()),
        satisfied: slack > 0.0 && m.is_finite(),
        slack,
        value: if m.is_finite() { m } else { 0.0 },
        side: Some(side),
        c_poly: p.c_poly,
        c_o1: p.c_o1,
    }
}

/// Smallest `b2` in `0..=k2` at which the non-entangled composition is at
/// least as long as the appendix composition (with `b1` as given), or
/// `None` if the appendix stays ahead.
pub fn appendix_crossover(p: &ParamSet) -> Option<u64> {
    (0..=p.k2).find(|&b2| {
        let q = ParamSet { b2, ..*p };
        let thm1 = composed_side(&q, Theorem::Thm1, q.k1 as f64, q.b1 as f64, b2 as f64).0;
        let app = composed_side(&q, Theorem::Appendix, q.k1 as f64, q.b1 as f64, b2 as f64).0;
        thm1 >= app
    })
}

/// Transferred `(k1, k2, ε)` triple.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transfer {
    pub k1: f64,
    pub k2: f64,
    pub eps: f64,
    /// `ε' > ½`.
    pub vacuous: bool,
}

impl Transfer {
    fn new(k1: f64, k2: f64, eps: f64) -> Self {
        Self { k1, k2, eps, vacuous: eps > 0.5 }
    }
}

/// A classical X-strong `(k1, k2, ε)` extractor is an X-strong
/// `(k1, k2 + b2 + log(1/ε), 4·2^{3 b2}·ε)` extractor against `b2` qubits of
/// non-entangled storage.
pub fn kt_storage_transfer(k1: u64, k2: u64, b2: u64, eps: f64) -> Transfer {
    Transfer::new(k1 as f64, (k2 + b2) as f64 + log_inv(eps), 4.0 * (3.0 * b2 as f64).exp2() * eps)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KnowledgeVariant {
    Weak,
    XStrong,
}

/// Transfer to guessing-entropy adversaries: weak
/// `(k1 + log(1/ε), k2 + log(1/ε), √(3ε/2))`, X-strong
/// `(k1, k2 + log(1/ε), √ε)`.
pub fn knowledge_transfer(k1: u64, k2: u64, eps: f64, variant: KnowledgeVariant) -> Transfer {
    let l = log_inv(eps);
    match variant {
        KnowledgeVariant::Weak => Transfer::new(k1 as f64 + l, k2 as f64 + l, (1.5 * eps).sqrt()),
        KnowledgeVariant::XStrong => Transfer::new(k1 as f64, k2 as f64 + l, eps.sqrt()),
    }
}
