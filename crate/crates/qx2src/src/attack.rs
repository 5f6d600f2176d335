//! Adversary constructions behind `qx2src attack`.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use qx2src_core::adversaries::{
    knowledge_counterexample, smp_entangled_ip, superdense_message, superdense_roundtrip, tightness_attack, Branch,
    Setting,
};
use qx2src_core::bounds::{one_bit_condition, reported_bias, OneBitVariant, ParamSet};
use qx2src_core::extractors::e_ip;
use qx2src_core::BitVector;

use crate::config::AttackConfig;
use crate::error::{HarnessError, Result};
use crate::report::{Record, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum AttackKind {
    /// Entangled SMP protocol computing `x · y` exactly.
    Smp,
    /// Superdense coding of 2-bit and n-bit messages.
    Superdense,
    /// Storage and sources breaking inner product at the bound.
    Tightness,
    /// Shared-randomness storage against a guessing-entropy assumption.
    Knowledge,
}

impl AttackKind {
    pub fn name(self) -> &'static str {
        match self {
            AttackKind::Smp => "smp",
            AttackKind::Superdense => "superdense",
            AttackKind::Tightness => "tightness",
            AttackKind::Knowledge => "knowledge",
        }
    }

    fn default_n(self) -> usize {
        match self {
            AttackKind::Smp | AttackKind::Knowledge | AttackKind::Tightness => 4,
            AttackKind::Superdense => 8,
        }
    }
}

pub const MAX_SMP_N: usize = 10;
pub const MAX_SUPERDENSE_N: usize = 16;

pub fn cmd_attack(kind: AttackKind, cfg: &AttackConfig) -> Result<Report> {
    let started = Instant::now();
    let n = cfg.n.unwrap_or(kind.default_n());
    let records = match kind {
        AttackKind::Smp => smp(n, cfg)?,
        AttackKind::Superdense => superdense(n)?,
        AttackKind::Tightness => tightness(n, cfg)?,
        AttackKind::Knowledge => knowledge(n, cfg)?,
    };
    Ok(Report::new("attack", kind.name(), cfg.seed, cfg, records, started))
}

fn all_inputs(n: usize) -> Vec<BitVector> {
    (0..1u64 << n).map(|v| BitVector::from_u64(v, n)).collect()
}

fn smp(n: usize, cfg: &AttackConfig) -> Result<Vec<Record>> {
    if !(1..=MAX_SMP_N).contains(&n) {
        return Err(HarnessError::usage(format!("smp search needs 1 <= n <= {MAX_SMP_N}, got {n}")));
    }
    let inputs = all_inputs(n);
    let runs = inputs
        .par_iter()
        .map(|x| {
            inputs
                .iter()
                .map(|y| {
                    let run = smp_entangled_ip::<f64>(x, y)?;
                    Ok((run.output == e_ip(x, y)?, (1.0 - run.success_probability).abs(), run.qubits_per_party))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .concat();
    let wrong = runs.iter().filter(|r| !r.0).count();
    let worst = runs.iter().map(|r| r.1).fold(0.0, f64::max);
    let qubits: Vec<usize> = runs.iter().map(|r| r.2).collect();
    let expected = n.div_ceil(2) + 2;
    let uniform = qubits.iter().all(|q| *q == qubits[0]);
    Ok(vec![
        Record::equal(format!("smp referee output differs from x.y, n={n}"), wrong as f64, 0.0, 0.0)
            .with_note(format!("{} input pairs", runs.len())),
        Record::at_most("smp success probability deficit", worst, 0.0, cfg.equality_tol),
        Record::equal("smp qubits per party", if uniform { qubits[0] as f64 } else { f64::NAN }, expected as f64, 0.0)
            .with_note(format!("n/2 + 2 = {expected}")),
    ])
}

fn superdense(n: usize) -> Result<Vec<Record>> {
    if !(1..=MAX_SUPERDENSE_N).contains(&n) {
        return Err(HarnessError::usage(format!("superdense run needs 1 <= n <= {MAX_SUPERDENSE_N}, got {n}")));
    }
    let mut two_bit = 0;
    for m in 0..4u8 {
        let bits = [m & 1 == 1, m & 2 == 2];
        two_bit += (superdense_roundtrip::<f64>(bits)? != bits) as usize;
    }
    let mut out = vec![Record::equal("superdense 2-bit messages not recovered", two_bit as f64, 0.0, 0.0)];
    for len in 1..=n {
        let wrong = all_inputs(len)
            .par_iter()
            .map(|msg| Ok((superdense_message::<f64>(msg)? != *msg) as usize))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .sum::<usize>();
        out.push(
            Record::equal(format!("superdense {len}-bit messages not recovered"), wrong as f64, 0.0, 0.0)
                .with_note(format!("{} pairs", len.div_ceil(2))),
        );
    }
    Ok(out)
}

fn tightness(n: usize, cfg: &AttackConfig) -> Result<Vec<Record>> {
    let (k1, k2) = (cfg.k1.unwrap_or(n), cfg.k2.unwrap_or(n));
    let (b1, b2) = (cfg.b1.unwrap_or(n), cfg.b2.unwrap_or(n));
    let attack = tightness_attack::<f64>(n, k1, k2, b1, b2, cfg.setting)?;
    let measured = attack.measured_advantage()?;
    let mut out = Vec::new();
    let label = format!("{} n={n} k=({k1},{k2}) b=({b1},{b2}) delta={} revealed={}", cfg.setting, attack.delta, attack.b);
    match attack.branch {
        Branch::Exact => out.push(Record::equal(format!("exact-branch advantage, {label}"), measured, 0.5, cfg.equality_tol)),
        Branch::Biased => out.push(
            Record::above(format!("biased-branch advantage over prediction, {label}"), measured, attack.predicted_advantage)
                .with_note(format!(
                    "l={}, Pr[x.y=0]={}",
                    attack.l.unwrap_or(0),
                    attack.biased_probability.unwrap_or(f64::NAN)
                )),
        ),
    }
    out.push(Record::at_least("min-entropy of X", attack.x.min_entropy(), k1 as f64, cfg.equality_tol));
    out.push(Record::at_least("min-entropy of Y", attack.y.min_entropy(), k2 as f64, cfg.equality_tol));
    out.push(Record::flag(
        "storage within budget",
        attack.storage.b1() <= b1 && attack.storage.b2() <= b2,
    ));
    let p = ParamSet::new(n as u64, k1 as u64, k2 as u64, 0.5)?.with_storage(b1 as u64, b2 as u64);
    let (variant, entangled) = match cfg.setting {
        Setting::Entangled => (OneBitVariant::WeakMin, true),
        Setting::NonEntangled => (OneBitVariant::WeakMin, false),
        Setting::SuperstrongEntangled => (OneBitVariant::SuperstrongMax, true),
        Setting::SuperstrongNonEntangled => (OneBitVariant::SuperstrongMax, false),
    };
    let proven = reported_bias(one_bit_condition(&p, variant, entangled).value);
    out.push(Record::at_most("advantage within the proven bias bound", measured, proven, cfg.inequality_tol));
    Ok(out)
}

fn knowledge(n: usize, cfg: &AttackConfig) -> Result<Vec<Record>> {
    let r = knowledge_counterexample(n)?;
    let target = n as f64 - 2.0;
    Ok(vec![
        Record::equal("referee errors", (r.triples - r.referee_correct) as f64, 0.0, 0.0)
            .with_note(format!("{} (x, y, r) triples", r.triples)),
        Record::equal(format!("H_g(X | combined storage) = n - 2, n={n}"), r.combined_guessing_entropy, target, cfg.equality_tol),
        Record::equal(format!("H_g(X | Alice's storage) = n - 2, n={n}"), r.alice_guessing_entropy, target, cfg.equality_tol),
        Record::at_least(
            format!("H_g(X | combined storage) >= n - 4, n={n}"),
            r.combined_guessing_entropy,
            n as f64 - 4.0,
            cfg.inequality_tol,
        ),
    ])
}
