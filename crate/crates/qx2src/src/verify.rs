//! Seeded property suites behind `qx2src verify`.

use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use qx2src_core::adversaries::{random_storage, Flavor};
use qx2src_core::bounds::{ip_bias_bound, ParamSet};
use qx2src_core::extractors::{FlatSource, InnerProduct};
use qx2src_core::gf2::{deor_matrices, subset_matrix};
use qx2src_core::qsim::random::{random_cq_state, random_density, random_hermitian, trial_rng};
use qx2src_core::qsim::{
    boolean_reduce, character_norm, cq_distance_from_uniform, extractor_output_state, guess_success,
    helstrom_advantage, hermitian_eigenvalues, kt_reduction_check, pgm, renner_norm_check, xor_lemma_check, Label,
    OutputMode,
};
use qx2src_core::{BitVector, CqState};

use crate::config::VerifyConfig;
use crate::error::Result;
use crate::report::{Record, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// Full rank of every DEOR subset sum.
    Matrices,
    /// XOR inequality and the Boolean-reduction equality.
    Xor,
    /// Quantum-to-PGM reduction for one Boolean function.
    Kt,
    /// Weighted trace-norm inequality.
    Renner,
    /// Inner product against random bounded storage.
    Security,
    /// PGM completeness and the Helstrom sandwich.
    Pgm,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [Suite::Matrices, Suite::Xor, Suite::Kt, Suite::Renner, Suite::Security, Suite::Pgm];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Matrices => "matrices",
            Suite::Xor => "xor",
            Suite::Kt => "kt",
            Suite::Renner => "renner",
            Suite::Security => "security",
            Suite::Pgm => "pgm",
            Suite::All => "all",
        }
    }

    fn default_trials(self) -> usize {
        match self {
            Suite::Matrices => 10_000,
            Suite::Xor => 1_000,
            Suite::Kt => 500,
            Suite::Renner => 200,
            Suite::Security | Suite::Pgm => 100,
            Suite::All => 0,
        }
    }

    /// Keeps the RNG streams of different suites apart.
    fn stream_base(self) -> u64 {
        (Suite::EACH.iter().position(|s| *s == self).unwrap_or(7) as u64 + 1) << 48
    }
}

pub fn cmd_verify(suite: Suite, cfg: &VerifyConfig) -> Result<Report> {
    let started = Instant::now();
    let records = run_suite(suite, cfg)?;
    Ok(Report::new("verify", suite.name(), cfg.seed, cfg, records, started))
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<Vec<Record>> {
    match suite {
        Suite::All => {
            let mut all = Vec::new();
            for s in Suite::EACH {
                all.extend(run_suite(s, cfg)?);
            }
            Ok(all)
        }
        Suite::Matrices => matrices(cfg),
        Suite::Xor => xor(cfg),
        Suite::Kt => kt(cfg),
        Suite::Renner => renner(cfg),
        Suite::Security => security(cfg),
        Suite::Pgm => pgm_suite(cfg),
    }
}

struct Trials {
    suite: Suite,
    seed: u64,
    count: usize,
}

impl Trials {
    fn new(suite: Suite, cfg: &VerifyConfig) -> Self {
        Self { suite, seed: cfg.seed, count: cfg.trials.unwrap_or_else(|| suite.default_trials()) }
    }

    /// Runs `f` on each trial's own RNG, in parallel, keeping trial order.
    fn run<T: Send>(&self, offset: u64, f: impl Fn(&mut rand_chacha::ChaCha8Rng) -> Result<T> + Sync) -> Result<Vec<T>> {
        let base = self.suite.stream_base() + offset;
        (0..self.count as u64)
            .into_par_iter()
            .map(|i| f(&mut trial_rng(self.seed, base + i)))
            .collect()
    }
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

fn random_nonzero(n: usize, rng: &mut impl Rng) -> BitVector {
    loop {
        let bits: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
        let v = BitVector::from_bits(&bits).expect("n > 0");
        if !v.is_zero() {
            return v;
        }
    }
}

fn random_truth_table(m: usize, rng: &mut impl Rng) -> u64 {
    rng.gen::<u64>() & ((1u64 << (1 << m)) - 1)
}

fn eval_table(table: u64) -> impl Fn(&Label) -> bool {
    move |l: &Label| (table >> l.value) & 1 == 1
}

fn random_shape(rng: &mut impl Rng) -> (usize, usize) {
    (rng.gen_range(1..=3), rng.gen_range(0..=3))
}

fn matrices(cfg: &VerifyConfig) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    for n in 1..=cfg.max_exhaustive_n {
        let mats = deor_matrices(n, n)?;
        let defective = (1u64..1 << n)
            .into_par_iter()
            .map(|mask| Ok(!subset_matrix(&mats, &BitVector::from_u64(mask, n))?.is_full_rank()))
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .filter(|d| *d)
            .count();
        out.push(
            Record::equal(format!("deor subsets exhaustive n={n}"), defective as f64, 0.0, 0.0)
                .with_note(format!("{} subsets", (1u64 << n) - 1)),
        );
    }
    let trials = Trials::new(Suite::Matrices, cfg);
    for &n in &cfg.random_ns {
        let mats = deor_matrices(n, n)?;
        let defective = trials
            .run((n as u64) << 32, |rng| Ok(!subset_matrix(&mats, &random_nonzero(n, rng))?.is_full_rank()))?
            .into_iter()
            .filter(|d| *d)
            .count();
        out.push(
            Record::equal(format!("deor subsets random n={n}"), defective as f64, 0.0, 0.0)
                .with_note(format!("{} subsets", trials.count)),
        );
    }
    Ok(out)
}

fn xor(cfg: &VerifyConfig) -> Result<Vec<Record>> {
    let trials = Trials::new(Suite::Xor, cfg);
    let gaps = trials.run(0, |rng| {
        let (m, d) = random_shape(rng);
        let r = xor_lemma_check(&random_cq_state::<f64, _>(m, d, rng), m)?;
        Ok(r.lhs - r.rhs)
    })?;
    let claim = Trials { count: cfg.claim_trials, ..trials };
    let diffs = claim.run(1 << 32, |rng| {
        let (m, d) = random_shape(rng);
        let s: CqState = random_cq_state(m, d, rng);
        let f = eval_table(random_truth_table(m, rng));
        let reduced = cq_distance_from_uniform(&boolean_reduce(&s, &f), 1)?;
        Ok((reduced - character_norm(&s, &f)?).abs())
    })?;
    Ok(vec![
        Record::at_most("xor lemma: squared distance minus weighted character sum", max_of(gaps), 0.0, cfg.inequality_tol)
            .with_note(format!("{} cq-states, m, d <= 3", trials.count)),
        Record::at_most("boolean reduction equals character norm", max_of(diffs), 0.0, cfg.equality_tol)
            .with_note(format!("{} instances", claim.count)),
    ])
}

fn kt(cfg: &VerifyConfig) -> Result<Vec<Record>> {
    let trials = Trials::new(Suite::Kt, cfg);
    let gaps = trials.run(0, |rng| {
        let (m, d) = random_shape(rng);
        let s: CqState = random_cq_state(m, d, rng);
        let r = kt_reduction_check(&s, eval_table(random_truth_table(m, rng)))?;
        Ok(r.lhs - r.rhs)
    })?;
    Ok(vec![Record::at_most("kt reduction: lhs minus sqrt(classical / 2)", max_of(gaps), 0.0, cfg.inequality_tol)
        .with_note(format!("{} cq-states with random Boolean f", trials.count))])
}

fn renner(cfg: &VerifyConfig) -> Result<Vec<Record>> {
    let trials = Trials::new(Suite::Renner, cfg);
    let gaps = trials.run(0, |rng| {
        let dim = 1 << rng.gen_range(0..=3);
        let s = random_hermitian::<f64, _>(dim, rng);
        let sigma = random_density::<f64, _>(dim, rng);
        let (lhs, rhs) = renner_norm_check(&s, sigma.matrix())?;
        Ok(lhs - rhs)
    })?;
    Ok(vec![Record::at_most("weighted trace-norm inequality", max_of(gaps), 0.0, cfg.inequality_tol)
        .with_note(format!("{} instances", trials.count))])
}

fn security(cfg: &VerifyConfig) -> Result<Vec<Record>> {
    let (n, k, b) = (cfg.n, cfg.k, cfg.b);
    let p = ParamSet::new(n as u64, k as u64, k as u64, 0.5)?;
    let trials = Trials::new(Suite::Security, cfg);
    let mut out = Vec::new();
    for (ix, flavor) in [Flavor::Product, Flavor::Classical, Flavor::Entangled].into_iter().enumerate() {
        let entangled = flavor == Flavor::Entangled;
        let bound = ip_bias_bound(&p, b as u64, entangled);
        let worst = trials.run((ix as u64) << 32, |rng| {
            let xs = FlatSource::random(n, k, rng)?;
            let ys = FlatSource::random(n, k, rng)?;
            let mut worst = 0.0f64;
            for _ in 0..cfg.strategies {
                let storage = random_storage::<f64>(n, b, b, flavor, rng.gen())?;
                let s = extractor_output_state(&InnerProduct::new(), &xs, &ys, &storage, OutputMode::Weak)?;
                worst = worst.max(cq_distance_from_uniform(&s, 1)?);
            }
            Ok(worst)
        })?;
        out.push(
            Record::at_most(format!("inner product vs {flavor} storage n={n} k={k} b={b}"), max_of(worst), bound, cfg.inequality_tol)
                .with_note(format!(
                    "{} source pairs x {} strategies; {} bound",
                    trials.count,
                    cfg.strategies,
                    if entangled { "entangled" } else { "non-entangled" }
                )),
        );
    }
    Ok(out)
}

/// `p1 + tr(p0 ρ0 − p1 ρ1)_+`, the optimal two-outcome success from the
/// positive part of the difference.
fn helstrom_by_eigenvalues(s: &CqState) -> Result<f64> {
    let (e0, e1) = binary_entries(s);
    let mut diff = e0.1.matrix().scale(e0.0);
    diff.add_scaled(e1.1.matrix(), -e1.0)?;
    let positive: f64 = hermitian_eigenvalues(&diff)?.into_iter().filter(|v| *v > 0.0).sum();
    Ok(e1.0 + positive)
}

type Entry<'a> = (f64, &'a qx2src_core::DensityMatrix);

fn binary_entries(s: &CqState) -> (Entry<'_>, Entry<'_>) {
    let get = |v| {
        let e = s.get(&Label::plain(v)).expect("binary instance has both labels");
        (e.prob, &e.state)
    };
    (get(0), get(1))
}

fn pgm_suite(cfg: &VerifyConfig) -> Result<Vec<Record>> {
    let trials = Trials::new(Suite::Pgm, cfg);
    let rows = trials.run(0, |rng| {
        let (m, d) = random_shape(rng);
        let general: CqState = random_cq_state(m, d, rng);
        let binary: CqState = random_cq_state(1, rng.gen_range(1..=3), rng);
        let povm = pgm(&binary)?;
        let completeness = pgm(&general)?.completeness_defect().max(povm.completeness_defect());
        let success = guess_success(&binary, &povm)?;
        let ((p0, r0), (p1, r1)) = binary_entries(&binary);
        let helstrom = helstrom_advantage(p0, r0, p1, r1)?;
        let alt = helstrom_by_eigenvalues(&binary)?;
        Ok([completeness, helstrom * helstrom - success, success - helstrom, (helstrom - alt).abs()])
    })?;
    let col = |i: usize| max_of(rows.iter().map(|r| r[i]));
    let note = format!("{} instances", trials.count);
    Ok(vec![
        Record::at_most("pgm completeness defect", col(0), 0.0, cfg.equality_tol)
            .with_note(format!("{} instances, m <= 3 and m = 1", 2 * trials.count)),
        Record::at_most("helstrom squared minus pgm success", col(1), 0.0, cfg.inequality_tol).with_note(note.clone()),
        Record::at_most("pgm success minus helstrom", col(2), 0.0, cfg.inequality_tol).with_note(note.clone()),
        Record::at_most("helstrom closed form vs positive part", col(3), 0.0, cfg.equality_tol).with_note(note),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(trials: usize) -> VerifyConfig {
        VerifyConfig { trials: Some(trials), claim_trials: trials, strategies: 3, max_exhaustive_n: 5, random_ns: vec![16], ..Default::default() }
    }

    #[test]
    fn every_suite_passes_on_a_small_run() {
        for suite in Suite::EACH {
            let r = cmd_verify(suite, &small(6)).unwrap();
            assert!(r.pass, "{}: {:?}", suite.name(), r.failures().collect::<Vec<_>>());
            assert!(!r.records.is_empty());
        }
    }

    #[test]
    fn streams_differ_between_suites_and_seeds() {
        let a = run_suite(Suite::Kt, &small(4)).unwrap();
        let b = run_suite(Suite::Kt, &VerifyConfig { seed: 1, ..small(4) }).unwrap();
        assert_ne!(a[0].measured, b[0].measured);
        assert_ne!(Suite::Kt.stream_base(), Suite::Xor.stream_base());
    }

    #[test]
    fn eigenvalue_helstrom_matches_orthogonal_states() {
        let s = CqState::new(vec![
            (Label::plain(0), 0.5, qx2src_core::DensityMatrix::basis(2, 0).unwrap()),
            (Label::plain(1), 0.5, qx2src_core::DensityMatrix::basis(2, 1).unwrap()),
        ])
        .unwrap();
        assert!((helstrom_by_eigenvalues(&s).unwrap() - 1.0).abs() < 1e-12);
    }
}
