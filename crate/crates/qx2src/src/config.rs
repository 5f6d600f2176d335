//! Per-command configuration. A `--config` JSON file fills the struct; flags
//! given on the command line override individual fields.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use qx2src_core::adversaries::Setting;
use qx2src_core::bounds::ParamSet;
use qx2src_core::extractors::{SeededKind, Side};

use crate::error::{HarnessError, Result};

pub const INEQUALITY_TOL: f64 = 1e-8;
pub const EQUALITY_TOL: f64 = 1e-9;

/// Reads a config file, or returns the defaults when no path is given.
pub fn load<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| HarnessError::Config { path: path.to_path_buf(), source })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Overrides the per-suite trial count.
    pub trials: Option<usize>,
    /// Instances for the Boolean-reduction equality in the `xor` suite.
    pub claim_trials: usize,
    pub inequality_tol: f64,
    pub equality_tol: f64,
    /// `matrices`: largest `n` checked exhaustively.
    pub max_exhaustive_n: usize,
    /// `matrices`: lengths checked on random subsets.
    pub random_ns: Vec<usize>,
    /// `security`: source length, min-entropy, per-party storage.
    pub n: usize,
    pub k: usize,
    pub b: usize,
    /// `security`: random strategies per source pair and flavor.
    pub strategies: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: None,
            claim_trials: 200,
            inequality_tol: INEQUALITY_TOL,
            equality_tol: EQUALITY_TOL,
            max_exhaustive_n: 10,
            random_ns: vec![32, 64],
            n: 4,
            k: 3,
            b: 1,
            strategies: 100,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AttackConfig {
    pub seed: u64,
    pub n: Option<usize>,
    pub k1: Option<usize>,
    pub k2: Option<usize>,
    pub b1: Option<usize>,
    pub b2: Option<usize>,
    pub setting: Setting,
    pub equality_tol: f64,
    pub inequality_tol: f64,
}

impl Default for AttackConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            n: None,
            k1: None,
            k2: None,
            b1: None,
            b2: None,
            setting: Setting::NonEntangled,
            equality_tol: EQUALITY_TOL,
            inequality_tol: INEQUALITY_TOL,
        }
    }
}

/// Integer field of [`ParamSet`] swept over `from..=to` in steps of `step`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub field: String,
    pub from: u64,
    pub to: u64,
    #[serde(default = "one")]
    pub step: u64,
}

fn one() -> u64 {
    1
}

pub const SWEEP_FIELDS: [&str; 6] = ["n", "k1", "k2", "b1", "b2", "m"];

impl Sweep {
    /// Parses `FIELD=FROM:TO[:STEP]`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || HarnessError::usage(format!("malformed sweep {s:?}; expected FIELD=FROM:TO[:STEP]"));
        let (field, range) = s.split_once('=').ok_or_else(bad)?;
        let parts: Vec<u64> = range
            .split(':')
            .map(|p| p.trim().parse::<u64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        let (from, to, step) = match parts[..] {
            [from, to] => (from, to, 1),
            [from, to, step] => (from, to, step),
            _ => return Err(bad()),
        };
        let sweep = Self { field: field.trim().to_string(), from, to, step };
        sweep.validate()?;
        Ok(sweep)
    }

    pub fn validate(&self) -> Result<()> {
        if !SWEEP_FIELDS.contains(&self.field.as_str()) {
            return Err(HarnessError::usage(format!(
                "cannot sweep {:?}; choose one of {}",
                self.field,
                SWEEP_FIELDS.join(", ")
            )));
        }
        if self.step == 0 {
            return Err(HarnessError::usage("sweep step must be positive"));
        }
        Ok(())
    }

    /// Swept values; empty when `from > to`.
    pub fn values(&self) -> Vec<u64> {
        if self.from > self.to {
            return Vec::new();
        }
        (self.from..=self.to).step_by(self.step as usize).collect()
    }

    pub fn apply(&self, p: &ParamSet, value: u64) -> ParamSet {
        let mut q = *p;
        match self.field.as_str() {
            "n" => q.n = value,
            "k1" => q.k1 = value,
            "k2" => q.k2 = value,
            "b1" => q.b1 = value,
            "b2" => q.b2 = value,
            "m" => q.m = value,
            other => unreachable!("validated sweep field {other}"),
        }
        q
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundsConfig {
    pub params: ParamSet,
    pub sweep: Option<Sweep>,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        Self {
            params: ParamSet {
                n: 100,
                k1: 80,
                k2: 80,
                b1: 20,
                b2: 20,
                m: 1,
                eps: 2f64.powi(-11),
                c_poly: 1.0,
                c_o1: 0.0,
            },
            sweep: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    /// Hex text, whitespace ignored, bit `i` is bit `i mod 8` of byte `i / 8`.
    Hex,
    /// Raw bytes in the same bit order.
    Raw,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ExtractorKind {
    Ip,
    Deor,
    Composed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExtractConfig {
    pub seed: u64,
    pub x: Option<PathBuf>,
    pub y: Option<PathBuf>,
    pub format: Format,
    pub extractor: ExtractorKind,
    /// Source length; defaults to the bits available in `x`.
    pub n: Option<usize>,
    /// Output length; `ip` always emits one bit.
    pub m: Option<usize>,
    /// Seed length of the seeded stage in `composed`.
    pub d: usize,
    pub seeded: SeededKind,
    pub side: Side,
    /// Claimed min-entropies; default to `n`.
    pub k1: Option<u64>,
    pub k2: Option<u64>,
    pub b1: u64,
    pub b2: u64,
    pub eps: f64,
    pub entangled: bool,
    pub c_poly: f64,
    pub c_o1: f64,
}

impl Default for ExtractConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            x: None,
            y: None,
            format: Format::Hex,
            extractor: ExtractorKind::Ip,
            n: None,
            m: None,
            d: 32,
            seeded: SeededKind::Trevisan,
            side: Side::X,
            k1: None,
            k2: None,
            b1: 0,
            b2: 0,
            eps: 2f64.powi(-10),
            entangled: false,
            c_poly: 1.0,
            c_o1: 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_parsing() {
        let s = Sweep::parse("b2=0:10:5").unwrap();
        assert_eq!(s.values(), vec![0, 5, 10]);
        assert_eq!(Sweep::parse("k1=3:4").unwrap().values(), vec![3, 4]);
        assert!(Sweep::parse("b2=9:1").unwrap().values().is_empty());
        for bad in ["b2", "b2=1", "b2=1:x", "eps=1:2", "b2=1:2:0", "b2=1:2:3:4"] {
            assert!(Sweep::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn sweep_applies_to_one_field() {
        let p = BoundsConfig::default().params;
        let q = Sweep::parse("b2=0:1").unwrap().apply(&p, 7);
        assert_eq!((q.b1, q.b2, q.n), (20, 7, 100));
    }

    #[test]
    fn configs_round_trip_and_reject_unknown_fields() {
        let v = VerifyConfig::default();
        let back: VerifyConfig = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(v, back);
        let partial: AttackConfig = serde_json::from_str(r#"{"n": 6, "setting": "entangled"}"#).unwrap();
        assert_eq!((partial.n, partial.setting), (Some(6), Setting::Entangled));
        assert!(serde_json::from_str::<BoundsConfig>(r#"{"nope": 1}"#).is_err());
    }
}
