//! Parameter tables behind `qx2src bounds`.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use qx2src_core::bounds::{
    appendix_crossover, composed_output_len, deor_strong_output_len, ip_bias_bound, knowledge_transfer,
    kt_storage_transfer, ns_guess_bound, one_bit_condition, reported_bias, BoundReport, KnowledgeVariant,
    OneBitVariant, ParamSet, Theorem, Transfer,
};
use qx2src_core::extractors::Side;

use crate::config::BoundsConfig;
use crate::error::Result;
use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ByStorage {
    pub entangled: f64,
    pub non_entangled: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrongLengths {
    pub x: u64,
    pub y: u64,
    pub x_entangled: u64,
    pub y_entangled: u64,
    pub knowledge: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub params: ParamSet,
    /// Inner-product bias with `b = min(b1, b2)`, unclamped.
    pub ip_bias: ByStorage,
    /// The same, clamped to `½`.
    pub ip_bias_reported: ByStorage,
    pub one_bit: Vec<BoundReport>,
    /// `Pr[guess X]` against `b1` qubits.
    pub guess_x: ByStorage,
    /// `Pr[guess Y]` against `b2` qubits.
    pub guess_y: ByStorage,
    pub deor_strong_m: StrongLengths,
    pub composed: Vec<BoundReport>,
    /// Classical X-strong extractor carried to `b2` qubits of storage.
    pub kt_transfer: Transfer,
    pub knowledge_weak: Transfer,
    pub knowledge_x_strong: Transfer,
}

impl BoundsRow {
    pub fn new(p: &ParamSet) -> Result<Self> {
        p.validate()?;
        let b = p.b1.min(p.b2);
        let both = |f: &dyn Fn(bool) -> f64| ByStorage { entangled: f(true), non_entangled: f(false) };
        let ip_bias = both(&|e| ip_bias_bound(p, b, e));
        let one_bit = [OneBitVariant::WeakMin, OneBitVariant::SuperstrongMax]
            .into_iter()
            .flat_map(|v| [true, false].map(|e| one_bit_condition(p, v, e)))
            .collect();
        Ok(Self {
            params: *p,
            ip_bias,
            ip_bias_reported: ByStorage {
                entangled: reported_bias(ip_bias.entangled),
                non_entangled: reported_bias(ip_bias.non_entangled),
            },
            one_bit,
            guess_x: both(&|e| ns_guess_bound(p.k1, p.b1, e)),
            guess_y: both(&|e| ns_guess_bound(p.k2, p.b2, e)),
            deor_strong_m: StrongLengths {
                x: deor_strong_output_len(p, Side::X, false, false),
                y: deor_strong_output_len(p, Side::Y, false, false),
                x_entangled: deor_strong_output_len(p, Side::X, true, false),
                y_entangled: deor_strong_output_len(p, Side::Y, true, false),
                knowledge: deor_strong_output_len(p, Side::X, false, true),
            },
            composed: Theorem::ALL.iter().map(|t| composed_output_len(p, *t)).collect(),
            kt_transfer: kt_storage_transfer(p.k1, p.k2, p.b2, p.eps),
            knowledge_weak: knowledge_transfer(p.k1, p.k2, p.eps, KnowledgeVariant::Weak),
            knowledge_x_strong: knowledge_transfer(p.k1, p.k2, p.eps, KnowledgeVariant::XStrong),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsTable {
    pub rows: Vec<BoundsRow>,
    /// First `b2` where the non-entangled composition catches up with the
    /// appendix composition, for the base parameters.
    pub appendix_crossover_b2: Option<u64>,
}

pub fn bounds_table(cfg: &BoundsConfig) -> Result<BoundsTable> {
    cfg.params.validate()?;
    let params: Vec<ParamSet> = match &cfg.sweep {
        Some(s) => {
            s.validate()?;
            s.values().into_iter().map(|v| s.apply(&cfg.params, v)).collect()
        }
        None => vec![cfg.params],
    };
    let rows = params.iter().map(BoundsRow::new).collect::<Result<_>>()?;
    Ok(BoundsTable { rows, appendix_crossover_b2: appendix_crossover(&cfg.params) })
}

pub fn cmd_bounds(cfg: &BoundsConfig) -> Result<Report> {
    let started = Instant::now();
    let table = bounds_table(cfg)?;
    let target = cfg.sweep.as_ref().map_or("point".to_string(), |s| format!("sweep {}", s.field));
    let seed = 0;
    Ok(Report::new("bounds", target, seed, cfg, Vec::new(), started)
        .with_table(serde_json::to_value(table).expect("tables serialize")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Sweep;

    #[test]
    fn default_point_reproduces_the_entangled_example() {
        let t = bounds_table(&BoundsConfig::default()).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.rows[0].ip_bias.entangled, 2f64.powi(-11));
        assert_eq!(t.rows[0].one_bit.len(), 4);
        assert_eq!(t.rows[0].composed.len(), 4);
    }

    #[test]
    fn sweeps_produce_one_row_per_value() {
        let cfg = BoundsConfig { sweep: Some(Sweep::parse("b2=0:20:5").unwrap()), ..Default::default() };
        let t = bounds_table(&cfg).unwrap();
        assert_eq!(t.rows.iter().map(|r| r.params.b2).collect::<Vec<_>>(), vec![0, 5, 10, 15, 20]);
        let empty = BoundsConfig { sweep: Some(Sweep::parse("b2=5:1").unwrap()), ..Default::default() };
        assert!(bounds_table(&empty).unwrap().rows.is_empty());
    }

    #[test]
    fn invalid_rows_are_errors() {
        let cfg = BoundsConfig { sweep: Some(Sweep::parse("k1=99:101").unwrap()), ..Default::default() };
        assert!(bounds_table(&cfg).is_err());
    }
}
