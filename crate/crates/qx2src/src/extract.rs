//! `qx2src extract`: run an extractor on two input files and report whether
//! the claimed parameters support it.

use std::path::Path;
use std::time::Instant;

use qx2src_core::bounds::{
    composed_output_len, deor_strong_output_len, one_bit_condition, seeded_output_len, OneBitVariant, ParamSet,
    Theorem,
};
use qx2src_core::extractors::{e_deor, e_ip, Composed, SeededExtractorSpec, SeededKind, Side, TwoSourceExtractor};
use qx2src_core::BitVector;

use crate::config::{ExtractConfig, ExtractorKind, Format};
use crate::error::{HarnessError, Result};
use crate::report::{Record, Report};

/// Decodes bits from file contents; bit `i` is bit `i mod 8` of byte `i / 8`.
pub fn decode_bits(contents: &[u8], format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Raw => Ok(contents.to_vec()),
        Format::Hex => {
            let text: String = String::from_utf8_lossy(contents).chars().filter(|c| !c.is_whitespace()).collect();
            hex::decode(&text).map_err(|e| HarnessError::usage(format!("invalid hex input: {e}")))
        }
    }
}

pub fn encode_bits(v: &BitVector, format: Format) -> Vec<u8> {
    match format {
        Format::Raw => v.to_bytes(),
        Format::Hex => format!("{}\n", hex::encode(v.to_bytes())).into_bytes(),
    }
}

fn read_source(path: Option<&Path>, name: &str, format: Format) -> Result<Vec<u8>> {
    let path = path.ok_or_else(|| HarnessError::usage(format!("missing input --{name}")))?;
    let contents = std::fs::read(path).map_err(|e| HarnessError::io(path, e))?;
    let bytes = decode_bits(&contents, format)?;
    if bytes.is_empty() {
        return Err(HarnessError::usage(format!("input --{name} is empty")));
    }
    Ok(bytes)
}

fn to_bits(bytes: &[u8], n: usize, name: &str) -> Result<BitVector> {
    if bytes.len() * 8 < n {
        return Err(HarnessError::usage(format!("input --{name} holds {} bits, need n={n}", bytes.len() * 8)));
    }
    Ok(BitVector::from_bytes(bytes, n)?)
}

/// Default output length of the composed extractor: what the seeded stage
/// supports on the chosen side with a `d`-bit seed.
pub fn composed_default_m(p: &ParamSet, side: Side, d: usize, entangled: bool) -> f64 {
    let (k_own, b_own, b_opp) = match side {
        Side::X => (p.k1, p.b1, p.b2),
        Side::Y => (p.k2, p.b2, p.b1),
    };
    let b = if entangled { b_own + b_opp } else { b_own };
    seeded_output_len(d as f64, k_own as f64, b as f64, p.eps, p.c_o1)
}

pub fn params_of(cfg: &ExtractConfig, n: usize, m: usize) -> Result<ParamSet> {
    let n64 = n as u64;
    let p = ParamSet {
        n: n64,
        k1: cfg.k1.unwrap_or(n64),
        k2: cfg.k2.unwrap_or(n64),
        b1: cfg.b1,
        b2: cfg.b2,
        m: m as u64,
        eps: cfg.eps,
        c_poly: cfg.c_poly,
        c_o1: cfg.c_o1,
    };
    p.validate()?;
    Ok(p)
}

/// Output bits plus a report whose records are the feasibility checks.
pub fn cmd_extract(cfg: &ExtractConfig) -> Result<(BitVector, Report)> {
    let started = Instant::now();
    let xb = read_source(cfg.x.as_deref(), "x", cfg.format)?;
    let yb = read_source(cfg.y.as_deref(), "y", cfg.format)?;
    let n = cfg.n.unwrap_or(xb.len() * 8);
    if n == 0 {
        return Err(HarnessError::usage("n must be positive"));
    }
    let x = to_bits(&xb, n, "x")?;
    let y = to_bits(&yb, n, "y")?;
    let probe = params_of(cfg, n, 1)?;

    let (output, records, m) = match cfg.extractor {
        ExtractorKind::Ip => {
            if cfg.m.is_some_and(|m| m != 1) {
                return Err(HarnessError::usage("the inner-product extractor emits exactly one bit"));
            }
            let r = one_bit_condition(&probe, OneBitVariant::WeakMin, cfg.entangled);
            let rec = Record::at_least("one-bit condition slack", r.slack, 0.0, 0.0)
                .with_note(format!("bias bound {:e} at b = min(b1, b2)", r.value));
            (BitVector::from_bits(&[e_ip(&x, &y)?])?, vec![rec], 1)
        }
        ExtractorKind::Deor => {
            let best = [Side::X, Side::Y]
                .map(|s| deor_strong_output_len(&probe, s, cfg.entangled, false))
                .into_iter()
                .max()
                .expect("two sides");
            let m = cfg.m.unwrap_or((best as usize).clamp(1, n));
            if m == 0 || m > n {
                return Err(HarnessError::usage(format!("deor needs 1 <= m <= n, got m={m}, n={n}")));
            }
            let rec = Record::at_most("deor output length", m as f64, best as f64, 0.0)
                .with_note("longest strong output over both sides");
            (e_deor(&x, &y, m)?, vec![rec], m)
        }
        ExtractorKind::Composed => composed(cfg, &probe, &x, &y)?,
    };
    let mut report = Report::new("extract", extractor_name(cfg.extractor), cfg.seed, cfg, records, started);
    report.table = Some(serde_json::json!({ "n": n, "m": m }));
    Ok((output, report))
}

fn extractor_name(kind: ExtractorKind) -> &'static str {
    match kind {
        ExtractorKind::Ip => "ip",
        ExtractorKind::Deor => "deor",
        ExtractorKind::Composed => "composed",
    }
}

fn composed(
    cfg: &ExtractConfig,
    probe: &ParamSet,
    x: &BitVector,
    y: &BitVector,
) -> Result<(BitVector, Vec<Record>, usize)> {
    let n = probe.n as usize;
    let supported = composed_default_m(probe, cfg.side, cfg.d, cfg.entangled);
    let m = cfg.m.unwrap_or(if supported >= 1.0 { supported.floor() as usize } else { 1 });
    let spec = match cfg.seeded {
        SeededKind::Trevisan => SeededExtractorSpec::trevisan(n, cfg.d, m)?,
        SeededKind::Toeplitz => SeededExtractorSpec::toeplitz(n, m)?,
    };
    let d = spec.d;
    let ext = Composed::new(spec, cfg.side)?;
    let p = params_of(cfg, n, m)?;
    let theorem = if cfg.entangled { Theorem::Thm2 } else { Theorem::Thm1 };
    let side_report = composed_output_len(&p, theorem);
    let inner = deor_strong_output_len(&p, cfg.side, cfg.entangled, false);
    let records = vec![
        Record::above("composition side condition slack", side_report.slack, 0.0).with_note(format!(
            "{}; rhs uses c_poly={}",
            side_report.condition, side_report.c_poly
        )),
        Record::at_most("seed length vs strong deor output", d as f64, inner as f64, 0.0),
        Record::at_most("output length vs seeded extractor", m as f64, supported, 0.0)
            .with_note(format!("theorem output length {}", side_report.value)),
    ];
    Ok((ext.extract(x, y)?, records, m))
}
