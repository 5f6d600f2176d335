use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use qx2src_core::adversaries::Setting;
use qx2src_core::extractors::{SeededKind, Side};

use crate::attack::AttackKind;
use crate::config::{self, AttackConfig, BoundsConfig, ExtractConfig, ExtractorKind, Format, Sweep, VerifyConfig};
use crate::error::Result;
use crate::verify::Suite;

#[derive(Debug, Parser)]
#[command(name = "qx2src", version, about = "Two-source extractors against bounded quantum storage")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract from two input files and report parameter feasibility.
    Extract(ExtractArgs),
    /// Run a seeded property suite.
    Verify(VerifyArgs),
    /// Build and evaluate an adversary.
    Attack(AttackArgs),
    /// Evaluate the closed-form bounds, optionally over a sweep.
    Bounds(BoundsArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// JSON config file; flags override its fields.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

/// Accepts a decimal value or `2^-k`.
pub fn parse_eps(s: &str) -> std::result::Result<f64, String> {
    let v = match s.strip_prefix("2^") {
        Some(exp) => exp.parse::<f64>().map(f64::exp2),
        None => s.parse::<f64>(),
    }
    .map_err(|_| format!("invalid eps {s:?}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("eps must be positive, got {s}"))
    }
}

fn parse_side(s: &str) -> std::result::Result<Side, String> {
    match s.to_ascii_lowercase().as_str() {
        "x" => Ok(Side::X),
        "y" => Ok(Side::Y),
        _ => Err(format!("side must be x or y, got {s:?}")),
    }
}

fn parse_seeded(s: &str) -> std::result::Result<SeededKind, String> {
    match s {
        "toeplitz" => Ok(SeededKind::Toeplitz),
        "trevisan" => Ok(SeededKind::Trevisan),
        _ => Err(format!("seeded extractor must be toeplitz or trevisan, got {s:?}")),
    }
}

fn parse_setting(s: &str) -> std::result::Result<Setting, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

#[derive(Debug, Clone, Args)]
pub struct ExtractArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_name = "FILE")]
    pub x: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub y: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, value_enum)]
    pub extractor: Option<ExtractorKind>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    /// Seed length of the seeded stage.
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, value_parser = parse_seeded)]
    pub seeded: Option<SeededKind>,
    #[arg(long, value_parser = parse_side)]
    pub side: Option<Side>,
    #[arg(long)]
    pub k1: Option<u64>,
    #[arg(long)]
    pub k2: Option<u64>,
    #[arg(long)]
    pub b1: Option<u64>,
    #[arg(long)]
    pub b2: Option<u64>,
    #[arg(long, value_parser = parse_eps)]
    pub eps: Option<f64>,
    /// Judge feasibility against entangled storage.
    #[arg(long)]
    pub entangled: bool,
    #[arg(long)]
    pub c_poly: Option<f64>,
    #[arg(long)]
    pub c_o1: Option<f64>,
    /// Feasibility report file; stderr when absent.
    #[arg(long, value_name = "FILE")]
    pub report: Option<PathBuf>,
}

impl ExtractArgs {
    pub fn resolve(&self) -> Result<ExtractConfig> {
        let mut c: ExtractConfig = config::load(self.common.config.as_deref())?;
        set(&mut c.seed, self.common.seed);
        if self.x.is_some() {
            c.x = self.x.clone();
        }
        if self.y.is_some() {
            c.y = self.y.clone();
        }
        set(&mut c.format, self.format);
        set(&mut c.extractor, self.extractor);
        if self.n.is_some() {
            c.n = self.n;
        }
        if self.m.is_some() {
            c.m = self.m;
        }
        set(&mut c.d, self.d);
        set(&mut c.seeded, self.seeded);
        set(&mut c.side, self.side);
        if self.k1.is_some() {
            c.k1 = self.k1;
        }
        if self.k2.is_some() {
            c.k2 = self.k2;
        }
        set(&mut c.b1, self.b1);
        set(&mut c.b2, self.b2);
        set(&mut c.eps, self.eps);
        c.entangled |= self.entangled;
        set(&mut c.c_poly, self.c_poly);
        set(&mut c.c_o1, self.c_o1);
        Ok(c)
    }
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    #[command(flatten)]
    pub common: Common,
    /// Overrides the suite's trial count.
    #[arg(long)]
    pub trials: Option<usize>,
}

impl VerifyArgs {
    pub fn resolve(&self) -> Result<VerifyConfig> {
        let mut c: VerifyConfig = config::load(self.common.config.as_deref())?;
        set(&mut c.seed, self.common.seed);
        if self.trials.is_some() {
            c.trials = self.trials;
        }
        Ok(c)
    }
}

#[derive(Debug, Clone, Args)]
pub struct AttackArgs {
    #[arg(value_enum)]
    pub kind: AttackKind,
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k1: Option<usize>,
    #[arg(long)]
    pub k2: Option<usize>,
    #[arg(long)]
    pub b1: Option<usize>,
    #[arg(long)]
    pub b2: Option<usize>,
    /// entangled, non-entangled, superstrong-entangled or superstrong-non-entangled.
    #[arg(long, value_parser = parse_setting)]
    pub setting: Option<Setting>,
}

impl AttackArgs {
    pub fn resolve(&self) -> Result<AttackConfig> {
        let mut c: AttackConfig = config::load(self.common.config.as_deref())?;
        set(&mut c.seed, self.common.seed);
        for (slot, v) in [(&mut c.n, self.n), (&mut c.k1, self.k1), (&mut c.k2, self.k2), (&mut c.b1, self.b1), (&mut c.b2, self.b2)] {
            if v.is_some() {
                *slot = v;
            }
        }
        set(&mut c.setting, self.setting);
        Ok(c)
    }
}

#[derive(Debug, Clone, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub k1: Option<u64>,
    #[arg(long)]
    pub k2: Option<u64>,
    #[arg(long)]
    pub b1: Option<u64>,
    #[arg(long)]
    pub b2: Option<u64>,
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long, value_parser = parse_eps)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub c_poly: Option<f64>,
    #[arg(long)]
    pub c_o1: Option<f64>,
    /// `FIELD=FROM:TO[:STEP]` over n, k1, k2, b1, b2 or m.
    #[arg(long, value_name = "SPEC")]
    pub sweep: Option<String>,
}

impl BoundsArgs {
    pub fn resolve(&self) -> Result<BoundsConfig> {
        let mut c: BoundsConfig = config::load(self.common.config.as_deref())?;
        let p = &mut c.params;
        for (slot, v) in [(&mut p.n, self.n), (&mut p.k1, self.k1), (&mut p.k2, self.k2), (&mut p.b1, self.b1), (&mut p.b2, self.b2), (&mut p.m, self.m)] {
            set(slot, v);
        }
        set(&mut p.eps, self.eps);
        set(&mut p.c_poly, self.c_poly);
        set(&mut p.c_o1, self.c_o1);
        if let Some(s) = &self.sweep {
            c.sweep = Some(Sweep::parse(s)?);
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_is_well_formed() {
        Cli::command().debug_assert();
    }

    #[test]
    fn eps_forms() {
        assert_eq!(parse_eps("2^-10").unwrap(), 2f64.powi(-10));
        assert_eq!(parse_eps("0.25").unwrap(), 0.25);
        assert!(parse_eps("0").is_err());
        assert!(parse_eps("2^x").is_err());
    }

    #[test]
    fn flags_override_defaults() {
        let cli = Cli::try_parse_from(["qx2src", "bounds", "--b2", "3", "--eps", "2^-4", "--sweep", "k1=1:2"]).unwrap();
        let Command::Bounds(a) = cli.command else { panic!("bounds") };
        let c = a.resolve().unwrap();
        assert_eq!((c.params.b2, c.params.b1, c.params.eps), (3, 20, 0.0625));
        assert_eq!(c.sweep.unwrap().field, "k1");

        let cli = Cli::try_parse_from(["qx2src", "attack", "tightness", "--setting", "entangled", "--seed", "9"]).unwrap();
        let Command::Attack(a) = cli.command else { panic!("attack") };
        let c = a.resolve().unwrap();
        assert_eq!((c.setting, c.seed), (Setting::Entangled, 9));
    }
}
