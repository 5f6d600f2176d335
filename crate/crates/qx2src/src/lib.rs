//! Command-line harness: `extract`, `verify`, `attack` and `bounds`.
//!
//! Exit codes: 0 pass, 1 usage or input error, 2 feasibility warning,
//! 3 verification failure.

pub mod attack;
pub mod cli;
pub mod config;
pub mod error;
pub mod extract;
pub mod report;
pub mod table;
pub mod verify;

use std::io::Write;
use std::path::Path;

pub use attack::{cmd_attack, AttackKind};
pub use cli::{Cli, Command};
pub use error::{HarnessError, Result};
pub use extract::cmd_extract;
pub use report::{Record, Report};
pub use table::cmd_bounds;
pub use verify::{cmd_verify, Suite};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Usage,
    Feasibility,
    Verification,
}

impl Outcome {
    pub fn code(self) -> u8 {
        match self {
            Outcome::Pass => 0,
            Outcome::Usage => 1,
            Outcome::Feasibility => 2,
            Outcome::Verification => 3,
        }
    }
}

pub fn run(cli: Cli) -> Outcome {
    match execute(cli) {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("error: {e}");
            Outcome::Usage
        }
    }
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| HarnessError::io(p, e)),
        None => std::io::stdout().write_all(bytes).map_err(|e| HarnessError::io("<stdout>", e)),
    }
}

fn summarize(report: &Report) {
    for r in &report.records {
        eprintln!(
            "{} {}: measured {:e} bound {:e}",
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            r.measured,
            r.bound
        );
    }
}

fn emit(report: &Report, out: Option<&Path>) -> Result<()> {
    summarize(report);
    write_out(out, format!("{}\n", report.to_json()).as_bytes())
}

fn verdict(report: &Report, failure: Outcome) -> Outcome {
    if report.pass {
        Outcome::Pass
    } else {
        failure
    }
}

fn execute(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Verify(a) => {
            let report = cmd_verify(a.suite, &a.resolve()?)?;
            emit(&report, a.common.out.as_deref())?;
            Ok(verdict(&report, Outcome::Verification))
        }
        Command::Attack(a) => {
            let report = cmd_attack(a.kind, &a.resolve()?)?;
            emit(&report, a.common.out.as_deref())?;
            Ok(verdict(&report, Outcome::Verification))
        }
        Command::Bounds(a) => {
            let report = cmd_bounds(&a.resolve()?)?;
            emit(&report, a.common.out.as_deref())?;
            Ok(Outcome::Pass)
        }
        Command::Extract(a) => {
            let cfg = a.resolve()?;
            let (bits, report) = cmd_extract(&cfg)?;
            write_out(a.common.out.as_deref(), &extract::encode_bits(&bits, cfg.format))?;
            summarize(&report);
            let json = format!("{}\n", report.to_json());
            match &a.report {
                Some(p) => std::fs::write(p, json).map_err(|e| HarnessError::io(p, e))?,
                None => eprint!("{json}"),
            }
            Ok(verdict(&report, Outcome::Feasibility))
        }
    }
}
