//! Property suites behind `geo verify`.
//!
//! Each suite runs a set of checks and records, per check, the worst
//! residual seen against its tolerance. Randomized suites draw from a
//! ChaCha stream seeded by the caller, so a report is reproducible.

mod figures;
mod metric;
mod quadratic;

use std::fmt;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::construction::{evaluate, Figure, Scene};
use crate::dsl::parse;

pub const DEFAULT_SEED: u64 = 1;

/// Suite names accepted by [`run_suite`], in the order `all` runs them.
pub const SUITES: [&str; 14] = [
    "harmonic",
    "inversion",
    "stereo",
    "radical",
    "conjugate",
    "bh",
    "degree-law",
    "deltoid",
    "circumcircle",
    "asymptote",
    "fig41",
    "closure",
    "golden",
    "toolset",
];

/// Outcome of one check. `residual` is compared as `residual < tolerance`
/// unless the check is a lower bound, in which case it must exceed it.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub lower_bound: bool,
    pub passed: bool,
    pub note: String,
}

impl Check {
    /// Passes when `residual < tolerance`.
    pub fn below(name: &str, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tolerance,
            lower_bound: false,
            passed: residual < tolerance,
            note: String::new(),
        }
    }

    /// Passes when `value > bound`.
    pub fn above(name: &str, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            residual: value,
            tolerance: bound,
            lower_bound: true,
            passed: value > bound,
            note: String::new(),
        }
    }

    /// An exact yes/no check.
    pub fn exact(name: &str, ok: bool) -> Self {
        Self::below(name, if ok { 0.0 } else { 1.0 }, 0.5)
    }

    /// Failure caused by an error before anything could be measured.
    pub fn failed(name: &str, why: impl fmt::Display) -> Self {
        Self::exact(name, false).with_note(why.to_string())
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let op = if self.lower_bound { ">" } else { "<" };
        write!(
            f,
            "{verdict} {}: {:.3e} {op} {:.0e}",
            self.name, self.residual, self.tolerance
        )?;
        if !self.note.is_empty() {
            write!(f, " ({})", self.note)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}] {:.3} s", self.suite, self.elapsed.as_secs_f64())?;
        for c in &self.checks {
            writeln!(f, "  {c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("unknown suite '{0}'")]
pub struct UnknownSuite(pub String);

/// Runs one suite by name.
pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport, UnknownSuite> {
    let idx = SUITES
        .iter()
        .position(|s| *s == name)
        .ok_or_else(|| UnknownSuite(name.into()))?;
    let suite = SUITES[idx];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = Instant::now();
    let checks = match suite {
        "harmonic" => metric::harmonic(&mut rng),
        "inversion" => metric::inversion(&mut rng),
        "stereo" => metric::stereo(&mut rng),
        "radical" => metric::radical(&mut rng),
        "conjugate" => metric::conjugate(),
        "bh" => quadratic::bh(&mut rng),
        "degree-law" => quadratic::degree_law(seed),
        "deltoid" => quadratic::deltoid(),
        "circumcircle" => quadratic::circumcircle(),
        "asymptote" => quadratic::asymptote(),
        "fig41" => quadratic::concentric_transition(),
        "closure" => figures::closure(),
        "golden" => figures::golden(),
        "toolset" => figures::toolset(),
        _ => unreachable!("suite list and dispatch agree"),
    };
    Ok(SuiteReport {
        suite,
        checks,
        elapsed: start.elapsed(),
    })
}

/// Runs every suite in [`SUITES`] order.
pub fn run_all(seed: u64) -> Vec<SuiteReport> {
    SUITES
        .iter()
        .map(|s| run_suite(s, seed).expect("listed suite"))
        .collect()
}

fn load(src: &str) -> Result<(Figure, Scene), String> {
    let fig = parse(src).map_err(|e| e.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))?;
    let scene = evaluate(&fig).map_err(|e| e.to_string())?;
    Ok((fig, scene))
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_an_error() {
        assert_eq!(run_suite("nope", 1), Err(UnknownSuite("nope".into())));
    }

    #[test]
    fn check_formatting() {
        let c = Check::below("x", 1.5e-12, 1e-9);
        assert_eq!(c.to_string(), "PASS x: 1.500e-12 < 1e-9");
        let c = Check::above("gap", 0.1, 0.2).with_note("short");
        assert_eq!(c.to_string(), "FAIL gap: 1.000e-1 > 2e-1 (short)");
    }
}
