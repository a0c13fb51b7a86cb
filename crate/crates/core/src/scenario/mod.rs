//! Batch scenario runner behind the `jeft` binary.
//!
//! A scenario runs a suite of checks for each configured dimension and
//! returns a [`RunReport`] plus CSV artifacts. Numeric failures inside a
//! check are recorded as failed checks; only configuration problems are
//! returned as errors.

mod config;
mod suites;

pub use config::{BumpConfig, ScenarioConfig, KEYS};

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};

/// Scenario names with a one-line description.
pub const SCENARIOS: &[(&str, &str)] = &[
    (
        "inversion",
        "pointwise inversion of bumps over three spectral refinement levels",
    ),
    (
        "plancherel",
        "Plancherel identity and its implied normalization",
    ),
    (
        "jeft-equivalence",
        "factorized transform against the distance-kernel convolution",
    ),
    (
        "kaverage-bridge",
        "joint-eigenspace transform against the spherical transform of K-averages",
    ),
    (
        "functional-equation",
        "K-averaged translates of the transform against phi times the value at g.0",
    ),
    (
        "asymptotic",
        "large-t limit of the transform against c(lambda) times the Helgason transform",
    ),
    (
        "eigen",
        "finite-difference Laplace-Beltrami residual of the transform",
    ),
    (
        "pw-recovery",
        "support radius, holomorphy and decay of the Helgason transform",
    ),
    (
        "c-table",
        "fitted against closed-form c-function and conjugate symmetry",
    ),
    (
        "calibrate",
        "inversion constant from a reference bump, cross-checked on held-out functions",
    ),
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// `null` when the check could not be computed.
    pub value: f64,
    /// `null` for informational checks.
    pub tol: f64,
    pub pass: bool,
    pub seconds: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub scenario: String,
    pub config_echo: BTreeMap<String, String>,
    pub checks: Vec<Check>,
    pub summary: Summary,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        if self.summary.pass {
            0
        } else {
            1
        }
    }
}

/// A plot-ready CSV produced by a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub file: String,
    pub rows: Vec<Vec<String>>,
    pub header: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioOutput {
    pub report: RunReport,
    pub artifacts: Vec<Artifact>,
    /// Wall-clock seconds per check, in check order.
    pub timings: Vec<(String, f64)>,
}

/// Resolved tolerances for one scenario.
pub(crate) struct Tolerances(BTreeMap<String, f64>);

impl Tolerances {
    fn resolve(
        scenario: &str,
        defaults: &[(&str, f64)],
        overrides: &BTreeMap<String, f64>,
    ) -> Result<Self> {
        let mut map: BTreeMap<String, f64> =
            defaults.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        for (k, v) in overrides {
            if !map.contains_key(k) {
                let known: Vec<&str> = defaults.iter().map(|(k, _)| *k).collect();
                return Err(Error::Config(format!(
                    "tol.{k}: not a tolerance of scenario {scenario} (known: {})",
                    known.join(", ")
                )));
            }
            map.insert(k.clone(), *v);
        }
        Ok(Self(map))
    }

    pub(crate) fn get(&self, key: &str) -> f64 {
        self.0[key]
    }
}

/// Collects checks and artifacts while a scenario runs.
pub(crate) struct Recorder {
    checks: Vec<Check>,
    artifacts: Vec<Artifact>,
    timings: Vec<(String, f64)>,
    clock: Instant,
    record_seconds: bool,
}

impl Recorder {
    fn new(record_seconds: bool) -> Self {
        Self {
            checks: Vec::new(),
            artifacts: Vec::new(),
            timings: Vec::new(),
            clock: Instant::now(),
            record_seconds,
        }
    }

    /// Start timing the next check.
    pub(crate) fn start(&mut self) {
        self.clock = Instant::now();
    }

    /// Record `value ≤ tol`; an `Err` becomes a failed check with the error
    /// as detail.
    pub(crate) fn check(&mut self, name: String, value: Result<f64>, tol: f64) {
        self.check_with(name, value.map(|v| (v, None)), tol)
    }

    pub(crate) fn check_with(
        &mut self,
        name: String,
        value: Result<(f64, Option<String>)>,
        tol: f64,
    ) {
        let secs = self.clock.elapsed().as_secs_f64();
        let (value, detail) = match value {
            Ok(v) => v,
            Err(e) => (f64::NAN, Some(e.to_string())),
        };
        let pass = !value.is_nan() && value <= tol;
        self.timings.push((name.clone(), secs));
        self.checks.push(Check {
            name,
            value,
            tol,
            pass,
            seconds: self.record_seconds.then_some(secs),
            detail,
        });
        self.clock = Instant::now();
    }

    pub(crate) fn artifact(&mut self, file: String, header: &[&str], rows: Vec<Vec<String>>) {
        self.artifacts.push(Artifact {
            file,
            header: header.iter().map(|s| s.to_string()).collect(),
            rows,
        });
    }
}

pub fn is_scenario(name: &str) -> bool {
    SCENARIOS.iter().any(|(n, _)| *n == name)
}

/// Run a scenario in memory. Errors are configuration errors only.
pub fn run_scenario(name: &str, cfg: &ScenarioConfig) -> Result<ScenarioOutput> {
    let defaults = suites::tolerance_defaults(name).ok_or_else(|| {
        Error::Config(format!(
            "unknown scenario '{name}' (expected one of: {})",
            SCENARIOS
                .iter()
                .map(|(n, _)| *n)
                .collect::<Vec<_>>()
                .join(", ")
        ))
    })?;
    let tols = Tolerances::resolve(name, defaults, &cfg.tolerances)?;
    suites::validate(name, cfg)?;
    let mut rec = Recorder::new(cfg.timings);
    for &dim in &cfg.dims {
        rec.start();
        suites::run(name, dim, cfg, &tols, &mut rec)?;
    }
    let passed = rec.checks.iter().filter(|c| c.pass).count();
    let total = rec.checks.len();
    let report = RunReport {
        scenario: name.to_string(),
        config_echo: cfg.echo(),
        summary: Summary {
            total,
            passed,
            failed: total - passed,
            pass: passed == total,
        },
        checks: rec.checks,
    };
    Ok(ScenarioOutput {
        report,
        artifacts: rec.artifacts,
        timings: rec.timings,
    })
}

#[derive(Serialize)]
struct TimingDoc<'a> {
    scenario: &'a str,
    total_seconds: f64,
    checks: Vec<TimingRow<'a>>,
}

#[derive(Serialize)]
struct TimingRow<'a> {
    name: &'a str,
    seconds: f64,
}

impl ScenarioOutput {
    /// Write results.json, timings.json and the CSV artifacts into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        let io =
            |e: std::io::Error| Error::Config(format!("cannot write to {}: {e}", dir.display()));
        fs::create_dir_all(dir).map_err(io)?;
        let mut json = serde_json::to_string_pretty(&self.report).expect("report serializes");
        json.push('\n');
        fs::write(dir.join("results.json"), json).map_err(io)?;
        let doc = TimingDoc {
            scenario: &self.report.scenario,
            total_seconds: self.timings.iter().map(|(_, s)| s).sum(),
            checks: self
                .timings
                .iter()
                .map(|(n, s)| TimingRow {
                    name: n,
                    seconds: *s,
                })
                .collect(),
        };
        let mut json = serde_json::to_string_pretty(&doc).expect("timings serialize");
        json.push('\n');
        fs::write(dir.join("timings.json"), json).map_err(io)?;
        for a in &self.artifacts {
            let csv_err = |e: csv::Error| Error::Config(format!("cannot write {}: {e}", a.file));
            let mut w = csv::Writer::from_path(dir.join(&a.file)).map_err(csv_err)?;
            w.write_record(&a.header).map_err(csv_err)?;
            for row in &a.rows {
                w.write_record(row).map_err(csv_err)?;
            }
            w.flush().map_err(io)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_scenario_and_tolerance_are_config_errors() {
        let cfg = ScenarioConfig::default();
        assert!(matches!(run_scenario("nope", &cfg), Err(Error::Config(_))));
        let mut cfg = ScenarioConfig::default();
        cfg.set("tol.bogus", "1").unwrap();
        let err = run_scenario("c-table", &cfg).unwrap_err();
        assert!(err.to_string().contains("tol.bogus"));
    }

    #[test]
    fn every_listed_scenario_has_tolerances() {
        for (name, _) in SCENARIOS {
            assert!(suites::tolerance_defaults(name).is_some(), "{name}");
        }
    }

    #[test]
    fn c_table_runs_and_writes() {
        let cfg = ScenarioConfig::default();
        let out = run_scenario("c-table", &cfg).unwrap();
        assert!(out.report.summary.pass, "{:?}", out.report.checks);
        assert!(out.report.checks.iter().all(|c| c.seconds.is_none()));
        let dir = std::env::temp_dir().join(format!("jeft-ctable-{}", std::process::id()));
        out.write(&dir).unwrap();
        let text = fs::read_to_string(dir.join("results.json")).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["scenario"], "c-table");
        assert!(dir.join("timings.json").exists());
        fs::remove_dir_all(&dir).ok();
    }
}
