//! Verification runs over named examples, collected into JSON and CSV reports.

mod examples;
mod sweep;

pub use examples::*;
pub use sweep::*;

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("unknown example `{0}`")]
    UnknownExample(String),
    #[error("unknown suite `{0}` (expected all, cubics or tubes)")]
    UnknownSuite(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

impl ReportError {
    /// Configuration problems map to exit code 2; everything else is an I/O failure.
    pub fn is_config(&self) -> bool {
        matches!(self, ReportError::UnknownExample(_) | ReportError::UnknownSuite(_) | ReportError::Config(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Distance of samples from the unit sphere.
    pub tangency: f64,
    /// Lagrangian and pseudoholomorphic residuals.
    pub lagrangian: f64,
    /// Gauss-equation consistency between curvature and cubic.
    pub curvature: f64,
    /// Eigenvalue equality in stabilizer classification.
    pub classification: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { tangency: 1e-12, lagrangian: 1e-8, curvature: 1e-4, classification: crate::tol::EIG_EQUAL }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JetMode {
    /// Analytic derivatives wherever an example supplies them.
    #[default]
    Analytic,
    FiniteDifference,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub example: String,
    /// Grid points per axis.
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub jet_mode: JetMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Record elapsed time. Off by default so reports are byte-stable.
    #[serde(default)]
    pub wall_time: bool,
}

fn default_grid() -> usize {
    8
}

impl RunConfig {
    pub fn new(example: impl Into<String>) -> Self {
        RunConfig {
            example: example.into(),
            grid: default_grid(),
            tolerances: Tolerances::default(),
            jet_mode: JetMode::default(),
            output: None,
            wall_time: false,
        }
    }

    pub fn validate(&self) -> Result<(), ReportError> {
        if self.grid < 8 {
            return Err(ReportError::Config(format!("grid must be at least 8 per axis, got {}", self.grid)));
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("tangency", t.tangency),
            ("lagrangian", t.lagrangian),
            ("curvature", t.curvature),
            ("classification", t.classification),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(ReportError::Config(format!("tolerance `{name}` must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, ReportError> {
        let text = std::fs::read_to_string(path).map_err(|source| ReportError::Io { path: path.into(), source })?;
        serde_json::from_str(&text).map_err(|e| ReportError::Format { path: path.into(), message: e.to_string() })
    }
}

/// One certified quantity. `within_tol` is `residual ≤ tol`; for an expected failure
/// the check passes when the residual exceeds the tolerance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub anchor: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
    pub expected_fail: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn within(name: impl Into<String>, anchor: impl Into<String>, residual: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            anchor: anchor.into(),
            residual,
            tol,
            pass: residual <= tol,
            expected_fail: false,
            note: None,
        }
    }

    /// A negative control: passes when `residual > tol`.
    pub fn exceeds(name: impl Into<String>, anchor: impl Into<String>, residual: f64, tol: f64) -> Self {
        Check { pass: residual > tol, expected_fail: true, ..Self::within(name, anchor, residual, tol) }
    }

    /// `residual` is 0 when `ok` and 1 otherwise.
    pub fn flag(name: impl Into<String>, anchor: impl Into<String>, ok: bool, note: String) -> Self {
        Self::within(name, anchor, if ok { 0.0 } else { 1.0 }, 0.0).with_note(note)
    }

    pub fn failed(name: impl Into<String>, anchor: impl Into<String>, tol: f64, err: impl std::fmt::Display) -> Self {
        Check { pass: false, ..Self::within(name, anchor, f64::NAN, tol) }.with_note(err.to_string())
    }

    /// A computation that may fail; failures never pass, even as negative controls.
    pub fn from_result<E: std::fmt::Display>(
        name: &str,
        anchor: &str,
        value: Result<f64, E>,
        tol: f64,
        expected_fail: bool,
    ) -> Self {
        match value {
            Ok(v) if expected_fail => Self::exceeds(name, anchor, v, tol),
            Ok(v) => Self::within(name, anchor, v, tol),
            Err(e) => Check { expected_fail, ..Self::failed(name, anchor, tol, e) },
        }
    }

    pub fn with_note(mut self, note: String) -> Self {
        self.note = Some(note);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub example: String,
    pub checks: Vec<Check>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
    pub config: RunConfig,
}

impl Report {
    fn assemble(example: &str, mut checks: Vec<Check>, config: &RunConfig, started: Instant) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        let pass = checks.iter().all(|c| c.pass);
        Report {
            schema_version: SCHEMA_VERSION,
            example: example.to_string(),
            checks,
            pass,
            wall_time_s: config.wall_time.then(|| started.elapsed().as_secs_f64()),
            config: config.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn write_json(&self, path: &Path) -> Result<(), ReportError> {
        write_file(path, &self.to_json())
    }
}

/// Runs the check list of `config.example`.
pub fn run_verify(config: &RunConfig) -> Result<Report, ReportError> {
    config.validate()?;
    let started = Instant::now();
    let example = Example::lookup(&config.example)?;
    let checks = example.checks(config);
    Ok(Report::assemble(&config.example, checks, config, started))
}

/// Verifies a tube over a gallery curve. The report is labelled with the tube's name.
pub fn run_tube(tube: &crate::tubes_rulings::TubeSpec, config: &RunConfig) -> Result<Report, ReportError> {
    config.validate()?;
    let started = Instant::now();
    let checks = tube_checks(tube, config);
    Ok(Report::assemble(&config.example, checks, config, started))
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<(), ReportError> {
    std::fs::write(path, contents).map_err(|source| ReportError::Io { path: path.into(), source })
}

/// Flat rows `example, check, residual, tol, pass`.
pub fn to_csv(reports: &[Report]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["example", "check", "residual", "tol", "pass"]).expect("in-memory write");
    for r in reports {
        for c in &r.checks {
            w.write_record([
                r.example.as_str(),
                c.name.as_str(),
                &format!("{:e}", c.residual),
                &format!("{:e}", c.tol),
                if c.pass { "true" } else { "false" },
            ])
            .expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

pub fn write_csv(path: &Path, reports: &[Report]) -> Result<(), ReportError> {
    write_file(path, &to_csv(reports))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(RunConfig::new("L0").validate().is_ok());
        let mut c = RunConfig::new("L0");
        c.grid = 4;
        assert!(c.validate().unwrap_err().is_config());
        let mut c = RunConfig::new("L0");
        c.tolerances.lagrangian = -1.0;
        assert!(c.validate().is_err());
        c.tolerances.lagrangian = f64::NAN;
        assert!(c.validate().is_err());
    }

    #[test]
    fn config_round_trips_through_json() {
        let c = RunConfig::new("L2");
        let back: RunConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        let partial: RunConfig = serde_json::from_str(r#"{"example": "L1", "grid": 10}"#).unwrap();
        assert_eq!(partial.grid, 10);
        assert_eq!(partial.tolerances, Tolerances::default());
        assert!(serde_json::from_str::<RunConfig>(r#"{"example": "L1", "gird": 10}"#).is_err());
    }

    #[test]
    fn check_semantics() {
        assert!(Check::within("a", "", 1e-9, 1e-8).pass);
        assert!(!Check::within("a", "", f64::NAN, 1e-8).pass);
        assert!(Check::exceeds("a", "", 0.5, 1e-2).pass);
        assert!(!Check::exceeds("a", "", 1e-3, 1e-2).pass);
        let err: Result<f64, String> = Err("boom".into());
        let c = Check::from_result("a", "", err, 1.0, true);
        assert!(!c.pass && c.expected_fail);
    }

    #[test]
    fn unknown_example_is_a_config_error() {
        let err = run_verify(&RunConfig::new("L9")).unwrap_err();
        assert!(err.is_config());
    }

    #[test]
    fn csv_has_fixed_columns() {
        let r = Report::assemble(
            "x",
            vec![Check::within("b", "", 0.0, 1.0), Check::within("a", "", 2.0, 1.0)],
            &RunConfig::new("x"),
            Instant::now(),
        );
        assert!(!r.pass);
        let csv = to_csv(&[r]);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("example,check,residual,tol,pass"));
        assert_eq!(lines.next(), Some("x,a,2e0,1e0,false"));
    }
}
