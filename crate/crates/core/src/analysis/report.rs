use std::time::Instant;

use serde::{Deserialize, Serialize};

/// Version of the JSON report layout written by [`ReportFile`].
pub const SCHEMA_VERSION: u32 = 1;

/// Where the target of a check comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// A number printed in the source material.
    PaperValue,
    /// A value computed by an independent method.
    DerivedOracle,
    /// A structural property with no reference number.
    PropertyOnly,
}

/// Outcome of one acceptance check.
///
/// `passed` is always recomputable from the other fields:
/// `|measured / target - 1| <= tolerance`, or `|measured - target| <=
/// tolerance` when `absolute` is set.
///
/// ```
/// use fracdrift::analysis::{CheckReport, Provenance};
/// let r = CheckReport::relative("demo", 1.01, 1.0, 0.02, Provenance::DerivedOracle);
/// assert!(r.passed && r.recompute());
/// let r = CheckReport::absolute("demo", 0.3, 0.0, 0.1, Provenance::PropertyOnly);
/// assert!(!r.passed);
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_id: String,
    /// Non-finite values (a check that could not be evaluated) are written
    /// as `null`.
    #[serde(deserialize_with = "nullable_f64")]
    pub measured: f64,
    pub target: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub runtime_ms: u64,
    pub provenance: Provenance,
    /// Tolerance is absolute rather than relative.
    pub absolute: bool,
    /// Counts toward the overall verdict; qualitative checks do not unless
    /// run in strict mode.
    pub gating: bool,
}

impl CheckReport {
    pub fn relative(id: impl Into<String>, measured: f64, target: f64, tolerance: f64, provenance: Provenance) -> Self {
        Self::build(id.into(), measured, target, tolerance, provenance, false)
    }

    pub fn absolute(id: impl Into<String>, measured: f64, target: f64, tolerance: f64, provenance: Provenance) -> Self {
        Self::build(id.into(), measured, target, tolerance, provenance, true)
    }

    /// A yes/no property encoded as `measured = 1` when it holds.
    pub fn property(id: impl Into<String>, holds: bool) -> Self {
        Self::absolute(id, if holds { 1.0 } else { 0.0 }, 1.0, 0.0, Provenance::PropertyOnly)
    }

    fn build(check_id: String, measured: f64, target: f64, tolerance: f64, provenance: Provenance, absolute: bool) -> Self {
        let mut r = Self {
            check_id,
            measured,
            target,
            tolerance,
            passed: false,
            runtime_ms: 0,
            provenance,
            absolute,
            gating: true,
        };
        r.passed = r.recompute();
        r
    }

    /// The pass rule applied to the stored numbers.
    pub fn recompute(&self) -> bool {
        let dev = if self.absolute { (self.measured - self.target).abs() } else { (self.measured / self.target - 1.0).abs() };
        dev <= self.tolerance
    }

    /// Deviation in the units of the tolerance.
    pub fn deviation(&self) -> f64 {
        if self.absolute { self.measured - self.target } else { self.measured / self.target - 1.0 }
    }

    pub fn with_runtime_ms(mut self, ms: u64) -> Self {
        self.runtime_ms = ms;
        self
    }

    pub fn non_gating(mut self) -> Self {
        self.gating = false;
        self
    }

    /// A failed report for a check that could not be evaluated.
    pub fn errored(id: impl Into<String>, provenance: Provenance) -> Self {
        Self::absolute(id, f64::NAN, 0.0, 0.0, provenance)
    }
}

fn nullable_f64<'de, D: serde::Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

/// Runs `f` and stamps the elapsed wall time on every report it returns.
pub fn timed(f: impl FnOnce() -> Vec<CheckReport>) -> Vec<CheckReport> {
    let start = Instant::now();
    let mut out = f();
    let ms = start.elapsed().as_millis() as u64;
    for r in &mut out {
        if r.runtime_ms == 0 {
            r.runtime_ms = ms;
        }
    }
    out
}

/// The on-disk report: `{"schema_version": 1, "checks": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema_version: u32,
    pub checks: Vec<CheckReport>,
}

impl ReportFile {
    pub fn new(checks: Vec<CheckReport>) -> Self {
        Self { schema_version: SCHEMA_VERSION, checks }
    }

    /// True when every check that counts has passed. With `strict`, the
    /// non-gating checks count too.
    pub fn all_passed(&self, strict: bool) -> bool {
        self.checks.iter().filter(|c| strict || c.gating).all(|c| c.passed)
    }
}
