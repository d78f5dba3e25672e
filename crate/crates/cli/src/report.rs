use serde::{Deserialize, Serialize};

use qgamma_core::verify::{ControlReport, ControlStatus, GridSpec, PropertyReport, Verdict, VerifyOutcome};
use qgamma_core::{Constants, EvalConfig, PropertyId};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub eval: EvalConfig,
    pub grid: GridSpec,
    pub properties: Vec<PropertyId>,
    pub jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub properties: usize,
    pub passed: usize,
    pub failed: usize,
    /// Properties aborted by a numerical error (counted in `failed` too).
    pub errored: usize,
    pub controls: usize,
    pub controls_violated: usize,
    pub controls_not_violated: usize,
    pub controls_not_applicable: usize,
}

impl Summary {
    pub fn of(properties: &[PropertyReport], controls: &[ControlReport]) -> Self {
        let count = |s: ControlStatus| controls.iter().filter(|c| c.status == s).count();
        let passed = properties.iter().filter(|r| r.verdict == Verdict::Pass).count();
        Self {
            properties: properties.len(),
            passed,
            failed: properties.len() - passed,
            errored: properties.iter().filter(|r| r.error.is_some()).count(),
            controls: controls.len(),
            controls_violated: count(ControlStatus::Violated),
            controls_not_violated: count(ControlStatus::NotViolated),
            controls_not_applicable: count(ControlStatus::NotApplicable),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: u32,
    pub tool_version: String,
    pub config: ConfigEcho,
    pub constants: Constants,
    pub properties: Vec<PropertyReport>,
    pub controls: Vec<ControlReport>,
    pub summary: Summary,
    /// Seconds spent in the sweep; absent with `--no-timing`.
    pub wall_time_s: Option<f64>,
}

impl ReportDocument {
    pub fn new(config: ConfigEcho, constants: Constants, outcome: VerifyOutcome, wall_time_s: Option<f64>) -> Self {
        let summary = Summary::of(&outcome.properties, &outcome.controls);
        Self {
            schema: SCHEMA,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            constants,
            properties: outcome.properties,
            controls: outcome.controls,
            summary,
            wall_time_s,
        }
    }

    /// Summary counts agree with the lists they summarise.
    pub fn is_consistent(&self) -> bool {
        self.summary == Summary::of(&self.properties, &self.controls)
    }
}
