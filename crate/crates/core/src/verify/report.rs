use serde::{Deserialize, Serialize};

use super::catalog::PropertyId;

/// Relative margins at or above `-MARGIN_TOLERANCE` count as satisfied.
pub const MARGIN_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub q: f64,
    pub x: f64,
    pub margin: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: PropertyId,
    pub verdict: Verdict,
    /// Smallest relative margin seen, `None` when nothing was checked.
    pub worst_margin: Option<f64>,
    /// Where the smallest margin occurred.
    pub witness: Option<Witness>,
    pub evaluations: usize,
    /// Samples dropped near poles and equality points.
    pub excluded: usize,
    /// q values to which no clause of the property applied.
    pub skipped_q: Vec<f64>,
    /// Set when an evaluation failed and the sweep was aborted.
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ControlStatus {
    /// The expected violation was found.
    Violated,
    /// The check held everywhere, so the control did not fire.
    NotViolated,
    /// No q in the grid can witness this control.
    NotApplicable,
}

/// A check that is expected to fail, guarding against a harness that
/// cannot detect violations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlReport {
    pub name: String,
    pub property: PropertyId,
    pub status: ControlStatus,
    pub q_values: Vec<f64>,
    pub worst_margin: Option<f64>,
    pub witness: Option<Witness>,
    pub evaluations: usize,
    pub error: Option<String>,
}

impl ControlReport {
    pub fn ok(&self) -> bool {
        self.status != ControlStatus::NotViolated && self.error.is_none()
    }
}

/// Margin recorded for comparisons with a non-finite operand. Finite so
/// that reports stay representable in JSON.
pub const NON_FINITE_MARGIN: f64 = f64::MIN;

/// `(rhs - lhs) / max(1, |lhs|, |rhs|)`.
pub fn relative_margin(lhs: f64, rhs: f64) -> f64 {
    let m = (rhs - lhs) / 1f64.max(lhs.abs()).max(rhs.abs());
    if m.is_nan() || !lhs.is_finite() || !rhs.is_finite() {
        NON_FINITE_MARGIN
    } else {
        m
    }
}

/// Accumulates margins for one property and keeps the worst.
#[derive(Debug, Default)]
pub(crate) struct Tally {
    pub worst: Option<Witness>,
    pub evaluations: usize,
    pub excluded: usize,
}

impl Tally {
    pub fn record<D: FnOnce() -> String>(&mut self, q: f64, x: f64, margin: f64, detail: D) {
        self.evaluations += 1;
        let replace = match &self.worst {
            None => true,
            Some(w) => margin < w.margin || (margin == w.margin && (q, x) < (w.q, w.x)),
        };
        if replace {
            self.worst = Some(Witness { q, x, margin, detail: detail() });
        }
    }

    /// `lhs <= rhs`.
    pub fn le(&mut self, q: f64, x: f64, lhs: f64, rhs: f64, what: &str) {
        let m = relative_margin(lhs, rhs);
        self.record(q, x, m, || format!("{what}: lhs={lhs:e} rhs={rhs:e}"));
    }

    /// `lhs >= rhs`.
    pub fn ge(&mut self, q: f64, x: f64, lhs: f64, rhs: f64, what: &str) {
        let m = relative_margin(rhs, lhs);
        self.record(q, x, m, || format!("{what}: lhs={lhs:e} rhs={rhs:e}"));
    }

    fn monotone<K: Fn(f64) -> (f64, f64)>(&mut self, pts: &[(f64, f64)], up: bool, what: &str, key: K) {
        let dir = if up { "nondecreasing" } else { "nonincreasing" };
        for w in pts.windows(2) {
            let ((t0, v0), (t1, v1)) = (w[0], w[1]);
            let m = if up { relative_margin(v0, v1) } else { relative_margin(v1, v0) };
            let (q, x) = key(t0);
            self.record(q, x, m, || format!("{what} {dir}: v({t0:e})={v0:e} v({t1:e})={v1:e}"));
        }
    }

    /// Consecutive samples `(x, v)` at fixed q must not increase.
    pub fn nonincreasing(&mut self, q: f64, pts: &[(f64, f64)], what: &str) {
        self.monotone(pts, false, what, |x| (q, x));
    }

    /// Consecutive samples `(x, v)` at fixed q must not decrease.
    pub fn nondecreasing(&mut self, q: f64, pts: &[(f64, f64)], what: &str) {
        self.monotone(pts, true, what, |x| (q, x));
    }

    /// Consecutive samples `(q, v)` at fixed x must not increase.
    pub fn nonincreasing_in_q(&mut self, x: f64, pts: &[(f64, f64)], what: &str) {
        self.monotone(pts, false, what, |q| (q, x));
    }

    /// Consecutive samples `(q, v)` at fixed x must not decrease.
    pub fn nondecreasing_in_q(&mut self, x: f64, pts: &[(f64, f64)], what: &str) {
        self.monotone(pts, true, what, |q| (q, x));
    }

    pub fn worst_margin(&self) -> Option<f64> {
        self.worst.as_ref().map(|w| w.margin)
    }

    pub fn violated(&self) -> bool {
        self.worst_margin().is_some_and(|m| m < -MARGIN_TOLERANCE)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn margins_are_relative_above_one() {
        assert_eq!(relative_margin(1.0, 3.0), 2.0 / 3.0);
        assert_eq!(relative_margin(0.1, 0.3), 0.3 - 0.1);
        assert_eq!(relative_margin(f64::NAN, 1.0), NON_FINITE_MARGIN);
        assert_eq!(relative_margin(f64::INFINITY, f64::INFINITY), NON_FINITE_MARGIN);
    }

    #[test]
    fn ties_break_to_smallest_q_then_x() {
        let mut t = Tally::default();
        t.record(2.0, 5.0, -1.0, || "a".into());
        t.record(1.0, 7.0, -1.0, || "b".into());
        t.record(1.0, 3.0, -1.0, || "c".into());
        t.record(0.5, 1.0, -0.5, || "d".into());
        let w = t.worst.unwrap();
        assert_eq!((w.q, w.x, w.detail.as_str()), (1.0, 3.0, "c"));
        assert_eq!(t.evaluations, 4);
    }

    #[test]
    fn monotone_checks_detect_reversals() {
        let mut t = Tally::default();
        t.nonincreasing(1.0, &[(1.0, 3.0), (2.0, 2.0), (3.0, 2.5)], "v");
        assert!(t.violated());
        assert_eq!(t.worst.unwrap().x, 2.0);
        let mut t = Tally::default();
        t.nondecreasing(1.0, &[(1.0, 1.0), (2.0, 1.0), (3.0, 1.0 + 1e-12)], "v");
        assert!(!t.violated());
    }
}
