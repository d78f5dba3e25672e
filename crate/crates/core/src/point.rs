//! Parameter types shared by every evaluator: the q parameter with its
//! branch tag, evaluation settings, derivative orders and results.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which evaluation route a q value takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    /// `q < 1 - delta`: direct series in q.
    SubOne,
    /// `|q - 1| <= delta`: classical limit.
    NearOne,
    /// `q > 1 + delta`: reduced to `1/q`.
    SuperOne,
}

/// A validated q parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QPoint {
    q: f64,
    branch: Branch,
}

impl QPoint {
    /// Classify `q` against a near-one band of half-width `delta`.
    pub fn new(q: f64, delta: f64) -> Result<Self> {
        if !(q.is_finite() && q > 0.0) {
            return Err(Error::InvalidParameter(format!("q must be a positive finite real, got {q}")));
        }
        if !(delta > 0.0 && delta < 0.5) {
            return Err(Error::InvalidParameter(format!("near-one band half-width must lie in (0, 0.5), got {delta}")));
        }
        let branch = if (q - 1.0).abs() <= delta {
            Branch::NearOne
        } else if q < 1.0 {
            Branch::SubOne
        } else {
            Branch::SuperOne
        };
        Ok(Self { q, branch })
    }

    /// The classical point `q = 1`.
    pub fn one() -> Self {
        Self { q: 1.0, branch: Branch::NearOne }
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    /// `ln q`, exactly zero on the near-one branch.
    pub fn ln_q(&self) -> f64 {
        match self.branch {
            Branch::NearOne => 0.0,
            _ => self.q.ln(),
        }
    }
}

/// Series truncation and routing settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    /// Absolute tolerance on the certified truncation tail.
    pub tol_abs: f64,
    /// Hard cap on series length.
    pub max_terms: usize,
    /// Half-width of the band around `q = 1` routed to classical functions.
    pub near_one_delta: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self { tol_abs: 1e-14, max_terms: 10_000_000, near_one_delta: 1e-6 }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol_abs > 0.0 && self.tol_abs.is_finite()) {
            return Err(Error::InvalidParameter(format!("tol_abs must be positive, got {}", self.tol_abs)));
        }
        if self.max_terms < 1 {
            return Err(Error::InvalidParameter("max_terms must be at least 1".into()));
        }
        if !(self.near_one_delta > 0.0 && self.near_one_delta < 0.5) {
            return Err(Error::InvalidParameter(format!(
                "near_one_delta must lie in (0, 0.5), got {}",
                self.near_one_delta
            )));
        }
        Ok(())
    }

    /// Build a [`QPoint`] using this config's near-one band.
    pub fn point(&self, q: f64) -> Result<QPoint> {
        QPoint::new(q, self.near_one_delta)
    }
}

/// Derivative order of the digamma family: 0 is psi itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct DerivOrder(u8);

impl DerivOrder {
    pub const PSI: DerivOrder = DerivOrder(0);
    pub const TRIGAMMA: DerivOrder = DerivOrder(1);
    pub const TETRAGAMMA: DerivOrder = DerivOrder(2);
    pub const PENTAGAMMA: DerivOrder = DerivOrder(3);
    pub const MAX: u8 = 3;

    pub fn new(m: u32) -> Result<Self> {
        if m <= Self::MAX as u32 {
            Ok(DerivOrder(m as u8))
        } else {
            Err(Error::UnsupportedOrder(m))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn all() -> [DerivOrder; 4] {
        [Self::PSI, Self::TRIGAMMA, Self::TETRAGAMMA, Self::PENTAGAMMA]
    }
}

impl TryFrom<u32> for DerivOrder {
    type Error = Error;
    fn try_from(m: u32) -> Result<Self> {
        DerivOrder::new(m)
    }
}

impl From<DerivOrder> for u32 {
    fn from(m: DerivOrder) -> u32 {
        m.0 as u32
    }
}

/// A value with a certified bound on its truncation error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub value: f64,
    /// Upper bound on the error from truncating infinite series/products.
    /// Floating-point rounding is not included.
    pub tail_bound: f64,
    pub terms_used: usize,
}

impl Evaluation {
    pub fn exact(value: f64) -> Self {
        Self { value, tail_bound: 0.0, terms_used: 0 }
    }
}

pub(crate) fn check_x(x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveArgument(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branch_classification() {
        let d = 1e-6;
        assert_eq!(QPoint::new(0.5, d).unwrap().branch(), Branch::SubOne);
        assert_eq!(QPoint::new(1.0 - 1e-9, d).unwrap().branch(), Branch::NearOne);
        assert_eq!(QPoint::new(1.0 + 1e-6, d).unwrap().branch(), Branch::NearOne);
        assert_eq!(QPoint::new(2.0, d).unwrap().branch(), Branch::SuperOne);
    }

    #[test]
    fn rejects_bad_q_and_delta() {
        assert!(QPoint::new(0.0, 1e-6).is_err());
        assert!(QPoint::new(-1.0, 1e-6).is_err());
        assert!(QPoint::new(f64::NAN, 1e-6).is_err());
        assert!(QPoint::new(0.5, 0.5).is_err());
        assert!(QPoint::new(0.5, 0.0).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(EvalConfig::default().validate().is_ok());
        let bad = EvalConfig { tol_abs: 0.0, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = EvalConfig { max_terms: 0, ..Default::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn deriv_order_range() {
        assert!(DerivOrder::new(3).is_ok());
        assert_eq!(DerivOrder::new(4), Err(Error::UnsupportedOrder(4)));
    }
}
