//! Auxiliary functions built from psi_q and Gamma_q, with first-order
//! propagation of the truncation bounds of their inputs.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{log_gamma_q, psi_all};
use crate::point::{check_x, EvalConfig, Evaluation, QPoint};
use crate::roots::{u_of_q, w_of_q};

/// Denominators smaller than this in magnitude are reported as
/// [`Error::PoleProximity`].
pub const POLE_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StatId {
    /// `Gamma(x) Gamma(1/x) / (Gamma(x) + Gamma(1/x))`
    #[serde(rename = "f_q")]
    FQ,
    /// `f_q(x^alpha)`
    #[serde(rename = "g_alpha")]
    GAlpha,
    /// Power mean `H_m(Gamma(x), Gamma(1/x))`
    #[serde(rename = "G_mean")]
    GMean,
    /// `x psi(x) / Gamma(x)`
    #[serde(rename = "theta1")]
    Theta1,
    /// `psi'(x) / psi(x)`
    #[serde(rename = "G_ratio")]
    GRatio,
    /// `x psi'(x) / psi(x)`
    #[serde(rename = "phi")]
    Phi,
    /// `psi(x) + psi(1/x)`
    #[serde(rename = "U_sum")]
    USum,
    /// `psi(x) psi(1/x)`
    #[serde(rename = "V_prod")]
    VProd,
    /// `psi(x) psi(1/x) / (psi(x) + psi(1/x))`
    #[serde(rename = "H_harm")]
    HHarm,
    /// `x psi'(x) + a psi(x)`
    #[serde(rename = "h_lin")]
    HLin,
    /// `psi^{(k+2)} psi^{(k)} - (psi^{(k+1)})^2`
    #[serde(rename = "S_qk")]
    SQk,
    /// `psi'(1) + psi''(1)`, independent of x
    #[serde(rename = "u_of_q")]
    UOfQ,
    /// `psi(1) - psi(1)^2 + psi'(1)`, independent of x
    #[serde(rename = "w_of_q")]
    WOfQ,
}

impl StatId {
    pub const ALL: [StatId; 13] = [
        StatId::FQ,
        StatId::GAlpha,
        StatId::GMean,
        StatId::Theta1,
        StatId::GRatio,
        StatId::Phi,
        StatId::USum,
        StatId::VProd,
        StatId::HHarm,
        StatId::HLin,
        StatId::SQk,
        StatId::UOfQ,
        StatId::WOfQ,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StatId::FQ => "f_q",
            StatId::GAlpha => "g_alpha",
            StatId::GMean => "G_mean",
            StatId::Theta1 => "theta1",
            StatId::GRatio => "G_ratio",
            StatId::Phi => "phi",
            StatId::USum => "U_sum",
            StatId::VProd => "V_prod",
            StatId::HHarm => "H_harm",
            StatId::HLin => "h_lin",
            StatId::SQk => "S_qk",
            StatId::UOfQ => "u_of_q",
            StatId::WOfQ => "w_of_q",
        }
    }

    /// Name of the extra parameter this statistic needs, if any.
    pub fn parameter(self) -> Option<&'static str> {
        match self {
            StatId::GAlpha => Some("alpha"),
            StatId::GMean => Some("m"),
            StatId::HLin => Some("a"),
            StatId::SQk => Some("k"),
            _ => None,
        }
    }
}

impl fmt::Display for StatId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StatId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        StatId::ALL
            .iter()
            .copied()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown statistic `{s}`")))
    }
}

/// Extra argument for the parameterised statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatParam {
    M(f64),
    A(f64),
    K(u32),
    Alpha(f64),
}

/// A value with an absolute bound on the error inherited from truncation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounded {
    pub v: f64,
    pub e: f64,
}

impl Bounded {
    pub fn new(v: f64, e: f64) -> Self {
        Self { v, e }
    }

    pub fn exact(v: f64) -> Self {
        Self { v, e: 0.0 }
    }

    pub fn scale(self, c: f64) -> Self {
        Self { v: c * self.v, e: c.abs() * self.e }
    }

    pub fn square(self) -> Self {
        self * self
    }

    /// `self / d`, failing when `d` is too close to zero to trust.
    pub fn checked_div(self, d: Bounded) -> Result<Self> {
        let dm = d.v.abs() - d.e;
        if d.v.abs() < POLE_THRESHOLD || dm <= 0.0 {
            return Err(Error::PoleProximity { x: f64::NAN, denominator: d.v });
        }
        let v = self.v / d.v;
        Ok(Self { v, e: (self.e + v.abs() * d.e) / dm })
    }

    fn into_eval(self, terms_used: usize) -> Evaluation {
        Evaluation { value: self.v, tail_bound: self.e, terms_used }
    }
}

impl From<Evaluation> for Bounded {
    fn from(e: Evaluation) -> Self {
        Self { v: e.value, e: e.tail_bound }
    }
}

impl Add for Bounded {
    type Output = Bounded;
    fn add(self, o: Bounded) -> Bounded {
        Bounded { v: self.v + o.v, e: self.e + o.e }
    }
}

impl Sub for Bounded {
    type Output = Bounded;
    fn sub(self, o: Bounded) -> Bounded {
        Bounded { v: self.v - o.v, e: self.e + o.e }
    }
}

impl Mul for Bounded {
    type Output = Bounded;
    fn mul(self, o: Bounded) -> Bounded {
        Bounded { v: self.v * o.v, e: self.v.abs() * o.e + o.v.abs() * self.e + self.e * o.e }
    }
}

impl Neg for Bounded {
    type Output = Bounded;
    fn neg(self) -> Bounded {
        Bounded { v: -self.v, e: self.e }
    }
}

/// `ln(e^a + e^b)` without overflow.
pub fn logsumexp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `ln f_q(x)` from `A = ln Gamma(x)`, `B = ln Gamma(1/x)`:
/// `f = 1 / (e^{-A} + e^{-B})`.
pub fn ln_harmonic_quotient(a: f64, b: f64) -> f64 {
    -logsumexp(-a, -b)
}

/// `ln H_m(e^A, e^B)`; `m = 0` is the geometric mean.
pub fn ln_power_mean(m: f64, a: f64, b: f64) -> f64 {
    if m == 0.0 {
        0.5 * (a + b)
    } else {
        (logsumexp(m * a, m * b) - std::f64::consts::LN_2) / m
    }
}

/// `ln Gamma_q` at `x` and `1/x`, as bounded values.
fn ln_gamma_pair(x: f64, q: QPoint, cfg: &EvalConfig) -> Result<(Bounded, Bounded, usize)> {
    let a = log_gamma_q(x, q, cfg)?;
    let b = log_gamma_q(1.0 / x, q, cfg)?;
    Ok((a.into(), b.into(), a.terms_used + b.terms_used))
}

fn exp_bounded(l: Bounded) -> Bounded {
    let v = l.v.exp();
    Bounded { v, e: v * l.e.exp_m1() }
}

fn need_param(id: StatId, extra: Option<StatParam>) -> Result<StatParam> {
    extra.ok_or(Error::MissingParameter(id.parameter().unwrap_or("parameter")))
}

fn need_real(id: StatId, extra: Option<StatParam>) -> Result<f64> {
    match (id, need_param(id, extra)?) {
        (StatId::GAlpha, StatParam::Alpha(v)) | (StatId::GMean, StatParam::M(v)) | (StatId::HLin, StatParam::A(v)) => {
            Ok(v)
        }
        (_, other) => Err(Error::InvalidParameter(format!("{id} does not take {other:?}"))),
    }
}

fn with_x(e: Error, x: f64) -> Error {
    match e {
        Error::PoleProximity { denominator, .. } => Error::PoleProximity { x, denominator },
        other => other,
    }
}

/// Evaluate one of the named auxiliary functions.
pub fn eval_statistic(
    id: StatId,
    x: f64,
    q: QPoint,
    extra: Option<StatParam>,
    cfg: &EvalConfig,
) -> Result<Evaluation> {
    check_x(x)?;
    if id.parameter().is_none() && extra.is_some() {
        return Err(Error::InvalidParameter(format!("{id} takes no extra parameter")));
    }
    let mut terms = 0;
    let mut psi = |t: f64| -> Result<[Bounded; 4]> {
        let s = psi_all(t, q, cfg)?;
        terms += s.iter().map(|e| e.terms_used).max().unwrap_or(0);
        Ok([s[0].into(), s[1].into(), s[2].into(), s[3].into()])
    };
    let bx = Bounded::exact(x);
    match id {
        StatId::FQ | StatId::GAlpha => {
            let t = if id == StatId::GAlpha {
                let alpha = need_real(id, extra)?;
                let t = x.powf(alpha);
                check_x(t)?;
                t
            } else {
                x
            };
            let (a, b, n) = ln_gamma_pair(t, q, cfg)?;
            let l = ln_harmonic_quotient(a.v, b.v);
            Ok(exp_bounded(Bounded::new(l, a.e.max(b.e))).into_eval(n))
        }
        StatId::GMean => {
            let m = need_real(id, extra)?;
            let (a, b, n) = ln_gamma_pair(x, q, cfg)?;
            let l = ln_power_mean(m, a.v, b.v);
            Ok(exp_bounded(Bounded::new(l, a.e.max(b.e))).into_eval(n))
        }
        StatId::Theta1 => {
            let lg = log_gamma_q(x, q, cfg)?;
            let inv_gamma = exp_bounded(Bounded::new(-lg.value, lg.tail_bound));
            let p = psi(x)?;
            Ok((bx * p[0] * inv_gamma).into_eval(lg.terms_used + terms))
        }
        StatId::GRatio | StatId::Phi => {
            let p = psi(x)?;
            let num = if id == StatId::Phi { bx * p[1] } else { p[1] };
            let v = num.checked_div(p[0]).map_err(|e| with_x(e, x))?;
            Ok(v.into_eval(terms))
        }
        StatId::USum | StatId::VProd | StatId::HHarm => {
            let a = psi(x)?[0];
            let b = psi(1.0 / x)?[0];
            let v = match id {
                StatId::USum => a + b,
                StatId::VProd => a * b,
                _ => (a * b).checked_div(a + b).map_err(|e| with_x(e, x))?,
            };
            Ok(v.into_eval(terms))
        }
        StatId::HLin => {
            let a = need_real(id, extra)?;
            let p = psi(x)?;
            Ok((bx * p[1] + p[0].scale(a)).into_eval(terms))
        }
        StatId::SQk => {
            match need_param(id, extra)? {
                StatParam::K(1) => {}
                StatParam::K(k) => return Err(Error::UnsupportedOrder(k + 2)),
                other => return Err(Error::InvalidParameter(format!("S_qk does not take {other:?}"))),
            }
            let p = psi(x)?;
            Ok((p[3] * p[1] - p[2].square()).into_eval(terms))
        }
        StatId::UOfQ => Ok(Evaluation::exact(u_of_q(q, cfg)?)),
        StatId::WOfQ => Ok(Evaluation::exact(w_of_q(q, cfg)?)),
    }
}

/// Membership of q in a set defined by a sign condition, with the value of
/// the defining function as margin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub member: bool,
    pub margin: f64,
}

/// `q` such that `psi(1) - psi(1)^2 + psi'(1) >= 0`.
pub fn membership_j(q: QPoint, cfg: &EvalConfig) -> Result<Membership> {
    let w = w_of_q(q, cfg)?;
    Ok(Membership { member: w >= 0.0, margin: w })
}

/// `q` such that `psi'(1) + psi''(1) >= 0`.
pub fn membership_i(q: QPoint, cfg: &EvalConfig) -> Result<Membership> {
    let u = u_of_q(q, cfg)?;
    Ok(Membership { member: u >= 0.0, margin: u })
}
