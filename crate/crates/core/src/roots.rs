//! Bracketed root finding and the special points of the q-digamma family.

use serde::{Deserialize, Serialize};

use crate::classical;
use crate::error::{Error, Result};
use crate::eval::{psi_all, psi_q, psi_q_deriv};
use crate::point::{DerivOrder, EvalConfig, QPoint};

/// Default absolute width of the final bracket.
pub const X_TOL: f64 = 1e-12;

const MAX_ITERATIONS: usize = 200;
const Z_BRACKET_CAP: f64 = 1_099_511_627_776.0; // 2^40
/// Slack allowed on `u(q) >= 0` when deciding whether `z_q` exists.
const I_MEMBERSHIP_SLACK: f64 = 1e-12;

/// An interval whose endpoint values have opposite signs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> Result<Self> {
        let finite = lo.is_finite() && hi.is_finite() && f_lo.is_finite() && f_hi.is_finite();
        let straddles = (f_lo <= 0.0 && f_hi >= 0.0) || (f_lo >= 0.0 && f_hi <= 0.0);
        if !(finite && lo < hi && straddles) {
            return Err(Error::InvalidBracket { lo, hi, f_lo, f_hi });
        }
        Ok(Self { lo, hi, f_lo, f_hi })
    }

    /// Evaluate `f` at both ends and validate.
    pub fn around<F>(f: &mut F, lo: f64, hi: f64) -> Result<Self>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let f_lo = f(lo)?;
        let f_hi = f(hi)?;
        Self::new(lo, hi, f_lo, f_hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootResult {
    pub root: f64,
    /// `f(root)`.
    pub residual: f64,
    pub bracket_width: f64,
    pub iterations: usize,
}

/// Bisection with secant steps. A secant step is only taken when the
/// previous step at least halved the bracket, so the width still shrinks
/// geometrically.
pub fn solve_bracketed<F>(mut f: F, b: Bracket, tol: f64) -> Result<RootResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut c, mut fa, mut fc) = (b.lo, b.hi, b.f_lo, b.f_hi);
    if fa == 0.0 {
        return Ok(RootResult { root: a, residual: 0.0, bracket_width: 0.0, iterations: 0 });
    }
    if fc == 0.0 {
        return Ok(RootResult { root: c, residual: 0.0, bracket_width: 0.0, iterations: 0 });
    }
    let mut try_secant = true;
    let mut iterations = 0;
    while c - a > tol {
        let mid = 0.5 * (a + c);
        if mid <= a || mid >= c {
            break;
        }
        if iterations >= MAX_ITERATIONS {
            return Err(Error::MaxIterations { iterations, width: c - a });
        }
        iterations += 1;
        let mut t = mid;
        if try_secant {
            let s = c - fc * (c - a) / (fc - fa);
            if s > a && s < c {
                t = s;
            }
        }
        let ft = f(t)?;
        if !ft.is_finite() {
            return Err(Error::NonFinite(format!("f({t}) = {ft} inside bracket")));
        }
        let old = c - a;
        if ft == 0.0 {
            return Ok(RootResult { root: t, residual: 0.0, bracket_width: 0.0, iterations });
        }
        if (ft < 0.0) == (fa < 0.0) {
            a = t;
            fa = ft;
        } else {
            c = t;
            fc = ft;
        }
        try_secant = c - a <= 0.5 * old;
    }
    let (root, residual) = if fa.abs() <= fc.abs() { (a, fa) } else { (c, fc) };
    Ok(RootResult { root, residual, bracket_width: c - a, iterations })
}

/// Zero of `psi_q` on `(1, 3/2)`.
pub fn find_x_q(q: QPoint, cfg: &EvalConfig) -> Result<RootResult> {
    let mut f = |x: f64| psi_q(x, q, cfg).map(|e| e.value);
    let b = Bracket::around(&mut f, 1.0, 1.5)?;
    solve_bracketed(f, b, X_TOL)
}

/// `x psi + x^2 psi' - (x psi)^2`, the numerator of `theta_1'` up to the
/// positive factor `Gamma_q(x) / x`.
pub fn theta1_numerator(x: f64, q: QPoint, cfg: &EvalConfig) -> Result<f64> {
    let p0 = psi_q(x, q, cfg)?.value;
    let p1 = psi_q_deriv(x, q, DerivOrder::TRIGAMMA, cfg)?.value;
    let xp = x * p0;
    Ok(xp + x * x * p1 - xp * xp)
}

/// Turning point of `theta_1` on `(1, x_q)`, defined only when `w(q) < 0`.
pub fn find_y_q(q: QPoint, cfg: &EvalConfig) -> Result<RootResult> {
    let w = w_of_q(q, cfg)?;
    if w >= 0.0 {
        return Err(Error::NotApplicable(format!("q = {} is in J (w(q) = {w} >= 0), so y_q is undefined", q.q())));
    }
    let xq = find_x_q(q, cfg)?.root;
    let mut f = |x: f64| theta1_numerator(x, q, cfg);
    let b = Bracket::around(&mut f, 1.0, xq)?;
    solve_bracketed(f, b, X_TOL)
}

/// `psi_q(x) + psi_q(1/x)`.
pub fn u_sum(x: f64, q: QPoint, cfg: &EvalConfig) -> Result<f64> {
    Ok(psi_q(x, q, cfg)?.value + psi_q(1.0 / x, q, cfg)?.value)
}

/// Zero of `psi_q(x) + psi_q(1/x)` above `x_q`, defined for `u(q) >= 0`.
pub fn find_z_q(q: QPoint, cfg: &EvalConfig) -> Result<RootResult> {
    let u = u_of_q(q, cfg)?;
    if u < -I_MEMBERSHIP_SLACK {
        return Err(Error::NotApplicable(format!("q = {} is below p0 (u(q) = {u} < 0), so z_q is undefined", q.q())));
    }
    let xq = find_x_q(q, cfg)?.root;
    let f = |x: f64| u_sum(x, q, cfg);
    let f_lo = f(xq)?;
    let mut hi = (xq + 1.0).max(2.0);
    let mut f_hi = f(hi)?;
    while f_hi <= 0.0 {
        if hi >= Z_BRACKET_CAP {
            return Err(Error::InvalidBracket { lo: xq, hi, f_lo, f_hi });
        }
        hi *= 2.0;
        f_hi = f(hi)?;
    }
    let b = Bracket::new(xq, hi, f_lo, f_hi)?;
    solve_bracketed(f, b, X_TOL)
}

/// `u(q) = psi'_q(1) + psi''_q(1)`.
pub fn u_of_q(q: QPoint, cfg: &EvalConfig) -> Result<f64> {
    let s = psi_all(1.0, q, cfg)?;
    Ok(s[1].value + s[2].value)
}

/// `w(q) = psi_q(1) - psi_q(1)^2 + psi'_q(1)`.
pub fn w_of_q(q: QPoint, cfg: &EvalConfig) -> Result<f64> {
    let s = psi_all(1.0, q, cfg)?;
    let p = s[0].value;
    Ok(p - p * p + s[1].value)
}

fn solve_in_q<F>(g: F, lo: f64, hi: f64, cfg: &EvalConfig) -> Result<RootResult>
where
    F: Fn(QPoint, &EvalConfig) -> Result<f64>,
{
    let mut f = |q: f64| g(cfg.point(q)?, cfg);
    let b = Bracket::around(&mut f, lo, hi)?;
    solve_bracketed(f, b, X_TOL)
}

/// The unique zero of `u` on `(3, 4.5)`.
pub fn find_p0(cfg: &EvalConfig) -> Result<RootResult> {
    solve_in_q(u_of_q, 3.0, 4.5, cfg)
}

/// Upper end of the set where `w >= 0`, searched on `(4, 10)`.
pub fn find_j_boundary(cfg: &EvalConfig) -> Result<RootResult> {
    solve_in_q(w_of_q, 4.0, 10.0, cfg)
}

/// The q at which `sqrt(q)` is the real root of `t^3 - t - 1`.
pub fn q0_closed_form() -> f64 {
    let c2 = 2f64.cbrt();
    let s69 = 69f64.sqrt();
    let q0 = (2.0 * c2 + (25.0 - 3.0 * s69).cbrt() + (25.0 + 3.0 * s69).cbrt()) / (3.0 * c2);
    let t = q0.sqrt();
    assert!((t * t * t - t - 1.0).abs() <= 1e-12, "closed form drifted: q0 = {q0}");
    q0
}

/// Zero of the classical digamma function.
pub fn classical_digamma_zero() -> Result<f64> {
    let mut f = |x: f64| classical::classical_psi(x, DerivOrder::PSI);
    let b = Bracket::around(&mut f, 1.0, 1.5)?;
    Ok(solve_bracketed(f, b, X_TOL)?.root)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub q0: f64,
    pub p0: f64,
    pub j_boundary: f64,
    pub x1_classical: f64,
}

impl Constants {
    pub fn compute(cfg: &EvalConfig) -> Result<Self> {
        Ok(Self {
            q0: q0_closed_form(),
            p0: find_p0(cfg)?.root,
            j_boundary: find_j_boundary(cfg)?.root,
            x1_classical: classical_digamma_zero()?,
        })
    }
}
