//! Gamma_q, log Gamma_q and psi_q^{(m)} with certified truncation bounds.
//!
//! Every q > 1 is reduced to the base `p = 1/q < 1`; the near-one band is
//! routed to the classical functions. For `p < 1` the digamma family uses
//!
//! ```text
//! psi_p(x)      = -log(1-p) + log p * sum_{n>=1} p^{nx} / (1-p^n)
//! psi_p^(m)(x)  = (log p)^{m+1} * sum_{n>=1} n^m p^{nx} / (1-p^n)
//! ```
//!
//! The series ratio is about `p^x`, which is close to one when `x |log p|`
//! is small. The argument is therefore first shifted upward with the exact
//! recurrence `psi(x) = psi(x+1) + log p * p^x / (1-p^x)` (and its
//! derivatives) until `x >= sqrt(32 / |log p|)`. That balances shift terms
//! against series terms, so the cost grows like `|log p|^{-1/2}` instead of
//! `|log p|^{-1}`.

use crate::classical;
use crate::error::{Error, Result};
use crate::point::{check_x, Branch, DerivOrder, EvalConfig, Evaluation, QPoint};
use crate::sum::NeumaierSum;

/// Largest finite value of `ln Gamma_q` that still exponentiates.
const LN_MAX: f64 = 709.782_712_893_384;

const SHIFT_SCALE: f64 = 32.0;

/// All four orders `psi_q, psi'_q, psi''_q, psi'''_q` at one point.
pub type PsiSet = [Evaluation; 4];

/// `Gamma_q(x)`, computed as `exp(log Gamma_q(x))`.
///
/// `tail_bound` is the truncation bound on the log propagated through `exp`,
/// so it is relative to the magnitude of the result.
pub fn gamma_q(x: f64, q: QPoint, cfg: &EvalConfig) -> Result<Evaluation> {
    let lg = log_gamma_q(x, q, cfg)?;
    if lg.value > LN_MAX {
        return Err(Error::Overflow { log_value: lg.value });
    }
    let value = lg.value.exp();
    Ok(Evaluation { value, tail_bound: value * lg.tail_bound.exp_m1(), terms_used: lg.terms_used })
}

/// `log Gamma_q(x)`, summed in the log domain throughout.
pub fn log_gamma_q(x: f64, q: QPoint, cfg: &EvalConfig) -> Result<Evaluation> {
    check_x(x)?;
    match q.branch() {
        Branch::NearOne => classical::ln_gamma_eval(x),
        Branch::SubOne => log_gamma_sub_one(x, q.q().ln(), cfg),
        Branch::SuperOne => {
            // Gamma_q(x) = q^{(x-1)(x-2)/2} Gamma_{1/q}(x)
            let ln_q = q.q().ln();
            let mut e = log_gamma_sub_one(x, -ln_q, cfg)?;
            e.value += 0.5 * (x - 1.0) * (x - 2.0) * ln_q;
            Ok(e)
        }
    }
}

/// `psi_q(x)`.
pub fn psi_q(x: f64, q: QPoint, cfg: &EvalConfig) -> Result<Evaluation> {
    Ok(psi_upto(x, q, 0, cfg)?[0])
}

/// `psi_q^{(m)}(x)` for `m` in `1..=3`.
pub fn psi_q_deriv(x: f64, q: QPoint, m: DerivOrder, cfg: &EvalConfig) -> Result<Evaluation> {
    if m.get() == 0 {
        return Err(Error::InvalidParameter("psi_q_deriv needs m >= 1; use psi_q for m = 0".into()));
    }
    Ok(psi_upto(x, q, m.index(), cfg)?[m.index()])
}

/// `psi_q^{(m)}(x)` for any `m` in `0..=3`.
pub fn psi_q_order(x: f64, q: QPoint, m: DerivOrder, cfg: &EvalConfig) -> Result<Evaluation> {
    Ok(psi_upto(x, q, m.index(), cfg)?[m.index()])
}

/// All four orders from one pass over the series.
pub fn psi_all(x: f64, q: QPoint, cfg: &EvalConfig) -> Result<PsiSet> {
    psi_upto(x, q, 3, cfg)
}

/// Orders `0..=upto` are filled; the rest are NaN.
fn psi_upto(x: f64, q: QPoint, upto: usize, cfg: &EvalConfig) -> Result<PsiSet> {
    check_x(x)?;
    match q.branch() {
        Branch::NearOne => {
            let mut out = [nan_eval(); 4];
            for (m, slot) in out.iter_mut().enumerate().take(upto + 1) {
                *slot = classical::polygamma_eval(x, DerivOrder::new(m as u32)?)?;
            }
            Ok(out)
        }
        Branch::SubOne => psi_sub_one(x, q.q().ln(), upto, cfg),
        Branch::SuperOne => {
            let ln_q = q.q().ln();
            let mut out = psi_sub_one(x, -ln_q, upto, cfg)?;
            out[0].value += (x - 1.5) * ln_q;
            if upto >= 1 {
                out[1].value += ln_q;
            }
            Ok(out)
        }
    }
}

fn nan_eval() -> Evaluation {
    Evaluation { value: f64::NAN, tail_bound: f64::NAN, terms_used: 0 }
}

/// Number of unit shifts that lift `x` to the balanced starting point.
fn shift_count(x: f64, ln_p: f64) -> f64 {
    let target = (SHIFT_SCALE / -ln_p).sqrt();
    if x >= target {
        0.0
    } else {
        (target - x).ceil()
    }
}

fn check_budget(terms: usize, bound: f64, cfg: &EvalConfig) -> Result<()> {
    if terms > cfg.max_terms {
        Err(Error::TailBoundUnmet { terms, bound })
    } else {
        Ok(())
    }
}

/// Digamma family for base `p = exp(ln_p) < 1`.
fn psi_sub_one(x: f64, ln_p: f64, upto: usize, cfg: &EvalConfig) -> Result<PsiSet> {
    debug_assert!(ln_p < 0.0);
    let shifts = shift_count(x, ln_p);
    let k_shift = shifts as usize;
    check_budget(k_shift, f64::INFINITY, cfg)?;

    let lp = [ln_p, ln_p.powi(2), ln_p.powi(3), ln_p.powi(4)];
    let mut acc: [NeumaierSum; 4] = Default::default();
    for j in 0..k_shift {
        let y = x + j as f64;
        let u = (y * ln_p).exp();
        let d = -(y * ln_p).exp_m1();
        let v = u / d;
        acc[0].add(lp[0] * v);
        if upto >= 1 {
            let v1 = v / d;
            acc[1].add(lp[1] * v1);
            if upto >= 2 {
                let v2 = v1 / d;
                acc[2].add(lp[2] * v2 * (1.0 + u));
                if upto >= 3 {
                    acc[3].add(lp[3] * (v2 / d) * (1.0 + u * (4.0 + u)));
                }
            }
        }
    }

    let y = x + shifts;
    let p_y = (y * ln_p).exp();
    let mut series: [NeumaierSum; 4] = Default::default();
    let mut bounds = [0.0f64; 4];
    let mut n = 1usize;
    loop {
        let nf = n as f64;
        let base = (nf * y * ln_p).exp() / -(nf * ln_p).exp_m1();
        // tail from n onward: t_n / (1 - r), r = ((n+1)/n)^m p^y
        let grow = (nf + 1.0) / nf;
        let mut done = true;
        let mut term = base;
        for m in 0..=upto {
            let r = grow.powi(m as i32) * p_y;
            bounds[m] = if term == 0.0 {
                0.0
            } else if r < 1.0 {
                lp[m].abs() * term / (1.0 - r)
            } else {
                f64::INFINITY
            };
            if bounds[m] > cfg.tol_abs {
                done = false;
            }
            term *= nf;
        }
        if done {
            break;
        }
        let terms = k_shift + n;
        if terms > cfg.max_terms {
            let worst = bounds.iter().take(upto + 1).cloned().fold(0.0, f64::max);
            return Err(Error::TailBoundUnmet { terms, bound: worst });
        }
        let mut term = base;
        for s in series.iter_mut().take(upto + 1) {
            s.add(term);
            term *= nf;
        }
        n += 1;
    }

    let terms_used = k_shift + n - 1;
    let mut out = [nan_eval(); 4];
    let log_one_minus_p = (-ln_p.exp_m1()).ln();
    for m in 0..=upto {
        let mut total = NeumaierSum::new();
        if m == 0 {
            total.add(-log_one_minus_p);
        }
        total.add(lp[m] * series[m].value());
        total.add(acc[m].value());
        out[m] = Evaluation { value: total.value(), tail_bound: bounds[m], terms_used };
    }
    Ok(out)
}

/// `log Gamma_p(x)` for `p = exp(ln_p) < 1`:
///
/// ```text
/// log Gamma_p(x) = (1-x) log(1-p) + S(x) - S(1),
/// S(x) = sum_{k>=1} p^{kx} / (k (1-p^k)),   S(1) = -log (p;p)_inf
/// ```
fn log_gamma_sub_one(x: f64, ln_p: f64, cfg: &EvalConfig) -> Result<Evaluation> {
    debug_assert!(ln_p < 0.0);
    let shifts = shift_count(x, ln_p);
    let k_shift = shifts as usize;
    check_budget(k_shift, f64::INFINITY, cfg)?;
    let log_one_minus_p = (-ln_p.exp_m1()).ln();

    // log Gamma(x) = log Gamma(x+1) - log((1-p^x)/(1-p))
    let mut acc = NeumaierSum::new();
    for j in 0..k_shift {
        let y = x + j as f64;
        acc.add(log_one_minus_p - (-(y * ln_p).exp_m1()).ln());
    }
    let y = x + shifts;
    let half_tol = 0.5 * cfg.tol_abs;

    let (s_y, s_y_tail, s_y_terms) = s_series(y, ln_p, half_tol, cfg.max_terms.saturating_sub(k_shift))?;
    let (poch, poch_tail, poch_terms) = log_pochhammer_inf(-ln_p, half_tol, cfg.max_terms)?;

    acc.add((1.0 - y) * log_one_minus_p);
    acc.add(s_y);
    acc.add(poch);
    Ok(Evaluation {
        value: acc.value(),
        tail_bound: s_y_tail + poch_tail,
        terms_used: k_shift + s_y_terms + poch_terms,
    })
}

/// `sum_{k>=1} p^{ky} / (k (1-p^k))` with tail bound `s_{K+1} / (1 - p^y)`.
fn s_series(y: f64, ln_p: f64, tol: f64, budget: usize) -> Result<(f64, f64, usize)> {
    let ratio = (y * ln_p).exp();
    let mut s = NeumaierSum::new();
    let mut k = 1usize;
    loop {
        let kf = k as f64;
        let term = (kf * y * ln_p).exp() / (kf * -(kf * ln_p).exp_m1());
        let bound = term / (1.0 - ratio);
        if bound <= tol {
            return Ok((s.value(), bound, k - 1));
        }
        if k > budget {
            return Err(Error::TailBoundUnmet { terms: k, bound });
        }
        s.add(term);
        k += 1;
    }
}

/// `log (p;p)_inf` for `p = exp(-t)`.
///
/// For `t < 2 pi` the modular transformation of the Dedekind eta function
/// moves the computation to `p' = exp(-4 pi^2 / t) < exp(-2 pi)`:
///
/// ```text
/// log (p;p)_inf = -pi^2/(6t) + t/24 + log(2 pi / t)/2 + log (p';p')_inf
/// ```
fn log_pochhammer_inf(t: f64, tol: f64, budget: usize) -> Result<(f64, f64, usize)> {
    use std::f64::consts::PI;
    if t >= 2.0 * PI {
        let (s, tail, terms) = s_series(1.0, -t, tol, budget)?;
        return Ok((-s, tail, terms));
    }
    let t_dual = 4.0 * PI * PI / t;
    let (s, tail, terms) = s_series(1.0, -t_dual, tol, budget)?;
    let mut acc = NeumaierSum::new();
    acc.add(-PI * PI / (6.0 * t));
    acc.add(t / 24.0);
    acc.add(0.5 * (2.0 * PI / t).ln());
    acc.add(-s);
    Ok((acc.value(), tail, terms))
}
