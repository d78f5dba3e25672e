//! Independent evaluators used to cross-check the main series code:
//! finite differences, the defining infinite product for `Gamma_q`, the
//! exponent-indexed digamma series and the direct q > 1 forms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{check_x, Branch, QPoint};
use crate::sum::NeumaierSum;

const MAX_PRODUCT_TERMS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Base step `h`. Order `k` differences use `h^{2/(k+1)}`.
    pub fd_step: f64,
    pub fd_tolerance: f64,
    /// Fixed number of product factors; `None` picks the smallest count whose
    /// tail bound is below `tail_target`.
    pub product_terms: Option<usize>,
    pub tail_target: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { fd_step: 1e-5, fd_tolerance: 1e-6, product_terms: None, tail_target: 1e-15 }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.fd_step > 0.0 && self.fd_tolerance > 0.0 && self.tail_target > 0.0) {
            return Err(Error::InvalidParameter("oracle step, tolerance and tail target must be positive".into()));
        }
        if self.product_terms == Some(0) {
            return Err(Error::InvalidParameter("product_terms must be at least 1".into()));
        }
        Ok(())
    }

    /// Step actually used for a difference of the given order.
    pub fn step_for(&self, order: u8) -> f64 {
        self.fd_step.powf(2.0 / (order as f64 + 1.0))
    }
}

/// A cross-check value with separate truncation and rounding bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleValue {
    pub value: f64,
    pub tail_bound: f64,
    pub rounding_bound: f64,
    pub terms: usize,
}

impl OracleValue {
    pub fn error_bound(&self) -> f64 {
        self.tail_bound + self.rounding_bound
    }
}

/// Central difference of order 1, 2 or 3 using 3, 5 and 7 point stencils.
pub fn fd_derivative<F>(mut f: F, x: f64, order: u8, cfg: &OracleConfig) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let h = cfg.step_for(order);
    let (weights, denom): (&[f64], f64) = match order {
        1 => (&[-1.0, 0.0, 1.0], 2.0 * h),
        2 => (&[-1.0, 16.0, -30.0, 16.0, -1.0], 12.0 * h * h),
        3 => (&[1.0, -8.0, 13.0, 0.0, -13.0, 8.0, -1.0], 8.0 * h * h * h),
        _ => return Err(Error::UnsupportedOrder(order as u32)),
    };
    let half = (weights.len() / 2) as f64;
    let (lo, hi) = (x - half * h, x + half * h);
    if lo <= 0.0 || !hi.is_finite() {
        return Err(Error::DomainViolation { lo, hi });
    }
    let mut acc = NeumaierSum::new();
    for (i, w) in weights.iter().enumerate() {
        if *w != 0.0 {
            acc.add(w * f(x + (i as f64 - half) * h)?);
        }
    }
    Ok(acc.value() / denom)
}

/// `Gamma_q(x)` from its defining product, without the `1/q` reduction.
///
/// For `p < 1` the log of the product is
/// `(1-x) log(1-p) + sum_{n>=0} [log(1-p^{n+1}) - log(1-p^{n+x})]`;
/// for `q > 1` (with `p = 1/q`) the prefactor becomes
/// `(1-x) log(q-1) + x(x-1)/2 log q`. The dropped factors satisfy
///
/// ```text
/// |sum_{n>=N} ...| <= |p - p^x| p^N / ((1-p) (1 - p^{N+min(1,x)}))
/// ```
///
/// by the mean value theorem applied to `log(1-t)`. The value returned is
/// the log; `value.exp()` is `Gamma_q(x)`.
pub fn product_gamma_oracle(x: f64, q: QPoint, n: Option<usize>, cfg: &OracleConfig) -> Result<OracleValue> {
    check_x(x)?;
    let (p, prefactor) = match q.branch() {
        Branch::SubOne => (q.q(), (1.0 - x) * (-q.q()).ln_1p()),
        Branch::SuperOne => {
            let lq = q.q().ln();
            (1.0 / q.q(), (1.0 - x) * (q.q() - 1.0).ln() + 0.5 * x * (x - 1.0) * lq)
        }
        Branch::NearOne => return Err(Error::NotApplicable("product oracle needs q outside the near-one band".into())),
    };
    let tail = |n_terms: usize| product_tail(p, x, n_terms);
    let n_terms = match n.or(cfg.product_terms) {
        Some(k) => k,
        None => {
            let mut k = 16usize;
            while tail(k) > cfg.tail_target {
                if k >= MAX_PRODUCT_TERMS {
                    return Err(Error::TailBoundUnmet { terms: k, bound: tail(k) });
                }
                k = (k * 2).min(MAX_PRODUCT_TERMS);
            }
            k
        }
    };
    if n_terms == 0 {
        return Err(Error::InvalidParameter("product needs at least one factor".into()));
    }
    let mut acc = NeumaierSum::new();
    let mut abs_sum = prefactor.abs();
    acc.add(prefactor);
    let ln_p = p.ln();
    for k in 0..n_terms {
        let a = (-((k as f64 + 1.0) * ln_p).exp()).ln_1p();
        let b = (-((k as f64 + x) * ln_p).exp()).ln_1p();
        acc.add(a);
        acc.add(-b);
        abs_sum += a.abs() + b.abs();
    }
    Ok(OracleValue {
        value: acc.value(),
        tail_bound: tail(n_terms),
        rounding_bound: (n_terms as f64 + 4.0) * f64::EPSILON * abs_sum,
        terms: n_terms,
    })
}

fn product_tail(p: f64, x: f64, n: usize) -> f64 {
    let nf = n as f64;
    (p - p.powf(x)).abs() * p.powf(nf) / ((1.0 - p) * (1.0 - p.powf(nf + x.min(1.0))))
}

/// Ratio-test bound `t_{N+1} / (1-r)` for the dropped part of
/// `sum_{n>=1} n^m q^{nx} / (1-q^n)`, with `r = ((N+2)/(N+1))^m q^x`.
pub fn series_tail_bound(q: f64, x: f64, m: u8, n: usize) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidParameter(format!("series tail needs q in (0, 1), got {q}")));
    }
    check_x(x)?;
    let nf = n as f64;
    let r = ((nf + 2.0) / (nf + 1.0)).powi(m as i32) * q.powf(x);
    if r >= 1.0 {
        return Err(Error::RatioNotContracting { ratio: r });
    }
    let k = nf + 1.0;
    let t = k.powi(m as i32) * q.powf(k * x) / (1.0 - q.powf(k));
    Ok(t / (1.0 - r))
}

/// Exponent-indexed digamma series for `q < 1`, starting at `n = 0`:
///
/// ```text
/// psi_q(x)  = -log(1-q) + log q * sum_{n>=0} q^{n+x} / (1-q^{n+x})
/// psi'_q(x) = (log q)^2 * sum_{n>=0} q^{n+x} / (1-q^{n+x})^2
/// ```
///
/// Successive terms shrink by at least a factor `q`.
pub fn psi_exponent_form(x: f64, q: f64, m: u8, tol: f64) -> Result<OracleValue> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidParameter(format!("exponent form needs q in (0, 1), got {q}")));
    }
    check_x(x)?;
    if m > 1 {
        return Err(Error::UnsupportedOrder(m as u32));
    }
    let ln_q = q.ln();
    let scale = ln_q.powi(m as i32 + 1);
    let (sum, tail, terms, abs_sum) = geometric_sum(
        |n| {
            let e = (n as f64 + x) * ln_q;
            let d = -e.exp_m1();
            if m == 0 {
                e.exp() / d
            } else {
                e.exp() / (d * d)
            }
        },
        q,
        tol / scale.abs(),
    )?;
    let lead = if m == 0 { -(-q).ln_1p() } else { 0.0 };
    Ok(OracleValue {
        value: lead + scale * sum,
        tail_bound: scale.abs() * tail,
        rounding_bound: (terms as f64 + 4.0) * f64::EPSILON * (lead.abs() + scale.abs() * abs_sum),
        terms,
    })
}

/// Direct `q > 1` digamma forms, without the `1/q` reduction:
///
/// ```text
/// psi_q(x)  = -log(q-1) + log q * (x - 1/2 - sum_{n>=0} q^{-n-x} / (1-q^{-n-x}))
/// psi'_q(x) = log q + (log q)^2 * sum_{n>=0} q^{-n-x} / (1-q^{-n-x})^2
/// ```
pub fn psi_direct_super_one(x: f64, q: f64, m: u8, tol: f64) -> Result<OracleValue> {
    if !(q > 1.0 && q.is_finite()) {
        return Err(Error::InvalidParameter(format!("direct form needs q > 1, got {q}")));
    }
    check_x(x)?;
    if m > 1 {
        return Err(Error::UnsupportedOrder(m as u32));
    }
    let ln_q = q.ln();
    let scale = ln_q.powi(m as i32 + 1);
    let (sum, tail, terms, abs_sum) = geometric_sum(
        |n| {
            let e = -(n as f64 + x) * ln_q;
            let d = -e.exp_m1();
            if m == 0 {
                e.exp() / d
            } else {
                e.exp() / (d * d)
            }
        },
        1.0 / q,
        tol / scale.abs(),
    )?;
    let (value, lead) = if m == 0 {
        let lead = -(q - 1.0).ln() + ln_q * (x - 0.5);
        (lead - ln_q * sum, lead)
    } else {
        (ln_q + scale * sum, ln_q)
    };
    Ok(OracleValue {
        value,
        tail_bound: scale.abs() * tail,
        rounding_bound: (terms as f64 + 4.0) * f64::EPSILON * (lead.abs() + scale.abs() * abs_sum),
        terms,
    })
}

/// Sum `term(0) + term(1) + ...` of nonnegative terms whose ratio is at most
/// `ratio`, stopping once `term(n) / (1 - ratio) <= tol`.
fn geometric_sum<F>(term: F, ratio: f64, tol: f64) -> Result<(f64, f64, usize, f64)>
where
    F: Fn(usize) -> f64,
{
    let mut acc = NeumaierSum::new();
    let mut abs_sum = 0.0;
    for n in 0..MAX_PRODUCT_TERMS {
        let t = term(n);
        let bound = t / (1.0 - ratio);
        if bound <= tol {
            return Ok((acc.value(), bound, n, abs_sum));
        }
        acc.add(t);
        abs_sum += t.abs();
    }
    Err(Error::TailBoundUnmet { terms: MAX_PRODUCT_TERMS, bound: term(MAX_PRODUCT_TERMS) / (1.0 - ratio) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{gamma_q, log_gamma_q, psi_q, psi_q_deriv};
    use crate::point::{DerivOrder, EvalConfig};
    use approx::assert_abs_diff_eq;

    fn pt(q: f64) -> QPoint {
        EvalConfig::default().point(q).unwrap()
    }

    #[test]
    fn fd_of_polynomials() {
        let c = OracleConfig::default();
        let d2 = fd_derivative(|t| Ok(t * t * t), 1.0, 2, &c).unwrap();
        assert_abs_diff_eq!(d2, 6.0, epsilon = 1e-6);
        let d3 = fd_derivative(|t| Ok(t.powi(4)), 2.0, 3, &c).unwrap();
        assert_abs_diff_eq!(d3, 48.0, epsilon = 1e-6);
        let d1 = fd_derivative(|t| Ok(t.sin()), 1.0, 1, &c).unwrap();
        assert_abs_diff_eq!(d1, 1f64.cos(), epsilon = 1e-9);
    }

    #[test]
    fn fd_rejects_stencils_leaving_positive_axis() {
        let c = OracleConfig::default();
        let r = fd_derivative(Ok, 1e-6, 1, &c);
        assert!(matches!(r, Err(Error::DomainViolation { .. })));
        assert!(fd_derivative(Ok, 1.0, 4, &c).is_err());
    }

    #[test]
    fn fd_of_psi_and_log_gamma() {
        let c = OracleConfig::default();
        let e = EvalConfig::default();
        let q = pt(0.5);
        let d = fd_derivative(|t| psi_q(t, q, &e).map(|v| v.value), 2.0, 1, &c).unwrap();
        assert_abs_diff_eq!(d, psi_q_deriv(2.0, q, DerivOrder::TRIGAMMA, &e).unwrap().value, epsilon = 1e-6);
        let d = fd_derivative(|t| log_gamma_q(t, q, &e).map(|v| v.value), 2.0, 1, &c).unwrap();
        assert_abs_diff_eq!(d, psi_q(2.0, q, &e).unwrap().value, epsilon = 1e-6);
    }

    #[test]
    fn product_oracle_fixed_values() {
        let c = OracleConfig::default();
        let one = product_gamma_oracle(1.0, pt(0.5), Some(50), &c).unwrap();
        assert!(one.value.abs() <= one.error_bound() + 1e-15);
        let three = product_gamma_oracle(3.0, pt(2.0), None, &c).unwrap();
        assert_abs_diff_eq!(three.value.exp(), 3.0, epsilon = 1e-13);
        assert!(product_gamma_oracle(2.0, pt(1.0), None, &c).is_err());
    }

    #[test]
    fn product_tail_dominates_dropped_factors() {
        // brute force the dropped factors well past N
        for &(p, x) in &[(0.5, 0.3), (0.9, 2.5), (0.7, 1.0), (0.3, 7.0)] {
            for &n in &[1usize, 5, 20] {
                let bound = product_tail(p, x, n);
                let dropped: f64 = (n..n + 4000)
                    .map(|k| (1.0 - p.powi(k as i32 + 1)).ln() - (1.0 - p.powf(k as f64 + x)).ln())
                    .sum();
                assert!(dropped.abs() <= bound * (1.0 + 1e-12) + 1e-15, "p={p} x={x} n={n}");
            }
        }
    }

    #[test]
    fn product_oracle_agrees_with_series() {
        let c = OracleConfig::default();
        let e = EvalConfig::default();
        for &q in &[0.1, 0.5, 0.9, 2.0, 4.0] {
            for &x in &[0.2, 1.0, 2.5, 6.0] {
                let o = product_gamma_oracle(x, pt(q), None, &c).unwrap();
                let g = log_gamma_q(x, pt(q), &e).unwrap();
                let rounding = 8.0 * f64::EPSILON * g.value.abs().max(1.0);
                assert!(
                    (o.value - g.value).abs() <= o.error_bound() + g.tail_bound + rounding,
                    "q={q} x={x}: {} vs {}",
                    o.value,
                    g.value
                );
            }
        }
        assert_abs_diff_eq!(gamma_q(3.0, pt(2.0), &e).unwrap().value, 3.0, epsilon = 1e-13);
    }

    #[test]
    fn series_tail_bound_examples() {
        let b = series_tail_bound(0.5, 1.0, 0, 60).unwrap();
        assert!(b < 1e-14);
        let dropped: f64 = (61..200).map(|n| 0.5f64.powi(n) / (1.0 - 0.5f64.powi(n))).sum();
        assert!(dropped <= b);
        let r = series_tail_bound(0.999, 1.0, 3, 10);
        assert!(matches!(r, Err(Error::RatioNotContracting { .. })) || r.unwrap() > 1.0);
        for n in 10..40 {
            assert!(series_tail_bound(0.7, 0.8, 2, n + 1).unwrap() <= series_tail_bound(0.7, 0.8, 2, n).unwrap());
        }
    }

    #[test]
    fn exponent_form_matches_main_series() {
        let e = EvalConfig::default();
        for &q in &[0.1, 0.5, 0.9] {
            for &x in &[0.05, 1.0, 3.3] {
                let a = psi_exponent_form(x, q, 0, 1e-15).unwrap();
                let b = psi_q(x, pt(q), &e).unwrap();
                assert_abs_diff_eq!(a.value, b.value, epsilon = 1e-12 * b.value.abs().max(1.0));
                let a = psi_exponent_form(x, q, 1, 1e-15).unwrap();
                let b = psi_q_deriv(x, pt(q), DerivOrder::TRIGAMMA, &e).unwrap();
                assert_abs_diff_eq!(a.value, b.value, epsilon = 1e-12 * b.value.abs().max(1.0));
            }
        }
    }

    #[test]
    fn direct_super_one_matches_reduction() {
        let e = EvalConfig::default();
        for &q in &[2.0, 4.0, 9.0] {
            for &x in &[0.3, 1.0, 2.0, 10.0] {
                let a = psi_direct_super_one(x, q, 0, 1e-15).unwrap();
                let b = psi_q(x, pt(q), &e).unwrap();
                assert_abs_diff_eq!(a.value, b.value, epsilon = 1e-12 * b.value.abs().max(1.0));
                let a = psi_direct_super_one(x, q, 1, 1e-15).unwrap();
                let b = psi_q_deriv(x, pt(q), DerivOrder::TRIGAMMA, &e).unwrap();
                assert_abs_diff_eq!(a.value, b.value, epsilon = 1e-12 * b.value.abs().max(1.0));
            }
        }
    }
}
