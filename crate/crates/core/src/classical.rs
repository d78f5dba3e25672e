//! Classical digamma/polygamma and log-gamma for real `x > 0`.
//!
//! Both use the same scheme: shift the argument upward with the
//! recurrence until `x >= SHIFT_TARGET`, then apply the Bernoulli-number
//! asymptotic expansion. The remainder of each expansion is bounded by the
//! first omitted term, which is reported as the tail bound.

use crate::error::Result;
use crate::point::{check_x, DerivOrder, Evaluation};
use crate::sum::NeumaierSum;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SHIFT_TARGET: f64 = 16.0;

/// `B_{2k}` for `k = 1..=11`. The last entry is only used for the remainder bound.
const BERNOULLI_EVEN: [f64; 11] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
];

const FACTORIAL: [f64; 4] = [1.0, 1.0, 2.0, 6.0];

/// Classical `psi^{(m)}(x)`.
pub fn classical_psi(x: f64, m: DerivOrder) -> Result<f64> {
    polygamma_eval(x, m).map(|e| e.value)
}

pub(crate) fn polygamma_eval(x: f64, m: DerivOrder) -> Result<Evaluation> {
    check_x(x)?;
    let m = m.get() as i32;
    let fact_m = FACTORIAL[m as usize];
    // psi^{(m)}(x) = psi^{(m)}(x+1) - (-1)^m m! / x^{m+1}
    let sign_m = if m % 2 == 0 { 1.0 } else { -1.0 };
    let mut acc = NeumaierSum::new();
    let mut y = x;
    let mut shifts = 0usize;
    while y < SHIFT_TARGET {
        acc.add(-sign_m * fact_m / y.powi(m + 1));
        y += 1.0;
        shifts += 1;
    }

    let (asym, remainder) = polygamma_asymptotic(y, m);
    acc.add(asym);
    Ok(Evaluation { value: acc.value(), tail_bound: remainder, terms_used: shifts + BERNOULLI_EVEN.len() - 1 })
}

/// Asymptotic expansion at large `y`; returns the value and the magnitude of
/// the first omitted term.
fn polygamma_asymptotic(y: f64, m: i32) -> (f64, f64) {
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let n_used = BERNOULLI_EVEN.len() - 1;
    if m == 0 {
        // ln y - 1/(2y) - sum B_{2k} / (2k y^{2k})
        let mut s = NeumaierSum::new();
        s.add(y.ln());
        s.add(-0.5 * inv);
        let mut p = inv2;
        for (k, b) in BERNOULLI_EVEN.iter().take(n_used).enumerate() {
            let two_k = 2.0 * (k as f64 + 1.0);
            s.add(-b / two_k * p);
            p *= inv2;
        }
        let two_k = 2.0 * (n_used as f64 + 1.0);
        let rem = (BERNOULLI_EVEN[n_used] / two_k * p).abs();
        return (s.value(), rem);
    }
    // (-1)^{m+1} [ (m-1)!/y^m + m!/(2 y^{m+1}) + sum B_{2k} (2k+m-1)!/((2k)! y^{2k+m}) ]
    let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
    let mut s = NeumaierSum::new();
    let y_m = inv.powi(m);
    s.add(FACTORIAL[(m - 1) as usize] * y_m);
    s.add(FACTORIAL[m as usize] * 0.5 * y_m * inv);
    let mut p = y_m * inv2;
    let mut rem = 0.0;
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let two_k = 2.0 * (k as f64 + 1.0);
        let mut ratio = 1.0;
        for j in 1..m {
            ratio *= two_k + j as f64;
        }
        let term = b * ratio * p;
        if k < n_used {
            s.add(term);
        } else {
            rem = term.abs();
        }
        p *= inv2;
    }
    (sign * s.value(), rem)
}

/// Classical `ln Gamma(x)` for `x > 0`.
pub fn classical_ln_gamma(x: f64) -> Result<f64> {
    ln_gamma_eval(x).map(|e| e.value)
}

pub(crate) fn ln_gamma_eval(x: f64) -> Result<Evaluation> {
    check_x(x)?;
    let mut y = x;
    let mut shifts = 0usize;
    // product of shifted arguments; kept below overflow by construction
    let mut prod = 1.0;
    while y < SHIFT_TARGET {
        prod *= y;
        y += 1.0;
        shifts += 1;
    }
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let n_used = BERNOULLI_EVEN.len() - 1;
    let mut s = NeumaierSum::new();
    s.add((y - 0.5) * y.ln());
    s.add(-y);
    s.add(0.5 * (2.0 * std::f64::consts::PI).ln());
    let mut p = inv;
    let mut rem = 0.0;
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let two_k = 2.0 * (k as f64 + 1.0);
        let term = b / (two_k * (two_k - 1.0)) * p;
        if k < n_used {
            s.add(term);
        } else {
            rem = term.abs();
        }
        p *= inv2;
    }
    if shifts > 0 {
        s.add(-prod.ln());
    }
    Ok(Evaluation { value: s.value(), tail_bound: rem, terms_used: shifts + n_used })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const ZETA3: f64 = 1.202_056_903_159_594_2;

    #[test]
    fn digamma_at_one_is_minus_euler_gamma() {
        let v = classical_psi(1.0, DerivOrder::PSI).unwrap();
        assert!((v + EULER_GAMMA).abs() < 1e-14, "{v}");
    }

    #[test]
    fn trigamma_at_one_is_zeta_two() {
        let v = classical_psi(1.0, DerivOrder::TRIGAMMA).unwrap();
        assert!((v - PI * PI / 6.0).abs() < 1e-14, "{v}");
    }

    #[test]
    fn tetragamma_and_pentagamma_at_one() {
        // psi''(1) = -2 zeta(3), psi'''(1) = 6 zeta(4) = pi^4/15
        let v2 = classical_psi(1.0, DerivOrder::TETRAGAMMA).unwrap();
        let v3 = classical_psi(1.0, DerivOrder::PENTAGAMMA).unwrap();
        assert!((v2 + 2.0 * ZETA3).abs() < 1e-13, "{v2}");
        assert!((v3 - PI.powi(4) / 15.0).abs() < 1e-13, "{v3}");
    }

    #[test]
    fn digamma_at_half() {
        // psi(1/2) = -gamma - 2 ln 2
        let v = classical_psi(0.5, DerivOrder::PSI).unwrap();
        assert!((v - (-EULER_GAMMA - 2.0 * 2f64.ln())).abs() < 1e-14);
    }

    #[test]
    fn recurrence_holds_for_all_orders() {
        for m in DerivOrder::all() {
            for &x in &[0.01, 0.3, 1.7, 9.5, 40.0] {
                let a = classical_psi(x, m).unwrap();
                let b = classical_psi(x + 1.0, m).unwrap();
                let k = m.get() as i32;
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let step = sign * FACTORIAL[k as usize] / x.powi(k + 1);
                assert!((b - a - step).abs() <= 1e-13 * step.abs().max(1.0), "m={k} x={x}");
            }
        }
    }

    #[test]
    fn ln_gamma_values() {
        assert!(classical_ln_gamma(1.0).unwrap().abs() < 1e-14);
        assert!(classical_ln_gamma(2.0).unwrap().abs() < 1e-14);
        assert!((classical_ln_gamma(0.5).unwrap() - 0.5 * PI.ln()).abs() < 1e-14);
        // ln(10!) = ln 3628800
        assert!((classical_ln_gamma(11.0).unwrap() - 3_628_800f64.ln()).abs() < 1e-13);
        assert!((classical_ln_gamma(100.0).unwrap() - 359.134_205_369_575_4).abs() < 1e-11);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(classical_psi(0.0, DerivOrder::PSI).is_err());
        assert!(classical_ln_gamma(-1.0).is_err());
    }
}
