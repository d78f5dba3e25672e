use approx::assert_relative_eq;
use qgamma_core::oracle::{psi_direct_super_one, psi_exponent_form};
use qgamma_core::{
    fd_derivative, gamma_q, log_gamma_q, product_gamma_oracle, psi_q, psi_q_deriv, DerivOrder, EvalConfig,
    OracleConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cfg() -> EvalConfig {
    EvalConfig::default()
}

// Reference values from a 30-digit mpmath evaluation of the product
// definition, rounded to double.
#[test]
fn digamma_matches_high_precision_values() {
    let cases = [
        (0.5, 0.3, -3.107_443_596_377_866),
        (0.9, 2.5, 0.651_824_885_870_270_5),
        (3.0, 1.2, -0.483_186_055_212_361_5),
        (0.99, 0.01, -100.553_401_506_586_12),
    ];
    for (q, x, want) in cases {
        let got = psi_q(x, cfg().point(q).unwrap(), &cfg()).unwrap();
        assert_relative_eq!(got.value, want, max_relative = 1e-13);
    }
}

#[test]
fn product_oracle_small_cases() {
    let oc = OracleConfig::default();
    let v = product_gamma_oracle(1.0, cfg().point(0.5).unwrap(), Some(50), &oc).unwrap();
    assert!(v.value.abs() <= v.error_bound() + 1e-15);
    let v = product_gamma_oracle(3.0, cfg().point(2.0).unwrap(), None, &oc).unwrap();
    assert_relative_eq!(v.value.exp(), 3.0, max_relative = 1e-13);
    let main = gamma_q(3.0, cfg().point(2.0).unwrap(), &cfg()).unwrap();
    assert_relative_eq!(main.value, 3.0, max_relative = 1e-13);
}

#[test]
fn product_oracle_agrees_with_series_on_seeded_points() {
    let oc = OracleConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let q = if rng.gen_bool(0.5) { rng.gen_range(0.05..0.95) } else { rng.gen_range(1.05..8.0) };
        let x = 10f64.powf(rng.gen_range(-2.0..1.3));
        let pt = cfg().point(q).unwrap();
        let o = product_gamma_oracle(x, pt, None, &oc).unwrap();
        let m = log_gamma_q(x, pt, &cfg()).unwrap();
        assert!(
            (o.value - m.value).abs() <= o.error_bound() + m.tail_bound,
            "q={q} x={x}: oracle {} series {}",
            o.value,
            m.value
        );
    }
}

#[test]
fn finite_differences_match_series_derivatives() {
    let oc = OracleConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let q = if rng.gen_bool(0.5) { rng.gen_range(0.1..0.95) } else { rng.gen_range(1.05..9.0) };
        let x = rng.gen_range(1.0..5.0);
        let pt = cfg().point(q).unwrap();
        for m in 1..=3u8 {
            let fd = fd_derivative(|t| Ok(psi_q(t, pt, &cfg())?.value), x, m, &oc).unwrap();
            let s = psi_q_deriv(x, pt, DerivOrder::new(m as u32).unwrap(), &cfg()).unwrap().value;
            assert!((fd - s).abs() <= oc.fd_tolerance * s.abs().max(1.0), "q={q} x={x} m={m}: fd {fd} series {s}");
        }
    }
}

#[test]
fn derivative_of_log_gamma_is_digamma() {
    let oc = OracleConfig::default();
    let pt = cfg().point(0.5).unwrap();
    let fd = fd_derivative(|t| Ok(log_gamma_q(t, pt, &cfg())?.value), 2.0, 1, &oc).unwrap();
    assert_relative_eq!(fd, psi_q(2.0, pt, &cfg()).unwrap().value, max_relative = 1e-6);
    let cube = fd_derivative(|t| Ok(t * t * t), 1.0, 2, &oc).unwrap();
    assert!((cube - 6.0).abs() < 1e-6);
}

#[test]
fn exponent_series_agrees_with_shifted_series() {
    for &q in &[0.2, 0.6, 0.95] {
        let pt = cfg().point(q).unwrap();
        for &x in &[0.05, 0.7, 2.0, 9.0] {
            for m in 0..=1u8 {
                let o = psi_exponent_form(x, q, m, 1e-15).unwrap();
                let s = qgamma_core::psi_q_order(x, pt, DerivOrder::new(m as u32).unwrap(), &cfg()).unwrap();
                let tol = o.error_bound() + s.tail_bound + 8.0 * f64::EPSILON * s.value.abs().max(1.0);
                assert!((o.value - s.value).abs() <= tol, "q={q} x={x} m={m}");
            }
        }
    }
}

#[test]
fn direct_super_one_forms_agree_with_reduction() {
    for &q in &[2.0, 4.0, 9.0] {
        let pt = cfg().point(q).unwrap();
        for &x in &[0.1, 1.0, 1.5, 7.0, 30.0] {
            for m in 0..=1u8 {
                let o = psi_direct_super_one(x, q, m, 1e-15).unwrap();
                let s = qgamma_core::psi_q_order(x, pt, DerivOrder::new(m as u32).unwrap(), &cfg()).unwrap();
                let tol = o.error_bound() + s.tail_bound + 8.0 * f64::EPSILON * s.value.abs().max(1.0);
                assert!((o.value - s.value).abs() <= tol, "q={q} x={x} m={m}: {} vs {}", o.value, s.value);
            }
        }
    }
}
