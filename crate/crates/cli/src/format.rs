//! Number formatting for CSV and terminal output.

/// C's `%.17g`: 17 significant digits, trailing zeros dropped, exponent
/// form outside `[1e-4, 1e17)`.
pub fn g17(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.into();
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0" } else { "0" }.into();
    }
    let sci = format!("{v:.16e}");
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let x: i32 = exp.parse().expect("integer exponent");
    if (-4..17).contains(&x) {
        trim_zeros(format!("{:.*}", (16 - x) as usize, v))
    } else {
        c_exponent(&trim_zeros(mant.to_string()), x)
    }
}

/// Shortest round-trip digits, laid out like `%g`: `1`, `0.25`, `1e-14`.
pub fn short(v: f64) -> String {
    if !v.is_finite() || v == 0.0 {
        return g17(v);
    }
    let sci = format!("{v:e}");
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let x: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&x) {
        format!("{v}")
    } else {
        c_exponent(mant, x)
    }
}

fn c_exponent(mant: &str, x: i32) -> String {
    format!("{mant}e{}{:02}", if x < 0 { '-' } else { '+' }, x.abs())
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g17() {
        let cases = [
            (1.0, "1"),
            (0.5, "0.5"),
            (0.1, "0.10000000000000001"),
            (-2.5e-7, "-2.4999999999999999e-07"),
            (1e17, "1e+17"),
            (123456789.0, "123456789"),
            (1e-4, "0.0001"),
            (3.2399501708051153, "3.2399501708051153"),
            (0.0, "0"),
        ];
        for (v, want) in cases {
            assert_eq!(g17(v), want, "{v}");
        }
    }

    #[test]
    fn g17_round_trips() {
        for &v in &[0.1, 1.0 / 3.0, 2f64.sqrt() * 1e-300, 6.02e23, -1e-5] {
            assert_eq!(g17(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn short_layout() {
        assert_eq!(short(1.0), "1");
        assert_eq!(short(1e-14), "1e-14");
        assert_eq!(short(0.25), "0.25");
        assert_eq!(short(1.5e20), "1.5e+20");
        assert_eq!(short(0.0), "0");
    }
}
