//! Fixed-precision number formatting shared by every output file.

/// Nine significant digits in the style of C's `%.9g`: fixed notation for
/// decimal exponents in `[−4, 9)`, scientific otherwise, trailing zeros
/// removed.
pub fn g9(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim(&format!("{x:.decimals$}")).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mantissa), exp.abs())
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `g9` of an optional value; empty when absent.
pub fn g9_opt(x: Option<f64>) -> String {
    x.map(g9).unwrap_or_default()
}

/// Value as it appears in the text outputs, for JSON mirrors.
pub fn rounded(x: f64) -> f64 {
    g9(x).parse().unwrap_or(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (-0.491129, "-0.491129"),
            (1.0 / 3.0, "0.333333333"),
            (123456789.0, "123456789"),
            (1234567890.0, "1.23456789e+09"),
            (0.0001, "0.0001"),
            (0.00001, "1e-05"),
            (-2.5e-12, "-2.5e-12"),
            (9.9999999999, "10"),
            (999999999.6, "1e+09"),
            (5.0e300, "5e+300"),
            (0.000123456789123, "0.000123456789"),
        ];
        for (x, want) in cases {
            assert_eq!(g9(x), want, "{x}");
        }
        assert_eq!(g9(f64::NAN), "nan");
        assert_eq!(g9_opt(None), "");
    }

    #[test]
    fn rounding_round_trips() {
        for x in [1.0 / 7.0, -4.411764705882342, 1e-20] {
            assert_eq!(g9(rounded(x)), g9(x));
        }
    }
}
