//! Plain-text number formatting shared by the CSV writers.

/// Significant digits in every emitted number.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Formats `x` like C's `%.12g`: fixed notation for moderate exponents,
/// scientific otherwise, trailing zeros removed.
pub fn format_g(x: f64) -> String {
    format_sig(x, SIGNIFICANT_DIGITS)
}

pub fn format_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    // Rounding can carry into a new decade, so read the exponent after rounding.
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        assert_eq!(format_g(1.0), "1");
        assert_eq!(format_g(-2.5), "-2.5");
        assert_eq!(format_g(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_g(123456789012345.0), "1.23456789012e+14");
        assert_eq!(format_g(0.0001), "0.0001");
        assert_eq!(format_g(0.00001234), "1.234e-05");
        assert_eq!(format_g(999999999999.9), "1e+12");
        assert_eq!(format_g(std::f64::consts::PI), "3.14159265359");
        assert_eq!(format_g(f64::NEG_INFINITY), "-inf");
        assert_eq!(format_g(0.0), "0");
    }

    #[test]
    fn round_trips_to_twelve_digits() {
        for &x in &[1.134592657, -7.25e-9, 6.02214076e23, 0.5603, 81.0] {
            let back: f64 = format_g(x).parse().unwrap();
            assert!((back - x).abs() <= 1e-11 * x.abs());
        }
    }
}
