//! Numeric formatting for CLI output.

/// Formats to `digits` significant figures in plain decimal where possible:
/// the value is rounded via scientific notation, then printed with Rust's
/// shortest-round-trip formatter, so parsing the output recovers the
/// rounded f64 exactly.
pub fn sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.*e}", digits.saturating_sub(1), x);
    let rounded: f64 = sci.parse().expect("own formatting parses");
    format!("{rounded}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_digit_examples() {
        assert_eq!(sig(std::f64::consts::E, 15), "2.71828182845905");
        assert_eq!(sig(0.5772156649015329, 15), "0.577215664901533");
        assert_eq!(sig(0.0, 15), "0");
        assert_eq!(sig(-1.0, 15), "-1");
    }

    #[test]
    fn seventeen_digit_round_trip() {
        for &v in &[std::f64::consts::PI, 1.0 / 3.0, 1e-12, 123456.789] {
            let s = sig(v, 17);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, v, "17 significant digits must round-trip");
        }
    }

    #[test]
    fn non_finite_values_pass_through() {
        assert_eq!(sig(f64::NAN, 15), "NaN");
        assert_eq!(sig(f64::INFINITY, 15), "inf");
    }
}
