//! Text formatting shared by the CSV and JSON-lines writers.

/// Scientific notation with 17 significant digits; parses back to the same
/// `f64`. Non-finite values print as `NaN`, `inf`, `-inf`.
pub fn sig17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Parses what [`sig17`] writes (and any ordinary float literal).
pub fn parse_f64(s: &str) -> Option<f64> {
    s.trim().parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        for x in [
            0.1,
            1.0 / 3.0,
            -2.5e-300,
            6.02214076e23,
            f64::MIN_POSITIVE,
            0.0,
            -0.0,
        ] {
            let s = sig17(x);
            assert_eq!(parse_f64(&s).unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(sig17(1.0), "1.0000000000000000e0");
        assert_eq!(parse_f64(&sig17(f64::INFINITY)), Some(f64::INFINITY));
    }
}
