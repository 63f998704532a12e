//! Deterministic numeric formatting: 12 significant digits for machine
//! artifacts (CSV/JSON), 6 for human-readable tables.

/// Fixed-point decimal with `sig` significant digits.
pub fn sig(value: f64, sig: i32) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    let exponent = value.abs().log10().floor() as i32;
    let decimals = (sig - 1 - exponent).max(0) as usize;
    format!("{value:.decimals$}")
}

pub fn sig12(value: f64) -> String {
    sig(value, 12)
}

pub fn sig6(value: f64) -> String {
    sig(value, 6)
}

/// Rounds to 12 significant digits; used before JSON serialization so that
/// emitted numbers carry the same precision as the CSV artifacts.
pub fn round12(value: f64) -> f64 {
    if value == 0.0 {
        return 0.0;
    }
    format!("{value:.11e}").parse().expect("round-trip of a finite float")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(sig12(0.75), "0.750000000000");
        assert_eq!(sig12(-0.125), "-0.125000000000");
        assert_eq!(sig12(1.0), "1.00000000000");
        assert_eq!(sig12(0.0625), "0.0625000000000");
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig6(0.5625), "0.562500");
    }

    #[test]
    fn rounding_preserves_exact_dyadics() {
        assert_eq!(round12(0.75), 0.75);
        assert_eq!(round12(-0.125), -0.125);
        assert_eq!(round12(0.0), 0.0);
        let noisy = 0.1 + 0.2;
        assert_eq!(round12(noisy), 0.3);
    }
}
