//! Locale-independent numeric formatting for CSV output.

/// Scientific notation with 17 significant digits; round-trips every `f64`.
pub fn sig17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

#[cfg(test)]
mod tests {
    use super::sig17;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(sig17(1.0), "1.0000000000000000e0");
        assert_eq!(sig17(-0.25), "-2.5000000000000000e-1");
        assert_eq!(sig17(f64::NAN), "NaN");
    }

    proptest! {
        #[test]
        fn round_trips(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL) {
            prop_assert_eq!(sig17(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }
}
