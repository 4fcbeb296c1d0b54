//! Lognormal fragility curve and its inverse.

use super::EngineError;
use crate::network::FragilityParams;
use crate::normal;

/// Failure probability at gust `w_mph`: Φ[(ln w − λ)/β]; 0 for w ≤ 0.
pub fn fragility_prob(w_mph: f64, params: &FragilityParams) -> f64 {
    if w_mph <= 0.0 {
        return 0.0;
    }
    normal::cdf((w_mph.ln() - params.lambda) / params.beta)
}

/// Wind resistance (mph) by inverse transform of the fragility CDF:
/// exp(λ + β·Φ⁻¹(r)).
pub fn sample_resistance(r: f64, params: &FragilityParams) -> Result<f64, EngineError> {
    if !(r > 0.0 && r < 1.0) {
        return Err(EngineError::DegenerateUniform(r));
    }
    Ok(resistance_unchecked(r, params))
}

#[inline]
pub(crate) fn resistance_unchecked(r: f64, params: &FragilityParams) -> f64 {
    (params.lambda + params.beta * normal::quantile(r)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const PONCE: FragilityParams = FragilityParams { lambda: 4.7084, beta: 0.4379 };
    const MAYAGUEZ: FragilityParams = FragilityParams { lambda: 4.4057, beta: 0.2061 };

    #[test]
    fn median_gives_one_half() {
        assert!((fragility_prob(4.7084_f64.exp(), &PONCE) - 0.5).abs() < 1e-15);
        assert!((4.7084_f64.exp() - 110.874_618_520_833_47).abs() < 1e-9);
    }

    #[test]
    fn lower_tail_and_zero() {
        assert_eq!(fragility_prob(0.0, &PONCE), 0.0);
        assert!(fragility_prob(1e-6, &PONCE) < 1e-100);
    }

    #[test]
    fn one_sigma_point() {
        // standard normal table: Φ(1) = 0.8413447460685429
        let w = (4.4057_f64 + 0.2061).exp();
        assert!((fragility_prob(w, &MAYAGUEZ) - 0.841_344_746_068_542_9).abs() < 1e-12);
    }

    #[test]
    fn resistance_reference_points() {
        let med = sample_resistance(0.5, &MAYAGUEZ).unwrap();
        assert!((med - 81.916_464_303_328_28).abs() < 1e-9);
        let p = FragilityParams { lambda: 4.0, beta: 0.3 };
        // Φ⁻¹(0.841345) = 1.000001049 (scipy)
        let r = sample_resistance(0.841345, &p).unwrap();
        let expected = (4.0 + 0.3 * 1.000_001_049_431_045_f64).exp();
        assert!(((r - expected) / expected).abs() < 1e-12);
        assert!(((r - (4.3f64).exp()) / r).abs() < 1e-6);
    }

    #[test]
    fn degenerate_uniforms() {
        assert!(matches!(sample_resistance(0.0, &PONCE), Err(EngineError::DegenerateUniform(_))));
        assert!(matches!(sample_resistance(1.0, &PONCE), Err(EngineError::DegenerateUniform(_))));
        assert!(sample_resistance(f64::NAN, &PONCE).is_err());
    }

    proptest! {
        #[test]
        fn resistance_strictly_increasing(a in 1e-9f64..0.999_999_9, b in 1e-9f64..0.999_999_9) {
            prop_assume!((a - b).abs() > 1e-9);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assert!(sample_resistance(lo, &PONCE).unwrap() < sample_resistance(hi, &PONCE).unwrap());
        }

        #[test]
        fn resistance_inverts_fragility(r in 1e-6f64..0.999_999) {
            let w = sample_resistance(r, &MAYAGUEZ).unwrap();
            prop_assert!((fragility_prob(w, &MAYAGUEZ) - r).abs() < 1e-12);
        }
    }
}
