//! Standard normal CDF and quantile.

use libm::erfc;
use statrs::function::erf::erfc_inv;
use std::f64::consts::SQRT_2;

/// Φ(z).
pub fn cdf(z: f64) -> f64 {
    0.5 * erfc(-z / SQRT_2)
}

/// Φ⁻¹(p) for `p` in (0, 1). Returns ±∞ at the endpoints.
pub fn quantile(p: f64) -> f64 {
    -SQRT_2 * erfc_inv(2.0 * p)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Φ by composite Simpson quadrature of the density; independent of erfc.
    fn simpson_cdf(z: f64) -> f64 {
        let n = 20_000;
        let h = z / n as f64;
        let pdf = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let mut acc = pdf(0.0) + pdf(z);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * pdf(k as f64 * h);
        }
        0.5 + acc * h / 3.0
    }

    #[test]
    fn cdf_matches_quadrature() {
        for z in [-3.0, -1.0, -0.25, 0.0, 0.5, 1.0, 2.5] {
            assert!((cdf(z) - simpson_cdf(z)).abs() < 1e-12, "z = {z}");
        }
        assert!((cdf(1.0) - 0.841_344_746_068_542_9).abs() < 1e-15);
    }

    #[test]
    fn quantile_inverts_cdf() {
        for p in [1e-9, 0.001, 0.1, 0.5, 0.841345, 0.99, 1.0 - 1e-9] {
            let z = quantile(p);
            assert!((cdf(z) - p).abs() < 1e-13 * p.max(1e-3), "p = {p}");
        }
        assert_eq!(quantile(0.5), 0.0);
    }
}
