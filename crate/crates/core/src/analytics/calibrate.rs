//! Least-squares fit of lognormal fragility parameters to (wind, outage) pairs.

use argmin::core::{CostFunction, Error as ArgminError, Executor, State};
use argmin::solver::neldermead::NelderMead;
use serde::{Deserialize, Serialize};

use super::observed::ObservedOutageSeries;
use super::AnalyticsError;
use crate::engine::fragility_prob;
use crate::network::{feeder_design_wind_at_step, FragilityParams, Network};
use crate::wind::WindFieldSeries;
use crate::MPH_PER_MS;

pub const FRACTION_CLAMP: (f64, f64) = (0.001, 0.999);
pub const MIN_BETA: f64 = 0.01;
const INITIAL_BETA: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub params: FragilityParams,
    /// Sum of squared CDF residuals at the optimum.
    pub residual: f64,
}

struct CdfFit<'a> {
    points: &'a [(f64, f64)],
}

impl CdfFit<'_> {
    fn unpack(x: &[f64]) -> FragilityParams {
        FragilityParams { lambda: x[0], beta: MIN_BETA + x[1].exp() }
    }

    fn sse(&self, p: &FragilityParams) -> f64 {
        self.points.iter().map(|(w, y)| (fragility_prob(*w, p) - y).powi(2)).sum()
    }
}

impl CostFunction for CdfFit<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, x: &Self::Param) -> Result<f64, ArgminError> {
        Ok(self.sse(&Self::unpack(x)))
    }
}

/// ln of the wind at which the (linearly interpolated) outage crosses 50%.
fn initial_lambda(points: &[(f64, f64)]) -> f64 {
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in sorted.windows(2) {
        let ((w0, y0), (w1, y1)) = (w[0], w[1]);
        if (y0 - 0.5) * (y1 - 0.5) <= 0.0 && y0 != y1 {
            return (w0 + (0.5 - y0) / (y1 - y0) * (w1 - w0)).ln();
        }
    }
    let closest = sorted
        .iter()
        .min_by(|a, b| (a.1 - 0.5).abs().total_cmp(&(b.1 - 0.5).abs()))
        .expect("non-empty");
    closest.0.ln()
}

/// Fits (λ, β) minimising Σ (Φ[(ln w − λ)/β] − y)² over `points` of
/// `(wind_mph, outage_fraction)`. Fractions are clamped to [0.001, 0.999].
pub fn calibrate_fragility(points: &[(f64, f64)]) -> Result<Calibration, AnalyticsError> {
    if points.len() < 3 {
        return Err(AnalyticsError::InsufficientPoints(points.len()));
    }
    if let Some((w, y)) = points.iter().find(|(w, y)| !(w.is_finite() && *w > 0.0 && y.is_finite())) {
        return Err(AnalyticsError::DegenerateData(format!("invalid point ({w}, {y})")));
    }
    let first = points[0].0;
    if points.iter().all(|(w, _)| *w == first) {
        return Err(AnalyticsError::DegenerateData("all winds are equal".into()));
    }
    let clamped: Vec<(f64, f64)> = points
        .iter()
        .map(|(w, y)| (*w, y.clamp(FRACTION_CLAMP.0, FRACTION_CLAMP.1)))
        .collect();

    let problem = CdfFit { points: &clamped };
    let mut best = vec![initial_lambda(&clamped), (INITIAL_BETA - MIN_BETA).ln()];
    let mut best_cost = problem.cost(&best).map_err(|e| AnalyticsError::Optimizer(e.to_string()))?;
    // restart from the incumbent until the simplex stops finding improvements
    for round in 0..8 {
        let step = if round == 0 { (0.2, 0.5) } else { (0.02, 0.1) };
        let simplex = vec![best.clone(), vec![best[0] + step.0, best[1]], vec![best[0], best[1] + step.1]];
        let solver = NelderMead::new(simplex)
            .with_sd_tolerance(1e-15)
            .map_err(|e| AnalyticsError::Optimizer(e.to_string()))?;
        let res = Executor::new(CdfFit { points: &clamped }, solver)
            .configure(|s| s.max_iters(4000))
            .run()
            .map_err(|e| AnalyticsError::Optimizer(e.to_string()))?;
        let cost = res.state().get_best_cost();
        let improved = cost < best_cost - 1e-16 * best_cost.max(1e-300);
        if cost <= best_cost {
            best = res.state().get_best_param().cloned().unwrap_or(best);
            best_cost = cost;
        }
        if !improved && round > 0 {
            break;
        }
    }
    let params = CdfFit::unpack(&best);
    Ok(Calibration { params, residual: problem.sse(&params) })
}

/// Pairs each observed outage fraction with the load-weighted mean of the
/// feeders' running-maximum design gust (mph) at that time.
///
/// `region = None` pools every feeder (for a system-wide fit).
pub fn calibration_points(
    network: &Network,
    wind: &WindFieldSeries,
    observed: &ObservedOutageSeries,
    region: Option<&str>,
) -> Result<Vec<(f64, f64)>, AnalyticsError> {
    let feeders: Vec<_> = network.feeders().iter().filter(|f| region.is_none_or(|r| f.region == r)).collect();
    if feeders.is_empty() {
        return Err(AnalyticsError::DegenerateData(format!("no feeders in region {region:?}")));
    }
    let total_load: f64 = feeders.iter().map(|f| f.load_mw).sum();
    let weights: Vec<f64> = if total_load > 0.0 {
        feeders.iter().map(|f| f.load_mw / total_load).collect()
    } else {
        vec![1.0 / feeders.len() as f64; feeders.len()]
    };

    let mut running = vec![0.0_f64; feeders.len()];
    let mut computed_upto = 0usize;
    let mut points = Vec::new();
    for (t, y) in observed.timestamps().iter().zip(observed.outage_pct()) {
        let Ok(step) = wind.step_at(*t) else { continue };
        while computed_upto <= step {
            for (k, f) in feeders.iter().enumerate() {
                let g = feeder_design_wind_at_step(f, wind, computed_upto)? * MPH_PER_MS;
                running[k] = running[k].max(g);
            }
            computed_upto += 1;
        }
        let w: f64 = running.iter().zip(&weights).map(|(g, a)| g * a).sum();
        if w > 0.0 {
            points.push((w, y / 100.0));
        }
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synth(lambda: f64, beta: f64, n: usize) -> Vec<(f64, f64)> {
        let truth = FragilityParams { lambda, beta };
        (0..n)
            .map(|k| {
                let z = -2.5 + 5.0 * k as f64 / (n - 1) as f64;
                let w = (lambda + beta * z).exp();
                (w, fragility_prob(w, &truth))
            })
            .collect()
    }

    #[test]
    fn recovers_reference_parameters() {
        let fit = calibrate_fragility(&synth(4.4443, 0.4226, 20)).unwrap();
        assert!((fit.params.lambda - 4.4443).abs() < 0.01, "{fit:?}");
        assert!((fit.params.beta - 0.4226).abs() < 0.02, "{fit:?}");
    }

    #[test]
    fn converges_at_fifty_points() {
        let fit = calibrate_fragility(&synth(4.1715, 0.2217, 50)).unwrap();
        assert!((fit.params.lambda - 4.1715).abs() < 0.005, "{fit:?}");
        assert!((fit.params.beta - 0.2217).abs() < 0.01, "{fit:?}");
    }

    #[test]
    fn three_exact_points() {
        let pts = synth(4.3, 0.35, 3);
        // direct substitution: the truth has zero residual
        let truth = FragilityParams { lambda: 4.3, beta: 0.35 };
        assert!(pts.iter().all(|(w, y)| fragility_prob(*w, &truth) == *y));
        let fit = calibrate_fragility(&pts).unwrap();
        assert!(fit.residual < 1e-8, "{fit:?}");
    }

    #[test]
    fn error_cases() {
        assert!(matches!(
            calibrate_fragility(&[(80.0, 0.2), (90.0, 0.4)]),
            Err(AnalyticsError::InsufficientPoints(2))
        ));
        assert!(matches!(
            calibrate_fragility(&[(80.0, 0.5), (80.0, 0.5), (80.0, 0.5)]),
            Err(AnalyticsError::DegenerateData(_))
        ));
        assert!(calibrate_fragility(&[(0.0, 0.5), (80.0, 0.5), (90.0, 0.6)]).is_err());
    }

    #[test]
    fn initial_lambda_interpolates_crossing() {
        let pts = [(60.0, 0.1), (80.0, 0.4), (100.0, 0.6), (120.0, 0.9)];
        assert!((initial_lambda(&pts) - 90.0_f64.ln()).abs() < 1e-12);
    }
}
