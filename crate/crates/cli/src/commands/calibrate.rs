use outage_core::analytics::{calibrate_fragility, calibration_points, parse_observed, AnalyticsError, TOTAL};
use outage_core::network::{parse_network, FragilityParams, RegionFragilityTable};
use outage_core::wind::import_wind_fields;

use super::{write_text, Outcome};
use crate::cli::{CalibrateArgs, Scope};
use crate::error::CliError;

pub fn run(args: &CalibrateArgs) -> Result<Outcome, CliError> {
    let observed = parse_observed(&args.observed)?;
    let network = parse_network(&args.network)?;
    let wind = import_wind_fields(&args.windfield)?;
    let missing = |region: &str| AnalyticsError::InvalidObserved {
        region: region.into(),
        reason: "no observed series to calibrate against".into(),
    };

    let mut table = RegionFragilityTable::new();
    let mut fits = serde_json::Map::new();
    match args.scope {
        Scope::Region => {
            for region in network.regions() {
                let series = observed.get(region).ok_or_else(|| missing(region))?;
                let fit = calibrate_fragility(&calibration_points(&network, &wind, series, Some(region))?)?;
                log::info!("{region}: lambda {:.4} beta {:.4} residual {:.3e}", fit.params.lambda, fit.params.beta, fit.residual);
                table.insert(region.clone(), FragilityParams::new(fit.params.lambda, fit.params.beta)?);
                fits.insert(region.clone(), serde_json::json!(fit));
            }
        }
        Scope::Total => {
            let series = observed.get(TOTAL).ok_or_else(|| missing(TOTAL))?;
            let fit = calibrate_fragility(&calibration_points(&network, &wind, series, None)?)?;
            log::info!("system: lambda {:.4} beta {:.4} residual {:.3e}", fit.params.lambda, fit.params.beta, fit.residual);
            for region in network.regions() {
                table.insert(region.clone(), FragilityParams::new(fit.params.lambda, fit.params.beta)?);
            }
            fits.insert(TOTAL.into(), serde_json::json!(fit));
        }
    }

    let out_dir = args.out.parent().map(|p| p.to_path_buf()).unwrap_or_default();
    let mut outcome = Outcome::in_dir(&out_dir);
    outcome.manifest_path = args.out.with_extension("manifest.json");
    outcome.inputs = vec![args.observed.clone(), args.network.clone(), args.windfield.clone()];
    outcome.outputs.push(write_text(&args.out, &table.to_csv())?);
    outcome.config = serde_json::json!({ "scope": args.scope, "fits": fits });
    Ok(outcome)
}
