use std::collections::BTreeMap;

use outage_core::analytics::{bands_to_csv, compare, parse_observed, ResolutionTable};
use outage_core::engine::read_ensemble;
use outage_core::time::format_timestamp;

use super::{create_dir, write_text, Outcome};
use crate::cli::CompareArgs;
use crate::error::CliError;

pub fn run(args: &CompareArgs) -> Result<Outcome, CliError> {
    let levels = (args.q_low, args.q_high);
    if !(0.0 <= levels.0 && levels.0 < levels.1 && levels.1 <= 1.0) {
        return Err(CliError::input("InvalidArgument", format!("quantile levels {levels:?} must satisfy 0 <= low < high <= 1")));
    }
    let observed = parse_observed(&args.observed)?;
    let table: Option<ResolutionTable> = args
        .resolution_table
        .as_deref()
        .map(|p| {
            let text =
                std::fs::read_to_string(p).map_err(|e| CliError::input("Io", format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| CliError::input("MalformedFile", format!("{}: {e}", p.display())))
        })
        .transpose()?;
    create_dir(&args.out)?;

    let mut outcome = Outcome::in_dir(&args.out);
    outcome.inputs.push(args.observed.clone());
    outcome.inputs.extend(args.resolution_table.clone());
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    let mut summary = String::from("label,method,n_runs,avg_rmse\n");
    for dir in &args.ensembles {
        let ensemble = read_ensemble(dir)?;
        let mut report = compare(&ensemble, &observed, levels)?;
        report.resolution_table = table.clone();
        let count = seen.entry(ensemble.method.to_string()).or_insert(0);
        *count += 1;
        let label = if *count == 1 { ensemble.method.to_string() } else { format!("{}_{count}", ensemble.method) };
        log::info!("{label}: avg RMSE {:.4} over {} runs", report.avg_rmse, report.n_runs);
        summary.push_str(&format!("{label},{},{},{}\n", report.method, report.n_runs, report.avg_rmse));

        let mut regional = String::from("region,timestamp,mean,q01,q99\n");
        for (region, r) in &report.per_region {
            for b in &r.quantile_bands {
                regional.push_str(&format!("{region},{},{},{},{}\n", format_timestamp(&b.timestamp), b.mean, b.q01, b.q99));
            }
        }
        outcome.inputs.push(dir.clone());
        outcome.outputs.push(write_text(&args.out.join(format!("report_{label}.json")), &(report.to_json() + "\n"))?);
        outcome.outputs.push(write_text(&args.out.join(format!("bands_{label}.csv")), &bands_to_csv(&report.quantile_bands))?);
        outcome.outputs.push(write_text(&args.out.join(format!("bands_regions_{label}.csv")), &regional)?);
    }
    outcome.outputs.push(write_text(&args.out.join("comparison.csv"), &summary)?);
    outcome.config = serde_json::json!({ "levels": [levels.0, levels.1] });
    Ok(outcome)
}
