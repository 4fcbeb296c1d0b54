use outage_core::time::parse_timestamp;
use outage_core::wind::io::MANIFEST_FILE;
use outage_core::wind::{export_wind_fields, parse_track, BBox, WindFieldSpec, DEFAULT_DT_S};

use super::Outcome;
use crate::cli::WindfieldArgs;
use crate::config::{require, RunConfig};
use crate::error::CliError;

pub fn run(args: &WindfieldArgs) -> Result<Outcome, CliError> {
    let cfg = args.config.as_deref().map(RunConfig::load).transpose()?;
    let track_path = match (&args.track, &cfg) {
        (Some(p), _) => p.clone(),
        (None, Some(c)) => require(&c.inputs.track, "inputs.track")?.to_path_buf(),
        (None, None) => return Err(CliError::input("MissingArgument", "--track or --config is required")),
    };
    let mut spec = match (&args.bbox, cfg.as_ref().and_then(|c| c.wind)) {
        (Some(b), base) => {
            let bbox: BBox = b.parse()?;
            WindFieldSpec { bbox, ..base.unwrap_or(WindFieldSpec::new(bbox)) }
        }
        (None, Some(w)) => w,
        (None, None) => return Err(CliError::input("MissingArgument", "--bbox or a config [wind] section is required")),
    };
    if let Some(c) = args.cell_size {
        spec.cell_size = c;
    }
    let dt = args.dt.or(cfg.as_ref().map(|c| c.simulation.dt_s)).unwrap_or(DEFAULT_DT_S);

    let track = parse_track(&track_path)?;
    let ts = |s: &Option<String>| -> Result<Option<_>, CliError> {
        s.as_deref()
            .map(|v| parse_timestamp(v).ok_or_else(|| CliError::input("InvalidTimestamp", format!("cannot parse '{v}'"))))
            .transpose()
    };
    let start = ts(&args.start)?.or(cfg.as_ref().map(|c| c.simulation.start)).unwrap_or(track.start());
    let end = ts(&args.end)?.or(cfg.as_ref().map(|c| c.simulation.end)).unwrap_or(track.end());
    let series = spec.generate_window(&track, start, end, dt)?;
    let wm = export_wind_fields(&series, &args.out)?;
    log::info!("{} rasters of {}x{} cells", series.len(), series.grid().nrows, series.grid().ncols);

    let mut outcome = Outcome::in_dir(&args.out);
    outcome.inputs.push(track_path);
    outcome.inputs.extend(args.config.clone());
    outcome.outputs.push(args.out.join(MANIFEST_FILE));
    outcome.outputs.extend(wm.files.iter().map(|f| args.out.join(f)));
    outcome.config = serde_json::json!({
        "wind": spec,
        "dt_s": dt,
        "start": outage_core::time::format_timestamp(&start),
        "end": outage_core::time::format_timestamp(&end),
    });
    Ok(outcome)
}
