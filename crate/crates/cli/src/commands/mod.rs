mod calibrate;
mod compare;
mod simulate;
mod sweep;
mod synth;
mod windfield;

use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::cli::Command;
use crate::error::CliError;
use crate::manifest::{digest_outputs, digest_tree, FileDigest, RunManifest, RUN_MANIFEST, TOOL_NAME, TOOL_VERSION};

/// What a command produced, for the manifest.
pub struct Outcome {
    /// Directory the outputs are listed relative to.
    pub root: PathBuf,
    pub manifest_path: PathBuf,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
    pub config: serde_json::Value,
    pub master_seed: Option<u64>,
}

impl Outcome {
    /// Outcome whose manifest sits in the output directory itself.
    pub fn in_dir(dir: &Path) -> Self {
        Self {
            root: dir.to_path_buf(),
            manifest_path: dir.join(RUN_MANIFEST),
            inputs: Vec::new(),
            outputs: Vec::new(),
            config: serde_json::Value::Null,
            master_seed: None,
        }
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<PathBuf, CliError> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| CliError::output_io(parent, e))?;
    }
    std::fs::write(path, text).map_err(|e| CliError::output_io(path, e))?;
    Ok(path.to_path_buf())
}

pub fn create_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::output_io(dir, e))
}

/// Runs a command and writes its manifest; returns the manifest path.
pub fn execute(mut command: Command) -> Result<PathBuf, CliError> {
    command.absolutize();
    if let Command::Replay(args) = &command {
        return replay(&args.manifest, args.out.clone());
    }
    let started = chrono::Utc::now();
    let clock = Instant::now();
    let outcome = match &command {
        Command::Windfield(a) => windfield::run(a)?,
        Command::Simulate(a) => simulate::run(a)?,
        Command::Compare(a) => compare::run(a)?,
        Command::Calibrate(a) => calibrate::run(a)?,
        Command::Synth(a) => synth::run(a)?,
        Command::Sweep(a) => sweep::run(a)?,
        Command::Replay(_) => unreachable!("handled above"),
    };
    let inputs: Vec<FileDigest> =
        outcome.inputs.iter().map(|p| digest_tree(p)).collect::<Result<Vec<_>, _>>()?.concat();
    let manifest = RunManifest {
        tool: TOOL_NAME.into(),
        version: TOOL_VERSION.into(),
        command,
        config: outcome.config,
        master_seed: outcome.master_seed,
        inputs,
        outputs: digest_outputs(&outcome.root, &outcome.outputs)?,
        started_utc: started.to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        duration_s: clock.elapsed().as_secs_f64(),
    };
    manifest.write(&outcome.manifest_path)?;
    log::info!("wrote {}", outcome.manifest_path.display());
    Ok(outcome.manifest_path)
}

fn replay(manifest_path: &Path, out: Option<PathBuf>) -> Result<PathBuf, CliError> {
    let recorded = RunManifest::read(manifest_path)?;
    recorded.verify_inputs()?;
    let mut command = recorded.command.clone();
    if let Some(out) = out {
        command.set_out(out);
    }
    let new_path = execute(command)?;
    let fresh = RunManifest::read(&new_path)?;
    if fresh.outputs != recorded.outputs {
        let differing: Vec<String> = recorded
            .outputs
            .iter()
            .filter(|d| !fresh.outputs.contains(d))
            .map(|d| d.path.display().to_string())
            .collect();
        return Err(CliError::internal(
            "ReplayMismatch",
            format!("replayed outputs differ from the record: {}", differing.join(", ")),
        ));
    }
    log::info!("replay reproduced {} output files", fresh.outputs.len());
    Ok(new_path)
}
