//! Reproducibility record written next to every command's outputs.

use std::io::Read;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cli::Command;
use crate::error::CliError;

pub const RUN_MANIFEST: &str = "run_manifest.json";
pub const TOOL_NAME: &str = env!("CARGO_PKG_NAME");
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: PathBuf,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    /// Fully resolved command, absolute paths; replaying it reproduces the outputs.
    pub command: Command,
    pub config: serde_json::Value,
    pub master_seed: Option<u64>,
    pub inputs: Vec<FileDigest>,
    /// Paths relative to the output location.
    pub outputs: Vec<FileDigest>,
    pub started_utc: String,
    pub duration_s: f64,
}

pub fn sha256_file(path: &Path) -> Result<String, CliError> {
    let mut f = std::fs::File::open(path).map_err(|e| CliError::input("Io", format!("{}: {e}", path.display())))?;
    let mut h = Sha256::new();
    let mut buf = vec![0u8; 1 << 16];
    loop {
        let n = f.read(&mut buf).map_err(|e| CliError::input("Io", format!("{}: {e}", path.display())))?;
        if n == 0 {
            break;
        }
        h.update(&buf[..n]);
    }
    Ok(format!("{:x}", h.finalize()))
}

/// Digests of `path`, or of every file below it when it is a directory.
pub fn digest_tree(path: &Path) -> Result<Vec<FileDigest>, CliError> {
    let mut out = Vec::new();
    if path.is_dir() {
        let mut entries: Vec<PathBuf> = std::fs::read_dir(path)
            .map_err(|e| CliError::input("Io", format!("{}: {e}", path.display())))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .collect();
        entries.sort();
        for p in entries {
            out.extend(digest_tree(&p)?);
        }
    } else {
        out.push(FileDigest { path: path.to_path_buf(), sha256: sha256_file(path)? });
    }
    Ok(out)
}

/// Digests of the given output files, keyed by their path relative to `root`.
pub fn digest_outputs(root: &Path, files: &[PathBuf]) -> Result<Vec<FileDigest>, CliError> {
    files
        .iter()
        .map(|f| {
            let rel = f.strip_prefix(root).unwrap_or(f).to_path_buf();
            Ok(FileDigest { path: rel, sha256: sha256_file(f)? })
        })
        .collect()
}

impl RunManifest {
    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(path, text + "\n").map_err(|e| CliError::output_io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::input("Io", format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::input("MalformedFile", format!("{}: {e}", path.display())))
    }

    /// Fails if any recorded input changed since the manifest was written.
    pub fn verify_inputs(&self) -> Result<(), CliError> {
        for d in &self.inputs {
            let now = sha256_file(&d.path)?;
            if now != d.sha256 {
                return Err(CliError::input(
                    "InputChanged",
                    format!("{} no longer matches its recorded digest", d.path.display()),
                ));
            }
        }
        Ok(())
    }
}
