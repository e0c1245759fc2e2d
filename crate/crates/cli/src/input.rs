use std::fs;
use std::path::Path;

use rro_core::Sample;
use sha2::{Digest, Sha256};
use serde::Serialize;

use crate::error::CliError;

/// Path and SHA-256 of an input file, for the run manifest.
#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Parses one number per line. Blank lines and lines starting with `#` are
/// skipped; anything else must be a finite number.
pub fn parse_values(text: &str) -> Result<Vec<f64>, String> {
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(_) => return Err(format!("line {}: value `{line}` is not finite", i + 1)),
            Err(_) => return Err(format!("line {}: `{line}` is not a number", i + 1)),
        }
    }
    Ok(values)
}

pub fn read_sample(path: &Path) -> Result<(Sample, InputDigest), CliError> {
    let bytes = fs::read(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::Input(format!("{}: not valid UTF-8", path.display())))?;
    let values = parse_values(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    if values.is_empty() {
        return Err(CliError::Input(format!("{}: no values", path.display())));
    }
    let sample = Sample::new(values).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let digest = InputDigest {
        path: path.display().to_string(),
        sha256: hex(&Sha256::digest(&bytes)),
    };
    Ok((sample, digest))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
