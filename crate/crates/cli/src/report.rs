//! Report files and output helpers shared by the commands.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const REPORT_FORMAT: &str = "otlab-report";
pub const REPORT_VERSION: u32 = 1;

/// Common header of every report. Command-specific sections are flattened
/// in after it; `timings` always comes last.
#[derive(Debug, Serialize)]
pub struct Report<B: Serialize> {
    pub format: &'static str,
    pub version: u32,
    pub command: String,
    pub argv: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance_digest: Option<String>,
    #[serde(flatten)]
    pub body: B,
    pub timings: BTreeMap<String, f64>,
}

impl<B: Serialize> Report<B> {
    pub fn new(command: &str, body: B) -> Self {
        Self {
            format: REPORT_FORMAT,
            version: REPORT_VERSION,
            command: command.into(),
            argv: std::env::args().collect(),
            instance: None,
            instance_digest: None,
            body,
            timings: BTreeMap::new(),
        }
    }

    pub fn with_instance(mut self, path: &Path, bytes: &[u8]) -> Self {
        self.instance = Some(path.display().to_string());
        self.instance_digest = Some(digest(bytes));
        self
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Input(format!("cannot encode report: {e}")))
    }
}

pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

pub fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Write { path: path.display().to_string(), source })
}

/// Writes the TOML report to `out` and a pretty summary to stdout, or the
/// TOML to stdout when there is no `out`.
pub fn emit<B: Serialize>(report: &Report<B>, out: Option<&Path>, summary: &str) -> Result<(), CliError> {
    let text = report.to_toml()?;
    match out {
        Some(path) => {
            write_file(path, &text)?;
            print!("{summary}");
        }
        None => print!("{text}"),
    }
    Ok(())
}

/// Six significant digits, switching to exponent form outside `[1e-4, 1e6)`.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let e = x.abs().log10().floor() as i32;
    if (-4..6).contains(&e) {
        format!("{:.*}", (5 - e) as usize, x)
    } else {
        format!("{x:.5e}")
    }
}

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Aligned two-column listing.
pub fn pretty_rows(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
}
