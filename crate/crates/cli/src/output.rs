//! In-memory artifact set and atomic writing.

use std::io::Write;
use std::path::Path;

use serde_json::Value;
use tempfile::NamedTempFile;

use retvol::io;
use retvol::{Kernel, LagCurve, TailHistogram};

use crate::CliError;

/// Files to write, keyed by path relative to the output directory.
#[derive(Debug, Default)]
pub struct Artifacts {
    files: Vec<(String, Vec<u8>)>,
}

impl Artifacts {
    pub fn names(&self) -> Vec<String> {
        self.files.iter().map(|(n, _)| n.clone()).collect()
    }

    fn push(&mut self, name: &str, bytes: Vec<u8>) {
        self.files.retain(|(n, _)| n != name);
        self.files.push((name.to_string(), bytes));
    }

    pub fn text(&mut self, name: &str, text: String) {
        self.push(name, text.into_bytes());
    }

    pub fn json(&mut self, name: &str, value: &Value) -> Result<(), CliError> {
        let mut text =
            serde_json::to_string_pretty(value).map_err(|e| CliError::Compute(e.to_string()))?;
        text.push('\n');
        self.text(name, text);
        Ok(())
    }

    pub fn lag_curve(&mut self, name: &str, curve: &LagCurve) -> Result<(), CliError> {
        let mut buf = Vec::new();
        io::write_lag_curve(&mut buf, curve)?;
        self.push(name, buf);
        Ok(())
    }

    pub fn tail(&mut self, name: &str, hist: &TailHistogram) -> Result<(), CliError> {
        let mut buf = Vec::new();
        io::write_tail_histogram(&mut buf, hist)?;
        self.push(name, buf);
        Ok(())
    }

    pub fn returns(&mut self, name: &str, values: &[f64]) -> Result<(), CliError> {
        let mut buf = Vec::new();
        io::write_returns(&mut buf, values)?;
        self.push(name, buf);
        Ok(())
    }

    pub fn kernel(&mut self, name: &str, kernel: &Kernel) -> Result<(), CliError> {
        let mut buf = Vec::new();
        io::write_kernel(&mut buf, kernel)?;
        self.push(name, buf);
        Ok(())
    }

    /// Writes every file through a temporary sibling that is renamed into place.
    pub fn write_to(&self, out: &Path) -> Result<(), CliError> {
        let fail = |p: &Path, e: std::io::Error| CliError::Compute(format!("{}: {e}", p.display()));
        for (name, bytes) in &self.files {
            let target = out.join(name);
            let dir = target.parent().unwrap_or(out);
            std::fs::create_dir_all(dir).map_err(|e| fail(dir, e))?;
            let mut tmp = NamedTempFile::new_in(dir).map_err(|e| fail(dir, e))?;
            tmp.write_all(bytes).map_err(|e| fail(&target, e))?;
            tmp.as_file().sync_all().map_err(|e| fail(&target, e))?;
            tmp.persist(&target).map_err(|e| fail(&target, e.error))?;
        }
        Ok(())
    }
}
