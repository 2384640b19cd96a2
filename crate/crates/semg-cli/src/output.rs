//! Deterministic file output: CSV with fixed 9-significant-digit float
//! formatting and fixed column order, so identical runs produce
//! byte-identical artifacts.

use crate::error::{runtime, CliError};
use std::path::Path;

/// Locale-independent float formatting with 9 significant digits.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.8e}")
}

pub fn fmt_opt_float(v: Option<f64>) -> String {
    v.map(fmt_float).unwrap_or_default()
}

/// Writes rows of already-formatted fields as a CSV file.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut writer = csv::WriterBuilder::new()
        .from_path(path)
        .map_err(|e| runtime(format!("cannot create {}: {e}", path.display())))?;
    writer
        .write_record(header)
        .map_err(|e| runtime(format!("cannot write {}: {e}", path.display())))?;
    for row in rows {
        writer
            .write_record(row)
            .map_err(|e| runtime(format!("cannot write {}: {e}", path.display())))?;
    }
    writer
        .flush()
        .map_err(|e| runtime(format!("cannot flush {}: {e}", path.display())))?;
    Ok(())
}

pub fn write_text(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content)
        .map_err(|e| runtime(format!("cannot write {}: {e}", path.display())))
}

pub fn ensure_dir(path: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(path)
        .map_err(|e| runtime(format!("cannot create directory {}: {e}", path.display())))
}
