//! CSV recording ingest: header row names the channels, an optional
//! leading time column supplies the sampling rate, and an optional units
//! argument converts amplitudes to millivolts.

use crate::config::Units;
use crate::error::{validation, CliError};
use semg::signal::{make_recording, Recording};
use std::collections::BTreeMap;
use std::path::Path;

/// Relative tolerance for time-column uniformity.
const TIME_JITTER_TOLERANCE: f64 = 1e-6;

const TIME_COLUMN_NAMES: &[&str] = &["t", "time", "time_s", "seconds"];

pub struct IngestOptions {
    /// Sampling rate when the file has no time column.
    pub fs: Option<f64>,
    pub units: Units,
}

impl Default for IngestOptions {
    fn default() -> Self {
        Self {
            fs: None,
            units: Units::MV,
        }
    }
}

pub fn ingest_csv(path: &Path, options: &IngestOptions) -> Result<Recording, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| validation(format!("cannot open {}: {e}", path.display())))?;

    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| validation(format!("cannot read header of {}: {e}", path.display())))?
        .iter()
        .map(str::to_string)
        .collect();
    if headers.is_empty() {
        return Err(validation(format!("{}: empty header row", path.display())));
    }

    let has_time = TIME_COLUMN_NAMES.contains(&headers[0].to_ascii_lowercase().as_str());
    let first_channel = usize::from(has_time);
    let channel_names: Vec<String> = headers[first_channel..].to_vec();
    if channel_names.is_empty() {
        return Err(validation(format!(
            "{}: no signal columns after the time column",
            path.display()
        )));
    }

    let mut times: Vec<f64> = Vec::new();
    let mut channels: Vec<Vec<f64>> = vec![Vec::new(); channel_names.len()];
    for record in reader.records() {
        let record =
            record.map_err(|e| validation(format!("cannot parse {}: {e}", path.display())))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != headers.len() {
            return Err(validation(format!(
                "row {line}: {} fields, header has {}",
                record.len(),
                headers.len()
            )));
        }
        let parse_cell = |index: usize| -> Result<f64, CliError> {
            let raw = &record[index];
            raw.parse::<f64>().map_err(|_| {
                validation(format!(
                    "non-numeric value \"{raw}\" at row {line}, column {}",
                    headers[index]
                ))
            })
        };
        if has_time {
            times.push(parse_cell(0)?);
        }
        for (c, channel) in channels.iter_mut().enumerate() {
            channel.push(parse_cell(first_channel + c)?);
        }
    }

    let n = channels[0].len();
    if n == 0 {
        return Err(validation(format!("{}: no samples", path.display())));
    }

    let mut warnings = Vec::new();
    let fs = if has_time {
        let derived = rate_from_times(&times)?;
        if let Some(requested) = options.fs {
            if (requested - derived).abs() > 1e-3 * derived {
                warnings.push(format!(
                    "requested fs {requested} Hz ignored; {derived} Hz derived from the time column"
                ));
            }
        }
        derived
    } else {
        options.fs.ok_or_else(|| {
            validation(format!(
                "{}: no time column and no sampling rate given (pass --fs or set ingest.fs)",
                path.display()
            ))
        })?
    };

    let scale = options.units.to_millivolts();
    let named: Vec<(String, Vec<f64>)> = channel_names
        .into_iter()
        .zip(channels)
        .map(|(name, samples)| (name, samples.iter().map(|v| v * scale).collect()))
        .collect();

    let mut meta = BTreeMap::new();
    meta.insert(
        "source".to_string(),
        path.file_name().map_or_else(
            || path.display().to_string(),
            |f| f.to_string_lossy().into_owned(),
        ),
    );
    meta.insert(
        "units_in".to_string(),
        match options.units {
            Units::V => "V",
            Units::MV => "mV",
            Units::UV => "uV",
        }
        .to_string(),
    );
    meta.insert(
        "time_column".to_string(),
        if has_time { "yes" } else { "no" }.to_string(),
    );

    let mut recording = make_recording(named, fs, meta).map_err(|e| validation(e.to_string()))?;
    recording.warnings.extend(warnings);
    Ok(recording)
}

/// Sampling rate from a time column that must be uniform within 1 ppm.
fn rate_from_times(times: &[f64]) -> Result<f64, CliError> {
    if times.len() < 2 {
        return Err(validation(
            "cannot derive a sampling rate from a single row; pass --fs".to_string(),
        ));
    }
    let dt0 = times[1] - times[0];
    if !(dt0 > 0.0) {
        return Err(validation(format!(
            "time column not increasing at row 3: step {dt0} s"
        )));
    }
    for (i, pair) in times.windows(2).enumerate() {
        let dt = pair[1] - pair[0];
        if ((dt - dt0) / dt0).abs() > TIME_JITTER_TOLERANCE {
            // Header is line 1, so sample i starts at line i + 2.
            return Err(validation(format!(
                "time column not uniform at row {}: step {dt} s vs {dt0} s",
                i + 3
            )));
        }
    }
    let span = times[times.len() - 1] - times[0];
    Ok((times.len() - 1) as f64 / span)
}
