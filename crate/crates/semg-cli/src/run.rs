//! Subcommand implementations. Every command ingests, processes, and
//! writes its artifacts sequentially in channel order, so identical inputs
//! and config produce byte-identical outputs.

use crate::config::{PipelineConfig, SynthKind};
use crate::error::{lib_runtime, runtime, validation, CliError};
use crate::ingest::{ingest_csv, IngestOptions};
use crate::output::{ensure_dir, fmt_float, fmt_opt_float, write_csv, write_text};
use crate::plot;
use semg::coactivation::{
    coactivation_report, time_normalize, CoactivationReport, NormalizedCycle,
};
use semg::epoch::{segment, select_active_segment, EpochPlan, EpochSeries};
use semg::features::{fatigue_trend, feature_table, FeatureConfig, FeatureTable, TrendResult};
use semg::normalization::{normalize_to_mvc, MvcReference, SmoothingConfig};
use semg::preprocess::{
    apply_filter, design_butterworth_bandpass, moving_average_envelope, notch_powerline, rectify,
    remove_offset, rms_envelope,
};
use semg::signal::{ChannelSignal, Envelope, EnvelopeKind, Recording};
use semg::spectral::periodogram_epoch;
use semg::stats::{choose_test, histogram, quartile_summary, RoutingReport};
use serde_json::json;
use std::path::Path;

/// One channel taken through filtering, smoothing, and feature extraction.
pub struct ProcessedChannel {
    pub label: String,
    pub filtered: ChannelSignal,
    pub envelope: Envelope,
    pub series: EpochSeries,
    pub features: FeatureTable,
    pub warnings: Vec<String>,
}

fn feature_columns(table: &FeatureTable) -> [(&'static str, Vec<f64>); 5] {
    [
        ("rms_mv", table.rms_mv.clone()),
        ("arv_mv", table.arv_mv.clone()),
        ("zc", table.zc.iter().map(|z| f64::from(*z)).collect()),
        ("mnf_hz", table.mnf_hz.clone()),
        ("mdf_hz", table.mdf_hz.clone()),
    ]
}

/// Runs the standard chain on one channel: offset removal, band-pass,
/// optional notch cascade, optional active-segment crop, smoothing, and
/// per-epoch features. Precondition failures (too short for the filter or
/// the window, bad band for the rate) are validation errors; feature
/// extraction failures are runtime errors.
pub fn preprocess_channel(
    channel: &ChannelSignal,
    config: &PipelineConfig,
) -> Result<ProcessedChannel, CliError> {
    let mut warnings = Vec::new();
    let centered = remove_offset(channel);
    let band = design_butterworth_bandpass(
        config.filter.order,
        config.filter.low_hz,
        config.filter.high_hz,
        channel.fs,
    )
    .map_err(|e| validation(format!("filter design for {}: {e}", channel.label)))?;
    let mut filtered = apply_filter(&band, &centered, config.filter.zero_phase)
        .map_err(|e| validation(format!("band-pass on {}: {e}", channel.label)))?;

    if config.notch.enabled {
        let outcome = notch_powerline(
            &filtered,
            config.notch.center_hz,
            config.notch.harmonics,
            config.notch.q,
        )
        .map_err(|e| validation(format!("notch on {}: {e}", channel.label)))?;
        filtered = outcome.signal;
        warnings.extend(outcome.warnings);
    }
    if let Some(seg) = &config.active_segment {
        filtered = select_active_segment(&filtered, seg.t0_s, seg.t1_s)
            .map_err(|e| validation(format!("active segment on {}: {e}", channel.label)))?;
    }

    let window = config.smoothing_samples(filtered.fs);
    let envelope = match config.smoothing.kind {
        EnvelopeKind::MovingAverage => moving_average_envelope(&rectify(&filtered), window),
        EnvelopeKind::Rms => rms_envelope(&filtered, window),
    }
    .map_err(|e| validation(format!("smoothing on {}: {e}", channel.label)))?;

    let plan = EpochPlan::new(config.epoch.window_ms, config.epoch.overlap)
        .map_err(|e| validation(format!("epoch settings: {e}")))?;
    let series = segment(&filtered, &plan)
        .map_err(|e| validation(format!("epoching {}: {e}", channel.label)))?;
    let feature_config = FeatureConfig {
        window: config.features.spectral_window,
        zc_threshold_mv: config.features.zc_threshold_mv,
    };
    let features = feature_table(&channel.label, &series, &feature_config).map_err(lib_runtime)?;

    Ok(ProcessedChannel {
        label: channel.label.clone(),
        filtered,
        envelope,
        series,
        features,
        warnings,
    })
}

fn process_all(
    recording: &Recording,
    config: &PipelineConfig,
) -> Result<Vec<ProcessedChannel>, CliError> {
    recording
        .channels
        .iter()
        .map(|c| preprocess_channel(c, config))
        .collect()
}

// ---------------------------------------------------------------- commands

pub fn ingest_check(input: &Path, options: &IngestOptions) -> Result<(), CliError> {
    let recording = ingest_csv(input, options)?;
    let samples = recording.channels[0].len();
    let n = recording.channels.len();
    // A rate recovered from a time column carries rounding dust; display
    // it rounded without touching the stored value.
    let fs = recording.fs;
    let fs_text = if (fs - fs.round()).abs() < 1e-6 * fs {
        format!("{}", fs.round())
    } else {
        format!("{fs}")
    };
    println!(
        "ok: {n} channel{} x {samples} samples at {fs_text} Hz ({:.3} s)",
        if n == 1 { "" } else { "s" },
        recording.channels[0].duration_s()
    );
    let labels: Vec<&str> = recording
        .channels
        .iter()
        .map(|c| c.label.as_str())
        .collect();
    println!("channels: {}", labels.join(", "));
    for w in &recording.warnings {
        println!("warning: {w}");
    }
    Ok(())
}

/// Time column for a written signal: sample index over the rate, printed
/// wide enough (16 significant digits) to re-ingest as uniform within 1 ppm.
fn time_cell(index: usize, fs: f64) -> String {
    format!("{:.15e}", index as f64 / fs)
}

pub fn preprocess_cmd(
    input: &Path,
    options: &IngestOptions,
    config: &PipelineConfig,
    out: &Path,
) -> Result<(), CliError> {
    let recording = ingest_csv(input, options)?;
    let processed = process_all(&recording, config)?;
    ensure_dir(out)?;

    let mut header: Vec<&str> = vec!["t"];
    for p in &processed {
        header.push(&p.label);
    }
    let n = processed[0].filtered.len();
    let fs = processed[0].filtered.fs;
    let mut filtered_rows = Vec::with_capacity(n);
    let mut envelope_rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut f_row = vec![time_cell(i, fs)];
        let mut e_row = vec![time_cell(i, fs)];
        for p in &processed {
            f_row.push(fmt_float(p.filtered.samples[i]));
            e_row.push(fmt_float(p.envelope.samples[i]));
        }
        filtered_rows.push(f_row);
        envelope_rows.push(e_row);
    }
    write_csv(&out.join("preprocessed.csv"), &header, &filtered_rows)?;
    write_csv(&out.join("envelopes.csv"), &header, &envelope_rows)?;
    Ok(())
}

const FEATURES_HEADER: [&str; 8] = [
    "channel",
    "epoch",
    "start_time_s",
    "rms_mv",
    "arv_mv",
    "zero_crossings",
    "mnf_hz",
    "mdf_hz",
];

fn features_rows(processed: &[ProcessedChannel]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for p in processed {
        let t = &p.features;
        for i in 0..t.rows() {
            rows.push(vec![
                p.label.clone(),
                i.to_string(),
                fmt_float(t.start_times_s[i]),
                fmt_float(t.rms_mv[i]),
                fmt_float(t.arv_mv[i]),
                t.zc[i].to_string(),
                fmt_float(t.mnf_hz[i]),
                fmt_float(t.mdf_hz[i]),
            ]);
        }
    }
    rows
}

pub fn features_cmd(
    input: &Path,
    options: &IngestOptions,
    config: &PipelineConfig,
    out: &Path,
) -> Result<(), CliError> {
    let recording = ingest_csv(input, options)?;
    let processed = process_all(&recording, config)?;
    ensure_dir(out)?;
    write_csv(
        &out.join("features.csv"),
        &FEATURES_HEADER,
        &features_rows(&processed),
    )
}

const FATIGUE_HEADER: [&str; 6] = [
    "channel",
    "metric",
    "slope_per_s",
    "intercept",
    "r",
    "degenerate",
];

fn trends_of(table: &FeatureTable) -> Result<Vec<(&'static str, TrendResult)>, CliError> {
    let mut out = Vec::new();
    for (name, values) in feature_columns(table) {
        if name == "zc" {
            continue;
        }
        let trend = fatigue_trend(&table.start_times_s, &values).map_err(lib_runtime)?;
        out.push((name, trend));
    }
    Ok(out)
}

fn fatigue_rows(processed: &[ProcessedChannel]) -> Result<Vec<Vec<String>>, CliError> {
    let mut rows = Vec::new();
    for p in processed {
        for (metric, trend) in trends_of(&p.features)? {
            rows.push(vec![
                p.label.clone(),
                metric.to_string(),
                fmt_float(trend.slope),
                fmt_float(trend.intercept),
                fmt_float(trend.r),
                trend.degenerate.to_string(),
            ]);
        }
    }
    Ok(rows)
}

pub fn fatigue_cmd(
    input: &Path,
    options: &IngestOptions,
    config: &PipelineConfig,
    out: &Path,
) -> Result<(), CliError> {
    let recording = ingest_csv(input, options)?;
    let processed = process_all(&recording, config)?;
    ensure_dir(out)?;
    write_csv(
        &out.join("fatigue.csv"),
        &FATIGUE_HEADER,
        &fatigue_rows(&processed)?,
    )
}

const COACTIVATION_HEADER: [&str; 3] = ["muscle", "iemg", "coactivation_index"];

/// Envelopes feeding the coactivation integral: %MVC when every channel
/// has a configured reference (amplitudes are then comparable across
/// muscles), raw millivolts otherwise, never a mix.
fn coactivation_cycles(
    processed: &[ProcessedChannel],
    config: &PipelineConfig,
    warnings: &mut Vec<String>,
) -> Result<Vec<(String, NormalizedCycle)>, CliError> {
    let with_reference = processed
        .iter()
        .filter(|p| config.mvc.values.contains_key(&p.label))
        .count();
    let use_mvc = with_reference == processed.len() && !processed.is_empty();
    if !use_mvc && with_reference > 0 {
        warnings.push(
            "coactivation computed on raw envelopes: not every channel has an MVC reference"
                .to_string(),
        );
    }
    let mut cycles = Vec::with_capacity(processed.len());
    for p in processed {
        let envelope = if use_mvc {
            let reference = mvc_reference(config, &p.label).unwrap();
            let normalized = normalize_to_mvc(&p.envelope, &reference).map_err(lib_runtime)?;
            normalized.envelope
        } else {
            p.envelope.clone()
        };
        let cycle = time_normalize(&envelope, config.coactivation.points).map_err(lib_runtime)?;
        cycles.push((p.label.clone(), cycle));
    }
    Ok(cycles)
}

fn coactivation_rows(report: &CoactivationReport) -> Vec<Vec<String>> {
    report
        .muscles
        .iter()
        .zip(report.iemg.iter().zip(&report.ci))
        .map(|(muscle, (iemg, ci))| vec![muscle.clone(), fmt_float(*iemg), fmt_float(*ci)])
        .collect()
}

pub fn coactivation_cmd(
    input: &Path,
    options: &IngestOptions,
    config: &PipelineConfig,
    out: &Path,
) -> Result<(), CliError> {
    let recording = ingest_csv(input, options)?;
    if recording.channels.len() < 2 {
        return Err(validation(format!(
            "coactivation needs at least 2 channels, got {}",
            recording.channels.len()
        )));
    }
    let processed = process_all(&recording, config)?;
    let mut warnings = Vec::new();
    let cycles = coactivation_cycles(&processed, config, &mut warnings)?;
    let report = coactivation_report(&cycles).map_err(lib_runtime)?;
    ensure_dir(out)?;
    write_csv(
        &out.join("coactivation.csv"),
        &COACTIVATION_HEADER,
        &coactivation_rows(&report),
    )
}

const STATS_HEADER: [&str; 11] = [
    "channel",
    "feature",
    "n",
    "role",
    "test",
    "statistic",
    "p_value",
    "alpha",
    "reject_null",
    "reason",
    "notes",
];

fn stats_rows(processed: &[ProcessedChannel], alpha: f64) -> Vec<(String, String, RoutingReport)> {
    let mut out = Vec::new();
    for p in processed {
        for (name, values) in feature_columns(&p.features) {
            out.push((
                p.label.clone(),
                name.to_string(),
                choose_test(&values, alpha),
            ));
        }
    }
    out
}

fn stats_csv_rows(reports: &[(String, String, RoutingReport)]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for (channel, feature, report) in reports {
        if report.results.is_empty() {
            rows.push(vec![
                channel.clone(),
                feature.clone(),
                report.n.to_string(),
                "none".to_string(),
                "none".to_string(),
                String::new(),
                String::new(),
                fmt_float(report.alpha),
                String::new(),
                report.reason.clone(),
                String::new(),
            ]);
            continue;
        }
        for (role, result) in &report.results {
            rows.push(vec![
                channel.clone(),
                feature.clone(),
                report.n.to_string(),
                role.to_string(),
                result.test.to_string(),
                fmt_float(result.statistic),
                fmt_opt_float(result.p_value),
                fmt_float(result.alpha),
                result
                    .reject_null
                    .map(|r| r.to_string())
                    .unwrap_or_default(),
                report.reason.clone(),
                result.notes.join("; "),
            ]);
        }
    }
    rows
}

pub fn stats_cmd(
    input: &Path,
    options: &IngestOptions,
    config: &PipelineConfig,
    out: &Path,
) -> Result<(), CliError> {
    let recording = ingest_csv(input, options)?;
    let processed = process_all(&recording, config)?;
    let reports = stats_rows(&processed, config.stats.alpha);
    ensure_dir(out)?;
    write_csv(
        &out.join("stats.csv"),
        &STATS_HEADER,
        &stats_csv_rows(&reports),
    )
}

pub fn synth_cmd(config: &PipelineConfig, out: &Path) -> Result<(), CliError> {
    let s = &config.synth;
    let mut centroid: Option<Vec<(f64, f64)>> = None;
    let signal = match s.kind {
        SynthKind::Fatigue => {
            let spec = semg::synth::SynthSpec {
                fs: s.fs,
                duration_s: s.duration_s,
                amplitude_mv: s.amplitude_mv,
                shape: semg::synth::SpectralShape::CentroidTrajectory {
                    start_hz: s.start_hz,
                    end_hz: s.end_hz,
                    bandwidth_hz: s.bandwidth_hz,
                },
                seed: s.seed,
            };
            let output = semg::synth::synth_fatigue_sequence(&spec)
                .map_err(|e| validation(format!("synth: {e}")))?;
            centroid = Some(output.centroid_hz);
            output.signal
        }
        SynthKind::BandNoise => {
            let spec = semg::synth::SynthSpec {
                fs: s.fs,
                duration_s: s.duration_s,
                amplitude_mv: s.amplitude_mv,
                shape: semg::synth::SpectralShape::Band {
                    low_hz: s.low_hz,
                    high_hz: s.high_hz,
                },
                seed: s.seed,
            };
            semg::synth::synth_band_noise(&spec).map_err(|e| validation(format!("synth: {e}")))?
        }
        SynthKind::Sine => semg::synth::synth_sine(s.freq_hz, s.amplitude_mv, s.fs, s.duration_s)
            .map_err(|e| validation(format!("synth: {e}")))?,
    };

    ensure_dir(out)?;
    let rows: Vec<Vec<String>> = signal
        .samples
        .iter()
        .enumerate()
        .map(|(i, v)| vec![time_cell(i, signal.fs), fmt_float(*v)])
        .collect();
    write_csv(&out.join("synth.csv"), &["t", "emg"], &rows)?;
    if let Some(centroid) = centroid {
        let rows: Vec<Vec<String>> = centroid
            .iter()
            .map(|(t, hz)| vec![format!("{t:.15e}"), fmt_float(*hz)])
            .collect();
        write_csv(
            &out.join("synth_centroid.csv"),
            &["t_s", "centroid_hz"],
            &rows,
        )?;
    }
    Ok(())
}

// ---------------------------------------------------------------- pipeline

fn mvc_reference(config: &PipelineConfig, label: &str) -> Option<MvcReference> {
    config.mvc.values.get(label).map(|value| MvcReference {
        muscle: label.to_string(),
        mvc_value_mv: *value,
        trial_peaks_mv: vec![*value],
        smoothing: SmoothingConfig {
            kind: config.smoothing.kind,
            window_samples: 1,
        },
        warnings: Vec::new(),
    })
}

fn routing_json(report: &RoutingReport) -> serde_json::Value {
    json!({
        "n": report.n,
        "alpha": report.alpha,
        "primary": report.primary.map(|t| t.to_string()),
        "reason": report.reason,
        "results": report.results.iter().map(|(role, result)| {
            let mut value = serde_json::to_value(result).expect("test result serializes");
            value["role"] = json!(role.to_string());
            value
        }).collect::<Vec<_>>(),
    })
}

fn sanitize_label(label: &str) -> String {
    label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn psd_decile_plot(p: &ProcessedChannel, config: &PipelineConfig) -> Result<String, CliError> {
    let count = p.series.epochs.len();
    let mut indices: Vec<usize> = (0..=10).map(|k| k * (count - 1) / 10).collect();
    indices.dedup();
    let mut series = Vec::with_capacity(indices.len());
    for idx in indices {
        let epoch = &p.series.epochs[idx];
        let spectrum =
            periodogram_epoch(epoch, config.features.spectral_window).map_err(lib_runtime)?;
        series.push(plot::Series {
            name: format!("t={:.1}s", epoch.start_time_s()),
            points: spectrum
                .freqs
                .iter()
                .copied()
                .zip(spectrum.density.iter().copied())
                .collect(),
            style: plot::SeriesStyle::Line,
        });
    }
    Ok(plot::line_chart(
        &format!("PSD by epoch decile: {}", p.label),
        "frequency (Hz)",
        "PSD (mV^2/Hz)",
        &series,
    ))
}

fn trend_plot(p: &ProcessedChannel) -> Result<String, CliError> {
    let times = &p.features.start_times_s;
    let (t0, t1) = (times[0], times[times.len() - 1]);
    let mut series = Vec::new();
    for (name, values) in [
        ("mnf_hz", &p.features.mnf_hz),
        ("mdf_hz", &p.features.mdf_hz),
    ] {
        let trend = fatigue_trend(times, values).map_err(lib_runtime)?;
        series.push(plot::Series {
            name: name.to_string(),
            points: times.iter().copied().zip(values.iter().copied()).collect(),
            style: plot::SeriesStyle::Points,
        });
        series.push(plot::Series {
            name: format!("{name} fit ({:.3} Hz/s)", trend.slope),
            points: vec![
                (t0, trend.intercept + trend.slope * t0),
                (t1, trend.intercept + trend.slope * t1),
            ],
            style: plot::SeriesStyle::Line,
        });
    }
    Ok(plot::line_chart(
        &format!("Spectral fatigue trend: {}", p.label),
        "time (s)",
        "frequency (Hz)",
        &series,
    ))
}

pub fn pipeline_cmd(
    input: &Path,
    options: &IngestOptions,
    config: &PipelineConfig,
    out: &Path,
) -> Result<(), CliError> {
    let recording = ingest_csv(input, options)?;
    let processed = process_all(&recording, config)?;
    ensure_dir(out)?;
    let plots_dir = out.join("plots");
    ensure_dir(&plots_dir)?;

    write_csv(
        &out.join("features.csv"),
        &FEATURES_HEADER,
        &features_rows(&processed),
    )?;
    write_csv(
        &out.join("fatigue.csv"),
        &FATIGUE_HEADER,
        &fatigue_rows(&processed)?,
    )?;

    // Coactivation needs two muscles; a single-channel run records the
    // skip instead of failing.
    let mut coactivation_warnings = Vec::new();
    let coactivation = if processed.len() >= 2 {
        let cycles = coactivation_cycles(&processed, config, &mut coactivation_warnings)?;
        Some(coactivation_report(&cycles).map_err(lib_runtime)?)
    } else {
        coactivation_warnings.push("single channel: coactivation skipped".to_string());
        None
    };
    let coactivation_csv = coactivation
        .as_ref()
        .map(coactivation_rows)
        .unwrap_or_default();
    write_csv(
        &out.join("coactivation.csv"),
        &COACTIVATION_HEADER,
        &coactivation_csv,
    )?;

    let stat_reports = stats_rows(&processed, config.stats.alpha);
    write_csv(
        &out.join("stats.csv"),
        &STATS_HEADER,
        &stats_csv_rows(&stat_reports),
    )?;

    // Plots: PSD deciles, spectral trends, and per-feature box and
    // histogram geometry for every channel.
    for p in &processed {
        let tag = sanitize_label(&p.label);
        write_text(
            &plots_dir.join(format!("psd_deciles_{tag}.svg")),
            &psd_decile_plot(p, config)?,
        )?;
        write_text(&plots_dir.join(format!("trend_{tag}.svg")), &trend_plot(p)?)?;
        let mut boxes = Vec::new();
        let mut hists = Vec::new();
        for (name, values) in feature_columns(&p.features) {
            boxes.push((
                name.to_string(),
                quartile_summary(&values).map_err(lib_runtime)?,
            ));
            hists.push((
                name.to_string(),
                histogram(&values, config.stats.histogram_bins).map_err(lib_runtime)?,
            ));
        }
        write_text(
            &plots_dir.join(format!("box_{tag}.svg")),
            &plot::box_chart(&format!("Feature quartiles: {}", p.label), &boxes),
        )?;
        write_text(
            &plots_dir.join(format!("hist_{tag}.svg")),
            &plot::histogram_chart(&format!("Feature histograms: {}", p.label), &hists),
        )?;
    }

    // Structured summary mirroring every table, keyed deterministically.
    let mut channel_reports = serde_json::Map::new();
    for p in &processed {
        let mut features = serde_json::Map::new();
        for ((name, values), (_, report)) in feature_columns(&p.features).iter().zip(
            stat_reports
                .iter()
                .filter(|(c, _, _)| c == &p.label)
                .map(|(_, f, r)| (f, r)),
        ) {
            let summary = quartile_summary(values).map_err(lib_runtime)?;
            let hist = histogram(values, config.stats.histogram_bins).map_err(lib_runtime)?;
            let trend = if *name == "zc" {
                None
            } else {
                Some(fatigue_trend(&p.features.start_times_s, values).map_err(lib_runtime)?)
            };
            features.insert(
                (*name).to_string(),
                json!({
                    "five_number": summary,
                    "histogram": hist,
                    "trend": trend,
                    "normality": routing_json(report),
                }),
            );
        }
        let mvc = mvc_reference(config, &p.label)
            .map(|reference| -> Result<serde_json::Value, CliError> {
                let normalized = normalize_to_mvc(&p.envelope, &reference).map_err(lib_runtime)?;
                let peak = normalized
                    .envelope
                    .samples
                    .iter()
                    .copied()
                    .fold(f64::NEG_INFINITY, f64::max);
                Ok(json!({
                    "reference_mv": reference.mvc_value_mv,
                    "peak_percent": peak,
                    "over_mvc": normalized.over_mvc,
                    "warnings": normalized.warnings,
                }))
            })
            .transpose()?;
        channel_reports.insert(
            p.label.clone(),
            json!({
                "epochs": p.features.rows(),
                "warnings": p.warnings,
                "features": serde_json::Value::Object(features),
                "mvc": mvc,
            }),
        );
    }

    let summary = json!({
        "source": input.file_name().map(|s| s.to_string_lossy().to_string()),
        "fs_hz": recording.fs,
        "samples": recording.channels[0].len(),
        "duration_s": recording.channels[0].duration_s(),
        "channels": recording.channels.iter().map(|c| c.label.clone()).collect::<Vec<_>>(),
        "ingest_warnings": recording.warnings,
        "settings": {
            "band_hz": [config.filter.low_hz, config.filter.high_hz],
            "order": config.filter.order,
            "zero_phase": config.filter.zero_phase,
            "notch": {
                "enabled": config.notch.enabled,
                "center_hz": config.notch.center_hz,
                "harmonics": config.notch.harmonics,
                "q": config.notch.q,
            },
            "epoch": { "window_ms": config.epoch.window_ms, "overlap": config.epoch.overlap },
            "smoothing": { "kind": config.smoothing.kind, "window_ms": config.smoothing.window_ms },
            "spectral_window": config.features.spectral_window,
            "zc_threshold_mv": config.features.zc_threshold_mv,
            "alpha": config.stats.alpha,
            "histogram_bins": config.stats.histogram_bins,
            "coactivation_points": config.coactivation.points,
        },
        "epoch_layout": {
            "window_samples": processed[0].series.window_samples,
            "step_samples": processed[0].series.step_samples,
        },
        "channel_reports": serde_json::Value::Object(channel_reports),
        "coactivation": coactivation,
        "coactivation_warnings": coactivation_warnings,
    });
    let text = serde_json::to_string_pretty(&summary)
        .map_err(|e| runtime(format!("cannot encode summary: {e}")))?;
    write_text(&out.join("summary.json"), &format!("{text}\n"))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;
    use std::sync::atomic::{AtomicUsize, Ordering};

    static COUNTER: AtomicUsize = AtomicUsize::new(0);

    fn temp_dir(tag: &str) -> PathBuf {
        let id = COUNTER.fetch_add(1, Ordering::Relaxed);
        let dir = std::env::temp_dir().join(format!("semg-run-{tag}-{}-{id}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }

    fn write_synth_fixture(dir: &Path) -> PathBuf {
        let mut config = PipelineConfig::default();
        config.synth.duration_s = 4.0;
        synth_cmd(&config, dir).unwrap();
        dir.join("synth.csv")
    }

    fn two_channel_fixture(dir: &Path) -> PathBuf {
        // Second channel: scaled copy with a different seed.
        let mut config = PipelineConfig::default();
        config.synth.duration_s = 4.0;
        let spec = semg::synth::SynthSpec {
            fs: config.synth.fs,
            duration_s: config.synth.duration_s,
            amplitude_mv: 1.0,
            shape: semg::synth::SpectralShape::Band {
                low_hz: 40.0,
                high_hz: 200.0,
            },
            seed: 11,
        };
        let a = semg::synth::synth_band_noise(&spec).unwrap();
        let b =
            semg::synth::synth_band_noise(&semg::synth::SynthSpec { seed: 12, ..spec }).unwrap();
        let mut rows = Vec::new();
        for i in 0..a.len() {
            rows.push(vec![
                time_cell(i, a.fs),
                fmt_float(a.samples[i]),
                fmt_float(0.5 * b.samples[i]),
            ]);
        }
        let path = dir.join("pair.csv");
        write_csv(&path, &["t", "biceps", "triceps"], &rows).unwrap();
        path
    }

    #[test]
    fn pipeline_writes_every_artifact() {
        let dir = temp_dir("pipeline");
        let input = two_channel_fixture(&dir);
        let out = dir.join("out");
        pipeline_cmd(
            &input,
            &IngestOptions::default(),
            &PipelineConfig::default(),
            &out,
        )
        .unwrap();
        for name in [
            "features.csv",
            "fatigue.csv",
            "coactivation.csv",
            "stats.csv",
            "summary.json",
        ] {
            assert!(out.join(name).is_file(), "missing {name}");
        }
        for name in [
            "psd_deciles_biceps.svg",
            "trend_biceps.svg",
            "box_biceps.svg",
            "hist_biceps.svg",
            "psd_deciles_triceps.svg",
        ] {
            assert!(out.join("plots").join(name).is_file(), "missing {name}");
        }
        let summary: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap())
                .unwrap();
        assert_eq!(summary["channels"], json!(["biceps", "triceps"]));
        assert_eq!(summary["epoch_layout"]["window_samples"], json!(1000));
        // 4 s at 500 ms / 50% -> 15 epochs.
        assert_eq!(summary["channel_reports"]["biceps"]["epochs"], json!(15));
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn single_channel_pipeline_skips_coactivation() {
        let dir = temp_dir("single");
        let input = write_synth_fixture(&dir);
        let out = dir.join("out");
        pipeline_cmd(
            &input,
            &IngestOptions::default(),
            &PipelineConfig::default(),
            &out,
        )
        .unwrap();
        let coactivation = std::fs::read_to_string(out.join("coactivation.csv")).unwrap();
        assert_eq!(coactivation.lines().count(), 1, "header only");
        let summary: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap())
                .unwrap();
        assert!(summary["coactivation"].is_null());
        assert_eq!(
            summary["coactivation_warnings"][0],
            json!("single channel: coactivation skipped")
        );
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn coactivation_cmd_requires_two_channels() {
        let dir = temp_dir("coact");
        let input = write_synth_fixture(&dir);
        let err = coactivation_cmd(
            &input,
            &IngestOptions::default(),
            &PipelineConfig::default(),
            &dir,
        )
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("at least 2 channels"));
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn identical_envelopes_split_coactivation_evenly() {
        let dir = temp_dir("even");
        let mut config = PipelineConfig::default();
        config.synth.duration_s = 2.0;
        config.synth.kind = SynthKind::BandNoise;
        synth_cmd(&config, &dir).unwrap();
        // Duplicate the single synth channel under two labels.
        let text = std::fs::read_to_string(dir.join("synth.csv")).unwrap();
        let mut rows = Vec::new();
        for line in text.lines().skip(1) {
            let mut parts = line.split(',');
            let t = parts.next().unwrap().to_string();
            let v = parts.next().unwrap().to_string();
            rows.push(vec![t, v.clone(), v]);
        }
        let input = dir.join("twin.csv");
        write_csv(&input, &["t", "left", "right"], &rows).unwrap();
        let out = dir.join("out");
        coactivation_cmd(
            &input,
            &IngestOptions::default(),
            &PipelineConfig::default(),
            &out,
        )
        .unwrap();
        let body = std::fs::read_to_string(out.join("coactivation.csv")).unwrap();
        let cis: Vec<f64> = body
            .lines()
            .skip(1)
            .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
            .collect();
        assert_eq!(cis.len(), 2);
        assert!((cis[0] - 0.5).abs() < 1e-12 && (cis[1] - 0.5).abs() < 1e-12);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn synth_fatigue_writes_centroid_sidecar() {
        let dir = temp_dir("synth");
        let mut config = PipelineConfig::default();
        config.synth.duration_s = 2.0;
        synth_cmd(&config, &dir).unwrap();
        let sidecar = std::fs::read_to_string(dir.join("synth_centroid.csv")).unwrap();
        assert!(sidecar.starts_with("t_s,centroid_hz"));
        assert!(sidecar.lines().count() > 2);
        let main = std::fs::read_to_string(dir.join("synth.csv")).unwrap();
        assert_eq!(main.lines().count(), 1 + 4000);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn stats_cmd_emits_rows_for_every_feature() {
        let dir = temp_dir("stats");
        let input = write_synth_fixture(&dir);
        let out = dir.join("out");
        stats_cmd(
            &input,
            &IngestOptions::default(),
            &PipelineConfig::default(),
            &out,
        )
        .unwrap();
        let body = std::fs::read_to_string(out.join("stats.csv")).unwrap();
        let mut lines = body.lines();
        assert_eq!(lines.next().unwrap(), STATS_HEADER.join(","));
        // 15 epochs -> n = 15 -> Shapiro-Wilk primary + KS fallback = 2
        // rows for each of the 5 feature columns.
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), 2 * 5);
        assert!(rows.iter().any(|r| r.contains("shapiro-wilk")));
        assert!(rows.iter().any(|r| r.contains("kolmogorov-smirnov")));
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn preprocess_cmd_writes_signal_and_envelope_tables() {
        let dir = temp_dir("preprocess");
        let input = write_synth_fixture(&dir);
        let out = dir.join("out");
        preprocess_cmd(
            &input,
            &IngestOptions::default(),
            &PipelineConfig::default(),
            &out,
        )
        .unwrap();
        let filtered = std::fs::read_to_string(out.join("preprocessed.csv")).unwrap();
        let envelopes = std::fs::read_to_string(out.join("envelopes.csv")).unwrap();
        assert_eq!(filtered.lines().count(), 1 + 8000);
        assert_eq!(envelopes.lines().count(), 1 + 8000);
        assert!(filtered.starts_with("t,emg"));
        // Envelope values are nonnegative.
        let v: f64 = envelopes
            .lines()
            .nth(4000)
            .unwrap()
            .split(',')
            .nth(1)
            .unwrap()
            .parse()
            .unwrap();
        assert!(v >= 0.0);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
