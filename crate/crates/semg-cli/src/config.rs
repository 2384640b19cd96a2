//! Pipeline configuration: a TOML file with one section per processing
//! stage. Every default matches the standard processing chain (4th-order
//! 15-400 Hz band-pass, 60 Hz notch with harmonics, 500 ms epochs at 50%
//! overlap, 250 ms moving-average smoothing), so an empty file runs the
//! reference pipeline unchanged.

use crate::error::{validation, CliError};
use semg::epoch::EpochPlan;
use semg::signal::EnvelopeKind;
use semg::spectral::Window;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, Deserialize, Default, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    #[serde(default)]
    pub filter: FilterConfig,
    #[serde(default)]
    pub notch: NotchConfig,
    #[serde(default)]
    pub epoch: EpochConfig,
    #[serde(default)]
    pub smoothing: SmoothingSection,
    #[serde(default)]
    pub features: FeaturesConfig,
    #[serde(default)]
    pub active_segment: Option<ActiveSegment>,
    #[serde(default)]
    pub stats: StatsConfig,
    #[serde(default)]
    pub coactivation: CoactivationConfig,
    #[serde(default)]
    pub mvc: MvcSection,
    #[serde(default)]
    pub ingest: IngestConfig,
    #[serde(default)]
    pub synth: SynthConfig,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct FilterConfig {
    pub low_hz: f64,
    pub high_hz: f64,
    pub order: usize,
    pub zero_phase: bool,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            low_hz: 15.0,
            high_hz: 400.0,
            order: 4,
            zero_phase: true,
        }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct NotchConfig {
    pub enabled: bool,
    pub center_hz: f64,
    pub harmonics: usize,
    pub q: f64,
}

impl Default for NotchConfig {
    fn default() -> Self {
        Self {
            enabled: true,
            center_hz: 60.0,
            harmonics: 3,
            q: 30.0,
        }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct EpochConfig {
    pub window_ms: f64,
    pub overlap: f64,
}

impl Default for EpochConfig {
    fn default() -> Self {
        Self {
            window_ms: 500.0,
            overlap: 0.5,
        }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct SmoothingSection {
    pub kind: EnvelopeKind,
    pub window_ms: f64,
}

impl Default for SmoothingSection {
    fn default() -> Self {
        Self {
            kind: EnvelopeKind::MovingAverage,
            window_ms: 250.0,
        }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct FeaturesConfig {
    pub zc_threshold_mv: f64,
    pub spectral_window: Window,
}

impl Default for FeaturesConfig {
    fn default() -> Self {
        Self {
            zc_threshold_mv: 0.01,
            spectral_window: Window::Hann,
        }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ActiveSegment {
    pub t0_s: f64,
    pub t1_s: f64,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct StatsConfig {
    pub alpha: f64,
    pub histogram_bins: usize,
}

impl Default for StatsConfig {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            histogram_bins: 10,
        }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct CoactivationConfig {
    pub points: usize,
}

impl Default for CoactivationConfig {
    fn default() -> Self {
        Self { points: 101 }
    }
}

/// Per-muscle MVC reference values in millivolts, keyed by channel label.
#[derive(Debug, Clone, Deserialize, Default, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MvcSection {
    #[serde(default)]
    pub values: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
pub enum Units {
    #[value(name = "V")]
    V,
    #[serde(rename = "mV")]
    #[value(name = "mV")]
    MV,
    #[serde(rename = "uV")]
    #[value(name = "uV")]
    UV,
}

impl Units {
    /// Multiplier converting a value in these units to millivolts.
    pub fn to_millivolts(self) -> f64 {
        match self {
            Units::V => 1000.0,
            Units::MV => 1.0,
            Units::UV => 0.001,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Default, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct IngestConfig {
    /// Sampling rate when the file has no time column.
    pub fs: Option<f64>,
    pub units: Option<Units>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SynthKind {
    Fatigue,
    BandNoise,
    Sine,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct SynthConfig {
    pub kind: SynthKind,
    pub fs: f64,
    pub duration_s: f64,
    pub amplitude_mv: f64,
    pub seed: u64,
    /// Fatigue trajectory endpoints.
    pub start_hz: f64,
    pub end_hz: f64,
    pub bandwidth_hz: f64,
    /// Band-noise edges.
    pub low_hz: f64,
    pub high_hz: f64,
    /// Sine frequency.
    pub freq_hz: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            kind: SynthKind::Fatigue,
            fs: 2000.0,
            duration_s: 10.0,
            amplitude_mv: 1.0,
            seed: 20240801,
            start_hz: 120.0,
            end_hz: 80.0,
            bandwidth_hz: 40.0,
            low_hz: 50.0,
            high_hz: 150.0,
            freq_hz: 100.0,
        }
    }
}

impl PipelineConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| validation(format!("cannot read config {}: {e}", path.display())))?;
        let config: PipelineConfig = toml::from_str(&text)
            .map_err(|e| validation(format!("bad config {}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    /// Fail-fast check of every stage's preconditions that can be tested
    /// without seeing the data.
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.filter.low_hz > 0.0 && self.filter.low_hz < self.filter.high_hz) {
            return Err(validation(format!(
                "filter band {} - {} Hz is not an increasing positive pair",
                self.filter.low_hz, self.filter.high_hz
            )));
        }
        if self.filter.order == 0 || !self.filter.order.is_multiple_of(2) {
            return Err(validation(format!(
                "filter order must be an even positive integer, got {}",
                self.filter.order
            )));
        }
        if !(self.notch.center_hz > 0.0) {
            return Err(validation(format!(
                "notch center must be positive, got {}",
                self.notch.center_hz
            )));
        }
        if !(self.notch.q > 0.0) {
            return Err(validation(format!(
                "notch quality factor must be positive, got {}",
                self.notch.q
            )));
        }
        EpochPlan::new(self.epoch.window_ms, self.epoch.overlap)
            .map_err(|e| validation(format!("epoch settings: {e}")))?;
        if !(self.smoothing.window_ms > 0.0) {
            return Err(validation(format!(
                "smoothing window must be positive, got {} ms",
                self.smoothing.window_ms
            )));
        }
        if self.features.zc_threshold_mv < 0.0 {
            return Err(validation(format!(
                "zero-crossing threshold must be nonnegative, got {}",
                self.features.zc_threshold_mv
            )));
        }
        if let Some(seg) = &self.active_segment {
            if !(seg.t0_s >= 0.0 && seg.t0_s < seg.t1_s) {
                return Err(validation(format!(
                    "active segment [{}, {}] s is not an increasing nonnegative pair",
                    seg.t0_s, seg.t1_s
                )));
            }
        }
        if !(self.stats.alpha > 0.0 && self.stats.alpha < 1.0) {
            return Err(validation(format!(
                "alpha must lie in (0, 1), got {}",
                self.stats.alpha
            )));
        }
        if self.stats.histogram_bins == 0 {
            return Err(validation("histogram bins must be at least 1".to_string()));
        }
        if self.coactivation.points < 2 {
            return Err(validation(format!(
                "coactivation grid needs at least 2 points, got {}",
                self.coactivation.points
            )));
        }
        for (muscle, value) in &self.mvc.values {
            if !(*value > 0.0) {
                return Err(validation(format!(
                    "MVC reference for {muscle} must be positive, got {value}"
                )));
            }
        }
        if let Some(fs) = self.ingest.fs {
            if !(fs > 0.0) || !fs.is_finite() {
                return Err(validation(format!("ingest fs must be positive, got {fs}")));
            }
        }
        if !(self.synth.fs > 0.0 && self.synth.duration_s > 0.0) {
            return Err(validation(format!(
                "synth fs {} Hz and duration {} s must both be positive",
                self.synth.fs, self.synth.duration_s
            )));
        }
        Ok(())
    }

    /// Smoothing window in samples at the given rate, at least one sample.
    pub fn smoothing_samples(&self, fs: f64) -> usize {
        ((self.smoothing.window_ms * fs / 1000.0).round() as usize).max(1)
    }
}
