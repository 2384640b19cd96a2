//! Core signal model: validated recordings, channels, epochs, spectra,
//! and envelopes.
//!
//! All types are plain immutable data after construction. Amplitudes are
//! stored in mV throughout; envelopes may carry %MVC after normalization.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Sampling rates below this are accepted with a warning: surface EMG
/// carries energy up to roughly 500 Hz, so anything under 1 kHz risks
/// aliasing the upper band.
pub const RECOMMENDED_MIN_FS_HZ: f64 = 1000.0;

/// One electrode channel: a label (muscle name) and its samples in mV.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSignal {
    pub label: String,
    pub samples: Vec<f64>,
    pub fs: f64,
}

impl ChannelSignal {
    /// Validates length ≥ 1, finite samples, and a positive sampling rate.
    pub fn new(label: impl Into<String>, samples: Vec<f64>, fs: f64) -> Result<Self> {
        let label = label.into();
        if !(fs > 0.0) || !fs.is_finite() {
            return Err(Error::BadSamplingRate { fs });
        }
        if samples.is_empty() {
            return Err(Error::EmptySignal);
        }
        if let Some(index) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSample { label, index });
        }
        Ok(Self { label, samples, fs })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.fs
    }

    /// Same label and rate, different samples. Length may change (used by
    /// segment selection); finiteness is preserved by construction of the
    /// operations in this crate, so this skips re-validation.
    pub(crate) fn with_samples(&self, samples: Vec<f64>) -> Self {
        Self {
            label: self.label.clone(),
            samples,
            fs: self.fs,
        }
    }
}

/// A multi-channel recording with free-form metadata.
///
/// Construction warnings (currently only the low-sampling-rate rule) are
/// kept on the value rather than logged, so batch reports can surface them.
#[derive(Debug, Clone, PartialEq)]
pub struct Recording {
    pub channels: Vec<ChannelSignal>,
    pub fs: f64,
    pub meta: BTreeMap<String, String>,
    pub warnings: Vec<String>,
}

/// Builds a validated [`Recording`] from raw label/sample pairs.
///
/// Errors on an empty channel list, mismatched lengths, non-finite samples,
/// or a non-positive sampling rate. A rate below 1 kHz is accepted but
/// recorded as a warning.
pub fn make_recording(
    channels: Vec<(String, Vec<f64>)>,
    fs: f64,
    meta: BTreeMap<String, String>,
) -> Result<Recording> {
    if channels.is_empty() {
        return Err(Error::EmptyChannelList);
    }
    let expected = channels[0].1.len();
    let mut built = Vec::with_capacity(channels.len());
    for (label, samples) in channels {
        if samples.len() != expected {
            return Err(Error::LengthMismatch {
                label,
                actual: samples.len(),
                expected,
            });
        }
        built.push(ChannelSignal::new(label, samples, fs)?);
    }
    let mut warnings = Vec::new();
    if fs < RECOMMENDED_MIN_FS_HZ {
        warnings.push(format!(
            "sampling rate {fs} Hz is below the recommended {RECOMMENDED_MIN_FS_HZ} Hz; \
             surface EMG content extends to ~500 Hz"
        ));
    }
    Ok(Recording {
        channels: built,
        fs,
        meta,
        warnings,
    })
}

/// A fixed-length analysis window cut from one channel.
///
/// Partial windows are never constructed; `samples.len()` always equals the
/// plan's window length.
#[derive(Debug, Clone, PartialEq)]
pub struct Epoch {
    pub start_index: usize,
    pub samples: Vec<f64>,
    pub fs: f64,
}

impl Epoch {
    pub fn start_time_s(&self) -> f64 {
        self.start_index as f64 / self.fs
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// One-sided power spectral density on a uniform grid from 0 to fs/2.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSpectrum {
    /// Ascending grid, `freqs[0] == 0`, `freqs.last() == fs/2`.
    pub freqs: Vec<f64>,
    /// Nonnegative density in mV²/Hz, same length as `freqs`.
    pub density: Vec<f64>,
    /// Grid spacing in Hz.
    pub df: f64,
}

impl PowerSpectrum {
    /// Rectangle-rule integral of the density: ∑ density·df.
    pub fn total_power(&self) -> f64 {
        self.density.iter().sum::<f64>() * self.df
    }
}

/// Smoothing applied when building an envelope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnvelopeKind {
    MovingAverage,
    Rms,
}

impl std::fmt::Display for EnvelopeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EnvelopeKind::MovingAverage => write!(f, "moving-average"),
            EnvelopeKind::Rms => write!(f, "rms"),
        }
    }
}

/// Smoothed rectified amplitude track. Samples are nonnegative, in mV, or
/// in %MVC after normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub samples: Vec<f64>,
    pub fs: f64,
    pub kind: EnvelopeKind,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chans(spec: &[(&str, usize)]) -> Vec<(String, Vec<f64>)> {
        spec.iter()
            .map(|(l, n)| (l.to_string(), vec![0.5; *n]))
            .collect()
    }

    #[test]
    fn valid_recording_has_no_warnings() {
        let rec = make_recording(
            chans(&[("biceps", 10000), ("triceps", 10000)]),
            1000.0,
            BTreeMap::new(),
        )
        .unwrap();
        assert_eq!(rec.channels.len(), 2);
        assert_eq!(rec.channels[0].len(), 10000);
        assert!(rec.warnings.is_empty());
    }

    #[test]
    fn mismatched_lengths_rejected() {
        let err =
            make_recording(chans(&[("a", 100), ("b", 99)]), 1000.0, BTreeMap::new()).unwrap_err();
        assert!(matches!(err, Error::LengthMismatch { .. }));
    }

    #[test]
    fn low_rate_warns() {
        let rec = make_recording(chans(&[("a", 100)]), 500.0, BTreeMap::new()).unwrap();
        assert_eq!(rec.warnings.len(), 1);
        assert!(rec.warnings[0].contains("500"));
    }

    #[test]
    fn empty_channel_list_rejected() {
        assert_eq!(
            make_recording(Vec::new(), 1000.0, BTreeMap::new()).unwrap_err(),
            Error::EmptyChannelList
        );
    }

    #[test]
    fn non_finite_sample_rejected() {
        let err = make_recording(
            vec![("a".to_string(), vec![0.0, f64::NAN, 1.0])],
            1000.0,
            BTreeMap::new(),
        )
        .unwrap_err();
        assert_eq!(
            err,
            Error::NonFiniteSample {
                label: "a".to_string(),
                index: 1
            }
        );
    }

    #[test]
    fn bad_rate_rejected() {
        assert!(matches!(
            make_recording(chans(&[("a", 10)]), 0.0, BTreeMap::new()),
            Err(Error::BadSamplingRate { .. })
        ));
        assert!(matches!(
            make_recording(chans(&[("a", 10)]), -1.0, BTreeMap::new()),
            Err(Error::BadSamplingRate { .. })
        ));
    }

    #[test]
    fn empty_signal_rejected() {
        assert_eq!(
            ChannelSignal::new("a", vec![], 1000.0).unwrap_err(),
            Error::EmptySignal
        );
    }

    #[test]
    fn epoch_start_time() {
        let e = Epoch {
            start_index: 250,
            samples: vec![0.0; 500],
            fs: 1000.0,
        };
        assert_eq!(e.start_time_s(), 0.25);
    }
}
