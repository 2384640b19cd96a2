//! MVC reference extraction and %MVC rescaling.
//!
//! Amplitude comparisons across subjects or sessions need a common scale;
//! the maximum voluntary contraction supplies it. Each MVC trial is
//! rectified and smoothed, the per-trial envelope peak is taken, and the
//! reference is the mean of those peaks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::preprocess::{moving_average_envelope, rectify, rms_envelope};
use crate::signal::{ChannelSignal, Envelope, EnvelopeKind};

/// Smoothing applied to MVC trials before peak extraction. Recorded in the
/// reference so a session can be reproduced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothingConfig {
    pub kind: EnvelopeKind,
    pub window_samples: usize,
}

/// MVC reference for one muscle: the mean of per-trial smoothed peaks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MvcReference {
    pub muscle: String,
    pub mvc_value_mv: f64,
    pub trial_peaks_mv: Vec<f64>,
    pub smoothing: SmoothingConfig,
    #[serde(default)]
    pub warnings: Vec<String>,
}

/// Expected MVC trial duration range in seconds; trials outside it warn.
const TRIAL_DURATION_RANGE_S: (f64, f64) = (4.0, 6.0);
/// Conventional trial count; other counts warn.
const EXPECTED_TRIALS: usize = 3;

/// Builds an [`MvcReference`] from repeated maximal-effort trials.
///
/// Each trial is rectified, smoothed per `smoothing`, and reduced to its
/// envelope peak. Any nonpositive peak is an error: a flat trial cannot
/// anchor a normalization. Trial counts other than three and durations
/// outside 4-6 s are accepted with warnings.
pub fn mvc_from_trials(
    trials: &[ChannelSignal],
    smoothing: SmoothingConfig,
) -> Result<MvcReference> {
    if trials.is_empty() {
        return Err(Error::EmptyTrialList);
    }
    let fs = trials[0].fs;
    for t in trials {
        if t.fs != fs {
            return Err(Error::MismatchedTrialRate {
                fs_a: fs,
                fs_b: t.fs,
            });
        }
    }
    let mut warnings = Vec::new();
    if trials.len() != EXPECTED_TRIALS {
        warnings.push(format!(
            "{} MVC trials provided; the conventional protocol uses {}",
            trials.len(),
            EXPECTED_TRIALS
        ));
    }
    let mut trial_peaks_mv = Vec::with_capacity(trials.len());
    for t in trials {
        let d = t.duration_s();
        if d < TRIAL_DURATION_RANGE_S.0 || d > TRIAL_DURATION_RANGE_S.1 {
            warnings.push(format!(
                "trial `{}` lasts {d:.2} s, outside the expected {}-{} s",
                t.label, TRIAL_DURATION_RANGE_S.0, TRIAL_DURATION_RANGE_S.1
            ));
        }
        let window = smoothing.window_samples.min(t.len()).max(1);
        if window != smoothing.window_samples {
            warnings.push(format!(
                "smoothing window truncated to {window} samples for trial `{}`",
                t.label
            ));
        }
        let envelope = match smoothing.kind {
            EnvelopeKind::MovingAverage => moving_average_envelope(&rectify(t), window)?,
            EnvelopeKind::Rms => rms_envelope(t, window)?,
        };
        let peak = envelope.samples.iter().fold(0.0f64, |m, &v| m.max(v));
        if peak <= 0.0 {
            return Err(Error::NonPositiveMvc {
                label: t.label.clone(),
                peak,
            });
        }
        trial_peaks_mv.push(peak);
    }
    let mvc_value_mv = trial_peaks_mv.iter().sum::<f64>() / trial_peaks_mv.len() as f64;
    Ok(MvcReference {
        muscle: trials[0].label.clone(),
        mvc_value_mv,
        trial_peaks_mv,
        smoothing,
        warnings,
    })
}

/// A %MVC envelope with its over-MVC flag.
#[derive(Debug, Clone, PartialEq)]
pub struct MvcNormalized {
    /// Samples in %MVC.
    pub envelope: Envelope,
    /// True when any value exceeds 100% (dynamic efforts can exceed the
    /// static reference); values are never clipped.
    pub over_mvc: bool,
    pub warnings: Vec<String>,
}

/// Rescales an envelope to percent of the MVC reference:
/// out = 100 · envelope / mvc_value.
pub fn normalize_to_mvc(envelope: &Envelope, reference: &MvcReference) -> Result<MvcNormalized> {
    if !(reference.mvc_value_mv > 0.0) {
        return Err(Error::NonPositiveMvc {
            label: reference.muscle.clone(),
            peak: reference.mvc_value_mv,
        });
    }
    let mut warnings = Vec::new();
    if envelope.kind != reference.smoothing.kind {
        warnings.push(format!(
            "envelope kind {} differs from the {} smoothing used for the MVC reference",
            envelope.kind, reference.smoothing.kind
        ));
    }
    // Ratio first so a value exactly at the reference maps to exactly 100.
    let mvc = reference.mvc_value_mv;
    let samples: Vec<f64> = envelope.samples.iter().map(|v| v / mvc * 100.0).collect();
    let over_mvc = samples.iter().any(|&v| v > 100.0);
    Ok(MvcNormalized {
        envelope: Envelope {
            samples,
            fs: envelope.fs,
            kind: envelope.kind,
        },
        over_mvc,
        warnings,
    })
}
