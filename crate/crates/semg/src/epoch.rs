//! Fixed-length windowing with overlap.
//!
//! Surface EMG is treated as stationary over ~500 ms, so analysis runs on
//! windows of that length, half-overlapped by default. Trailing samples
//! that do not fill a window are discarded rather than zero-padded.

use crate::error::{Error, Result};
use crate::signal::{ChannelSignal, Epoch};

/// Windowing parameters. Sample counts are derived against a concrete
/// sampling rate at segmentation time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochPlan {
    pub window_ms: f64,
    pub overlap_fraction: f64,
}

impl Default for EpochPlan {
    fn default() -> Self {
        Self {
            window_ms: 500.0,
            overlap_fraction: 0.5,
        }
    }
}

impl EpochPlan {
    pub fn new(window_ms: f64, overlap_fraction: f64) -> Result<Self> {
        if !(window_ms > 0.0) || !window_ms.is_finite() {
            return Err(Error::BadEpochPlan {
                detail: format!("window must be positive, got {window_ms} ms"),
            });
        }
        if !(0.0..1.0).contains(&overlap_fraction) {
            return Err(Error::BadEpochPlan {
                detail: format!("overlap must lie in [0, 1), got {overlap_fraction}"),
            });
        }
        Ok(Self {
            window_ms,
            overlap_fraction,
        })
    }

    /// Window length in samples: round(window_ms · fs / 1000).
    pub fn window_samples(&self, fs: f64) -> Result<usize> {
        let w = (self.window_ms * fs / 1000.0).round() as usize;
        if w < 2 {
            return Err(Error::BadEpochPlan {
                detail: format!(
                    "window of {} ms at {} Hz is under 2 samples",
                    self.window_ms, fs
                ),
            });
        }
        Ok(w)
    }

    /// Hop between epoch starts: round(window · (1 − overlap)).
    pub fn step_samples(&self, fs: f64) -> Result<usize> {
        let w = self.window_samples(fs)?;
        let step = (w as f64 * (1.0 - self.overlap_fraction)).round() as usize;
        if step == 0 {
            return Err(Error::BadEpochPlan {
                detail: format!(
                    "overlap {} leaves no forward step for a {w}-sample window",
                    self.overlap_fraction
                ),
            });
        }
        Ok(step)
    }
}

/// The epochs of one channel plus the layout that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct EpochSeries {
    pub epochs: Vec<Epoch>,
    pub window_samples: usize,
    pub step_samples: usize,
    pub fs: f64,
}

/// Cuts a channel into epochs. Epoch k covers [k·step, k·step + W);
/// count = floor((L − W)/step) + 1.
pub fn segment(signal: &ChannelSignal, plan: &EpochPlan) -> Result<EpochSeries> {
    let w = plan.window_samples(signal.fs)?;
    let step = plan.step_samples(signal.fs)?;
    let len = signal.len();
    if len < w {
        return Err(Error::SignalTooShort { len, needed: w - 1 });
    }
    let count = (len - w) / step + 1;
    let epochs = (0..count)
        .map(|k| {
            let start = k * step;
            Epoch {
                start_index: start,
                samples: signal.samples[start..start + w].to_vec(),
                fs: signal.fs,
            }
        })
        .collect();
    Ok(EpochSeries {
        epochs,
        window_samples: w,
        step_samples: step,
        fs: signal.fs,
    })
}

/// Extracts the active interval [t0, t1) in seconds, rounding bounds to the
/// nearest sample.
pub fn select_active_segment(
    signal: &ChannelSignal,
    t0_s: f64,
    t1_s: f64,
) -> Result<ChannelSignal> {
    let duration = signal.duration_s();
    if !(t0_s >= 0.0 && t0_s < t1_s && t1_s <= duration) {
        return Err(Error::BadSegmentBounds {
            t0: t0_s,
            t1: t1_s,
            duration,
        });
    }
    let lo = (t0_s * signal.fs).round() as usize;
    let hi = ((t1_s * signal.fs).round() as usize).min(signal.len());
    if lo >= hi {
        return Err(Error::BadSegmentBounds {
            t0: t0_s,
            t1: t1_s,
            duration,
        });
    }
    Ok(signal.with_samples(signal.samples[lo..hi].to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chan(n: usize, fs: f64) -> ChannelSignal {
        ChannelSignal::new("test", (0..n).map(|i| i as f64).collect(), fs).unwrap()
    }

    #[test]
    fn ten_seconds_at_defaults_gives_39_epochs() {
        let series = segment(&chan(10_000, 1000.0), &EpochPlan::default()).unwrap();
        assert_eq!(series.epochs.len(), 39);
        assert_eq!(series.window_samples, 500);
        assert_eq!(series.step_samples, 250);
        for (k, e) in series.epochs.iter().enumerate() {
            assert_eq!(e.start_index, k * 250);
            assert_eq!(e.len(), 500);
        }
    }

    #[test]
    fn exactly_one_window_fits() {
        let series = segment(&chan(500, 1000.0), &EpochPlan::default()).unwrap();
        assert_eq!(series.epochs.len(), 1);
    }

    #[test]
    fn under_one_window_is_an_error() {
        assert!(matches!(
            segment(&chan(499, 1000.0), &EpochPlan::default()),
            Err(Error::SignalTooShort { .. })
        ));
    }

    #[test]
    fn consecutive_epochs_share_window_minus_step() {
        let series = segment(&chan(3000, 1000.0), &EpochPlan::default()).unwrap();
        let shared = series.window_samples - series.step_samples;
        assert_eq!(shared, 250);
        for pair in series.epochs.windows(2) {
            let tail = &pair[0].samples[series.step_samples..];
            let head = &pair[1].samples[..shared];
            assert_eq!(tail, head);
        }
    }

    #[test]
    fn epochs_reconstruct_analyzed_prefix() {
        let sig = chan(1234, 1000.0);
        let series = segment(&sig, &EpochPlan::default()).unwrap();
        let mut rebuilt = series.epochs[0].samples.clone();
        for e in &series.epochs[1..] {
            rebuilt.extend_from_slice(&e.samples[series.window_samples - series.step_samples..]);
        }
        let analyzed = series.window_samples + (series.epochs.len() - 1) * series.step_samples;
        assert_eq!(rebuilt, sig.samples[..analyzed]);
    }

    #[test]
    fn plan_validation() {
        assert!(EpochPlan::new(0.0, 0.5).is_err());
        assert!(EpochPlan::new(500.0, 1.0).is_err());
        assert!(EpochPlan::new(500.0, -0.1).is_err());
        assert!(EpochPlan::new(500.0, 0.0).is_ok());
    }

    #[test]
    fn zero_overlap_step_equals_window() {
        let plan = EpochPlan::new(500.0, 0.0).unwrap();
        let series = segment(&chan(2000, 1000.0), &plan).unwrap();
        assert_eq!(series.step_samples, 500);
        assert_eq!(series.epochs.len(), 4);
    }

    #[test]
    fn active_segment_examples() {
        let sig = chan(10_000, 1000.0);
        let cut = select_active_segment(&sig, 2.0, 4.0).unwrap();
        assert_eq!(cut.len(), 2000);
        assert_eq!(cut.samples[0], 2000.0);

        let whole = select_active_segment(&sig, 0.0, 10.0).unwrap();
        assert_eq!(whole.samples, sig.samples);

        assert!(matches!(
            select_active_segment(&sig, 4.0, 2.0),
            Err(Error::BadSegmentBounds { .. })
        ));
        assert!(select_active_segment(&sig, 0.0, 10.5).is_err());
        assert!(select_active_segment(&sig, -0.5, 2.0).is_err());
    }
}
