//! Error type shared across the toolkit.
//!
//! Validation failures (bad construction arguments, preconditions) and
//! runtime computation failures (degenerate data) share one enum; callers
//! that need to distinguish them can match on the variant.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty channel list")]
    EmptyChannelList,

    #[error("channel length mismatch: `{label}` has {actual} samples, expected {expected}")]
    LengthMismatch {
        label: String,
        actual: usize,
        expected: usize,
    },

    #[error("non-finite sample in channel `{label}` at index {index}")]
    NonFiniteSample { label: String, index: usize },

    #[error("sampling rate must be positive, got {fs}")]
    BadSamplingRate { fs: f64 },

    #[error("signal must contain at least one sample")]
    EmptySignal,

    #[error("band edges ({low}, {high}) Hz must satisfy 0 < low < high < {nyquist} (Nyquist)")]
    BadBand { low: f64, high: f64, nyquist: f64 },

    #[error("filter order must be an even positive integer, got {order}")]
    BadFilterOrder { order: usize },

    #[error("notch center {f0} Hz must lie below the Nyquist frequency {nyquist} Hz")]
    BadNotchCenter { f0: f64, nyquist: f64 },

    #[error("quality factor must be positive, got {q}")]
    BadQualityFactor { q: f64 },

    #[error("signal too short: {len} samples, need more than {needed}")]
    SignalTooShort { len: usize, needed: usize },

    #[error("negative sample at index {index}; input must be rectified first")]
    NegativeSample { index: usize },

    #[error("window of {window} samples invalid for signal of {len} samples")]
    BadWindow { window: usize, len: usize },

    #[error("invalid epoch plan: {detail}")]
    BadEpochPlan { detail: String },

    #[error("active segment bounds ({t0} s, {t1} s) invalid for duration {duration} s")]
    BadSegmentBounds { t0: f64, t1: f64, duration: f64 },

    #[error("spectrum has zero total power")]
    ZeroTotalPower,

    #[error("need at least {needed} points, got {got}")]
    NotEnoughPoints { needed: usize, got: usize },

    #[error("all time points identical; trend undefined")]
    IdenticalTimes,

    #[error("empty trial list")]
    EmptyTrialList,

    #[error("trial sampling rates differ: {fs_a} Hz vs {fs_b} Hz")]
    MismatchedTrialRate { fs_a: f64, fs_b: f64 },

    #[error("non-positive MVC: trial `{label}` has smoothed peak {peak} mV")]
    NonPositiveMvc { label: String, peak: f64 },

    #[error("negative envelope value at index {index}")]
    NegativeEnvelopeValue { index: usize },

    #[error("normalized grids differ: {len_a} vs {len_b} points")]
    GridMismatch { len_a: usize, len_b: usize },

    #[error("all envelopes integrate to zero; coactivation undefined")]
    ZeroDenominator,

    #[error("sample size {n} outside supported range [{min}, {max}]")]
    SampleSizeOutOfRange { n: usize, min: usize, max: usize },

    #[error("zero variance")]
    ZeroVariance,

    #[error("empty sample")]
    EmptySample,

    #[error("significance level must lie in (0, 1), got {alpha}")]
    BadAlpha { alpha: f64 },

    #[error("invalid synthesis spec: {detail}")]
    BadSynthSpec { detail: String },
}
