//! Surface EMG processing toolkit.
//!
//! Covers the batch path from raw multi-channel recordings to reportable
//! quantities: band-pass and powerline conditioning, rectified envelopes,
//! overlapping epochs, Welch spectra, amplitude and frequency features
//! with fatigue trend fits, MVC normalization, cycle-normalized
//! coactivation indices, normality testing with sample-size routing, and
//! a deterministic synthesizer that provides ground-truth signals for
//! validation.
//!
//! Amplitudes are millivolts throughout; callers converting from volts or
//! microvolts should scale at ingest. Sampling rates are in hertz.
//!
//! ```
//! use semg::preprocess::{apply_filter, design_butterworth_bandpass};
//! use semg::synth::{synth_band_noise, SpectralShape, SynthSpec};
//!
//! let spec = SynthSpec {
//!     fs: 2000.0,
//!     duration_s: 2.0,
//!     amplitude_mv: 0.5,
//!     shape: SpectralShape::Band { low_hz: 20.0, high_hz: 350.0 },
//!     seed: 7,
//! };
//! let raw = synth_band_noise(&spec).unwrap();
//! let filter = design_butterworth_bandpass(4, 15.0, 400.0, 2000.0).unwrap();
//! let clean = apply_filter(&filter, &raw, true).unwrap();
//! assert_eq!(clean.len(), raw.len());
//! ```
// `!(x > 0.0)` is the deliberate precondition form: unlike `x <= 0.0` it
// also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coactivation;
pub mod epoch;
pub mod error;
pub mod features;
mod fft;
pub mod normalization;
pub mod preprocess;
pub mod signal;
pub mod spectral;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
pub use signal::{ChannelSignal, Envelope, EnvelopeKind, Epoch, PowerSpectrum, Recording};
