//! Power spectral density estimation: single-segment periodograms and
//! Welch averaging.
//!
//! Normalization follows the density convention: density[k] =
//! |X[k]|² / (fs · ∑w²), one-sided with interior bins doubled, so that
//! ∑ density·df equals the mean square of the signal as seen through the
//! window. Segment layout for Welch reuses the epoching rule (floor count,
//! tail discarded).

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;
use crate::signal::{ChannelSignal, Epoch, PowerSpectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Window {
    Rectangular,
    Hann,
}

impl std::fmt::Display for Window {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Window::Rectangular => write!(f, "rectangular"),
            Window::Hann => write!(f, "hann"),
        }
    }
}

impl Window {
    /// Window values. Hann uses the periodic form 0.5·(1 − cos(2πi/N)),
    /// the right convention for averaged spectral estimates.
    fn values(&self, n: usize) -> Vec<f64> {
        match self {
            Window::Rectangular => vec![1.0; n],
            Window::Hann => (0..n)
                .map(|i| 0.5 * (1.0 - (2.0 * std::f64::consts::PI * i as f64 / n as f64).cos()))
                .collect(),
        }
    }
}

/// One-sided periodogram of a sample slice.
///
/// Odd lengths are transformed at length N+1 (one zero appended after
/// windowing) so the grid always ends exactly at fs/2; this leaves the
/// integrated power unchanged.
pub fn periodogram(samples: &[f64], fs: f64, window: Window) -> Result<PowerSpectrum> {
    periodogram_padded(samples, fs, window, samples.len())
}

/// Periodogram on an `nfft`-point grid (`nfft ≥ len`). Zero-padding
/// refines the frequency grid without changing ∑ density·df.
pub fn periodogram_padded(
    samples: &[f64],
    fs: f64,
    window: Window,
    nfft: usize,
) -> Result<PowerSpectrum> {
    if samples.len() < 2 {
        return Err(Error::NotEnoughPoints {
            needed: 2,
            got: samples.len(),
        });
    }
    if !(fs > 0.0) || !fs.is_finite() {
        return Err(Error::BadSamplingRate { fs });
    }
    let n = samples.len();
    let nfft = nfft.max(n);
    // Keep the grid's last point exactly at fs/2.
    let nfft = if nfft % 2 == 1 { nfft + 1 } else { nfft };

    let w = window.values(n);
    let window_power: f64 = w.iter().map(|v| v * v).sum();

    let mut buf: Vec<Complex64> = samples
        .iter()
        .zip(&w)
        .map(|(&x, &wv)| Complex64::new(x * wv, 0.0))
        .collect();
    buf.resize(nfft, Complex64::new(0.0, 0.0));
    fft::forward(&mut buf);

    let bins = nfft / 2 + 1;
    let df = fs / nfft as f64;
    let scale = 1.0 / (fs * window_power);
    let mut freqs = Vec::with_capacity(bins);
    let mut density = Vec::with_capacity(bins);
    for (k, v) in buf.iter().take(bins).enumerate() {
        let mut p = v.norm_sqr() * scale;
        if k != 0 && k != nfft / 2 {
            p *= 2.0; // fold the negative-frequency half in
        }
        freqs.push(k as f64 * df);
        density.push(p);
    }
    Ok(PowerSpectrum { freqs, density, df })
}

/// Periodogram of an epoch.
pub fn periodogram_epoch(epoch: &Epoch, window: Window) -> Result<PowerSpectrum> {
    periodogram(&epoch.samples, epoch.fs, window)
}

/// Welch estimate: the mean of modified periodograms over overlapping
/// segments laid out like epochs (floor count, tail discarded).
pub fn welch_psd(
    signal: &ChannelSignal,
    seg_len: usize,
    overlap_fraction: f64,
    window: Window,
) -> Result<PowerSpectrum> {
    if seg_len < 2 {
        return Err(Error::NotEnoughPoints {
            needed: 2,
            got: seg_len,
        });
    }
    if signal.len() < seg_len {
        return Err(Error::SignalTooShort {
            len: signal.len(),
            needed: seg_len - 1,
        });
    }
    if !(0.0..1.0).contains(&overlap_fraction) {
        return Err(Error::BadEpochPlan {
            detail: format!("overlap must lie in [0, 1), got {overlap_fraction}"),
        });
    }
    let step = ((seg_len as f64 * (1.0 - overlap_fraction)).round() as usize).max(1);
    let count = (signal.len() - seg_len) / step + 1;

    let mut acc: Option<PowerSpectrum> = None;
    for k in 0..count {
        let start = k * step;
        let ps = periodogram(&signal.samples[start..start + seg_len], signal.fs, window)?;
        match &mut acc {
            None => acc = Some(ps),
            Some(total) => {
                for (d, p) in total.density.iter_mut().zip(&ps.density) {
                    *d += p;
                }
            }
        }
    }
    let mut out = acc.expect("count >= 1 by the length check");
    let inv = 1.0 / count as f64;
    for d in &mut out.density {
        *d *= inv;
    }
    Ok(out)
}
