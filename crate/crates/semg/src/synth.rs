//! Deterministic synthetic signal generation.
//!
//! These generators exist to provide ground truth for the feature and
//! fatigue-trend code paths: sinusoids with closed-form RMS/ARV, band-limited
//! noise with a known spectral centroid, and a nonstationary sequence whose
//! centroid drifts linearly so trend fitting can be checked against the
//! generator's own trajectory.
//!
//! Randomness comes from SplitMix64, a 64-bit generator with fully defined
//! integer semantics, so a fixed seed reproduces the same sample stream on
//! any platform.

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;
use crate::signal::ChannelSignal;

/// SplitMix64: one 64-bit state word, one output per step.
///
/// Reference outputs (seed 0): 16294208416658607535, 7960286522194355700,
/// 487617019471545679, ...
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
    spare_gaussian: Option<f64>,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self {
            state: seed,
            spare_gaussian: None,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) with 53 significant bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal deviate via Box-Muller; the paired deviate is cached.
    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare_gaussian.take() {
            return z;
        }
        // 1 - u keeps the argument of ln strictly positive.
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare_gaussian = Some(r * theta.sin());
        r * theta.cos()
    }
}

/// Spectral shape of a generated signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralShape {
    /// Stationary noise confined to [low, high] Hz.
    Band { low_hz: f64, high_hz: f64 },
    /// Noise whose band center moves linearly from `start_hz` to `end_hz`
    /// over the full duration, with constant bandwidth.
    CentroidTrajectory {
        start_hz: f64,
        end_hz: f64,
        bandwidth_hz: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub fs: f64,
    pub duration_s: f64,
    /// Target RMS in mV for noise shapes.
    pub amplitude_mv: f64,
    pub shape: SpectralShape,
    pub seed: u64,
}

/// Fatigue-sequence output: the signal plus the analytic centroid
/// trajectory (time s, centroid Hz) sampled at each synthesis block center.
#[derive(Debug, Clone, PartialEq)]
pub struct FatigueOutput {
    pub signal: ChannelSignal,
    pub centroid_hz: Vec<(f64, f64)>,
}

/// Ground-truth centroid slope in Hz/s for a trajectory spec.
pub fn trajectory_slope_hz_per_s(spec: &SynthSpec) -> Option<f64> {
    match spec.shape {
        SpectralShape::CentroidTrajectory {
            start_hz, end_hz, ..
        } => Some((end_hz - start_hz) / spec.duration_s),
        SpectralShape::Band { .. } => None,
    }
}

fn sample_count(fs: f64, duration_s: f64) -> Result<usize> {
    if !(fs > 0.0) || !fs.is_finite() {
        return Err(Error::BadSamplingRate { fs });
    }
    if !(duration_s > 0.0) || !duration_s.is_finite() {
        return Err(Error::BadSynthSpec {
            detail: format!("duration must be positive, got {duration_s} s"),
        });
    }
    let n = (duration_s * fs).round() as usize;
    if n == 0 {
        return Err(Error::BadSynthSpec {
            detail: "duration shorter than one sample".to_string(),
        });
    }
    Ok(n)
}

/// Sampled sinusoid `amplitude · sin(2π f n / fs)`; f = 0 gives all zeros.
pub fn synth_sine(f_hz: f64, amplitude_mv: f64, fs: f64, duration_s: f64) -> Result<ChannelSignal> {
    let n = sample_count(fs, duration_s)?;
    if !(f_hz >= 0.0) || f_hz >= fs / 2.0 {
        return Err(Error::BadSynthSpec {
            detail: format!("sine frequency {f_hz} Hz must lie in [0, fs/2) for fs = {fs} Hz"),
        });
    }
    let w = 2.0 * std::f64::consts::PI * f_hz / fs;
    let samples = (0..n)
        .map(|i| amplitude_mv * (w * i as f64).sin())
        .collect();
    ChannelSignal::new(format!("sine_{f_hz}hz"), samples, fs)
}

fn validate_band(low: f64, high: f64, fs: f64) -> Result<()> {
    let nyquist = fs / 2.0;
    if !(low > 0.0 && low < high && high < nyquist) {
        return Err(Error::BadBand { low, high, nyquist });
    }
    Ok(())
}

/// White Gaussian noise confined to a frequency band by spectral masking.
///
/// The mask keeps FFT bins whose frequency lies in [low, high] on both
/// sides of the spectrum, which makes the realized spectrum exactly
/// symmetric about the band midpoint in expectation. The result is scaled
/// to RMS = `amplitude_mv` by a single multiply, so doubling the amplitude
/// doubles every sample exactly.
pub fn synth_band_noise(spec: &SynthSpec) -> Result<ChannelSignal> {
    let SpectralShape::Band { low_hz, high_hz } = spec.shape else {
        return Err(Error::BadSynthSpec {
            detail: "synth_band_noise requires a band shape".to_string(),
        });
    };
    validate_band(low_hz, high_hz, spec.fs)?;
    let n = sample_count(spec.fs, spec.duration_s)?;
    let mut rng = SplitMix64::new(spec.seed);
    let white: Vec<f64> = (0..n).map(|_| rng.next_gaussian()).collect();
    let shaped = band_shape(&white, spec.fs, low_hz, high_hz)?;
    let scaled = scale_to_rms(shaped, spec.amplitude_mv);
    ChannelSignal::new("band_noise", scaled, spec.fs)
}

/// Brick-wall band selection in the frequency domain.
fn band_shape(x: &[f64], fs: f64, low_hz: f64, high_hz: f64) -> Result<Vec<f64>> {
    let n = x.len();
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft::forward(&mut buf);
    for (k, v) in buf.iter_mut().enumerate() {
        // Two-sided bin frequency, folded to [0, fs/2].
        let k_folded = k.min(n - k);
        let f = k_folded as f64 * fs / n as f64;
        if f < low_hz || f > high_hz {
            *v = Complex64::new(0.0, 0.0);
        }
    }
    fft::inverse(&mut buf);
    let shaped: Vec<f64> = buf.iter().map(|v| v.re).collect();
    if shaped.iter().all(|&v| v == 0.0) {
        // Band too narrow for the FFT grid: no bins survived.
        return Err(Error::BadSynthSpec {
            detail: format!("band ({low_hz}, {high_hz}) Hz selects no FFT bins at this length"),
        });
    }
    Ok(shaped)
}

fn rms_of(x: &[f64]) -> f64 {
    (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt()
}

fn scale_to_rms(mut x: Vec<f64>, target_rms: f64) -> Vec<f64> {
    let r = rms_of(&x);
    let gain = if r > 0.0 { target_rms / r } else { 0.0 };
    for v in &mut x {
        *v *= gain;
    }
    x
}

const BLOCK_S: f64 = 0.25;
const FADE_S: f64 = 0.05;

/// Block-stationary noise whose band center follows a linear trajectory.
///
/// Synthesis uses 250 ms blocks overlapped by a 50 ms equal-power
/// cross-fade (sin/cos ramps, so summed variance stays flat through the
/// joins). Each block is shaped to [c − bw/2, c + bw/2] where c is the
/// trajectory evaluated at the block center.
pub fn synth_fatigue_sequence(spec: &SynthSpec) -> Result<FatigueOutput> {
    let SpectralShape::CentroidTrajectory {
        start_hz,
        end_hz,
        bandwidth_hz,
    } = spec.shape
    else {
        return Err(Error::BadSynthSpec {
            detail: "synth_fatigue_sequence requires a centroid trajectory".to_string(),
        });
    };
    let n = sample_count(spec.fs, spec.duration_s)?;
    let half_bw = bandwidth_hz / 2.0;
    if !(bandwidth_hz > 0.0) {
        return Err(Error::BadSynthSpec {
            detail: format!("bandwidth must be positive, got {bandwidth_hz} Hz"),
        });
    }
    // The trajectory is linear, so checking both endpoints bounds the band
    // over the whole duration.
    for c in [start_hz, end_hz] {
        validate_band(c - half_bw, c + half_bw, spec.fs)?;
    }

    let block = (BLOCK_S * spec.fs).round() as usize;
    let fade = (FADE_S * spec.fs).round() as usize;
    if block < 2 || fade == 0 || fade >= block {
        return Err(Error::BadSynthSpec {
            detail: format!("sampling rate {} Hz too low for block synthesis", spec.fs),
        });
    }
    let stride = block - fade;

    let mut rng = SplitMix64::new(spec.seed);
    let mut out = vec![0.0; n];
    let mut weight = vec![0.0; n];
    let mut centroids = Vec::new();

    let mut start = 0usize;
    loop {
        let center_t = (start + block / 2) as f64 / spec.fs;
        let frac = (center_t / spec.duration_s).clamp(0.0, 1.0);
        let c = start_hz + (end_hz - start_hz) * frac;
        centroids.push((center_t, c));

        let white: Vec<f64> = (0..block).map(|_| rng.next_gaussian()).collect();
        let shaped = scale_to_rms(band_shape(&white, spec.fs, c - half_bw, c + half_bw)?, 1.0);

        for (i, &v) in shaped.iter().enumerate() {
            let idx = start + i;
            if idx >= n {
                break;
            }
            // Equal-power ramps over the fade region at both block ends;
            // the first block starts at full weight.
            let u_in = if start == 0 {
                1.0
            } else {
                ((i as f64 + 0.5) / fade as f64).min(1.0)
            };
            let u_out = ((block - i) as f64 - 0.5) / fade as f64;
            let w_in = (std::f64::consts::FRAC_PI_2 * u_in).sin();
            let w_out = (std::f64::consts::FRAC_PI_2 * u_out.min(1.0)).sin();
            let w = w_in.min(w_out);
            out[idx] += w * v;
            weight[idx] += w * w;
        }

        if start + block >= n {
            break;
        }
        start += stride;
    }

    // Flatten residual power ripple from the cross-fades, then set the RMS.
    for (v, w) in out.iter_mut().zip(&weight) {
        if *w > 0.0 {
            *v /= w.sqrt();
        }
    }
    let scaled = scale_to_rms(out, spec.amplitude_mv);
    Ok(FatigueOutput {
        signal: ChannelSignal::new("fatigue", scaled, spec.fs)?,
        centroid_hz: centroids,
    })
}
