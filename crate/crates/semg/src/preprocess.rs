//! Offset removal, band-pass and notch filtering, rectification, and
//! envelope smoothing.
//!
//! Filters are designed as cascades of second-order sections (SOS), which
//! stay numerically well-behaved at the 8-pole order the default band-pass
//! reaches. The band-pass comes from the analog Butterworth prototype via
//! the low-pass→band-pass transform and the bilinear transform with
//! frequency prewarping, so the digital response hits −3 dB exactly at the
//! design edges. Notches use the standard biquad with zeros pinned on the
//! unit circle.

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::signal::{ChannelSignal, Envelope, EnvelopeKind};

/// One second-order section; `a` is monic (`a[0] == 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sos {
    pub b: [f64; 3],
    pub a: [f64; 3],
}

impl Sos {
    /// Magnitudes of this section's two poles.
    pub fn pole_magnitudes(&self) -> [f64; 2] {
        let (a1, a2) = (self.a[1], self.a[2]);
        let disc = a1 * a1 - 4.0 * a2;
        if disc < 0.0 {
            // Conjugate pair: |z|^2 = a2.
            let m = a2.max(0.0).sqrt();
            [m, m]
        } else {
            let r = disc.sqrt();
            [((-a1 + r) / 2.0).abs(), ((-a1 - r) / 2.0).abs()]
        }
    }

    /// Complex response at normalized angular frequency w (rad/sample).
    fn response(&self, w: f64) -> Complex64 {
        let z1 = Complex64::from_polar(1.0, -w);
        let z2 = z1 * z1;
        let num = Complex64::new(self.b[0], 0.0) + z1 * self.b[1] + z2 * self.b[2];
        let den = Complex64::new(1.0, 0.0) + z1 * self.a[1] + z2 * self.a[2];
        num / den
    }

    /// DC gain (response at z = 1).
    fn dc_gain(&self) -> f64 {
        (self.b[0] + self.b[1] + self.b[2]) / (1.0 + self.a[1] + self.a[2])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FilterKind {
    BandPass { low_hz: f64, high_hz: f64 },
    Notch { center_hz: f64, q: f64 },
}

/// A designed digital filter: kind, design order, sample rate, and the SOS
/// cascade realizing it.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterSpec {
    pub kind: FilterKind,
    pub order: usize,
    pub fs: f64,
    pub sections: Vec<Sos>,
}

impl FilterSpec {
    /// Number of poles in the cascade.
    pub fn total_order(&self) -> usize {
        2 * self.sections.len()
    }

    /// Magnitude response at a frequency in Hz.
    pub fn magnitude_at(&self, f_hz: f64) -> f64 {
        let w = 2.0 * std::f64::consts::PI * f_hz / self.fs;
        self.sections
            .iter()
            .map(|s| s.response(w))
            .product::<Complex64>()
            .norm()
    }

    /// Pole magnitudes of every section, for stability checks.
    pub fn pole_magnitudes(&self) -> Vec<f64> {
        self.sections
            .iter()
            .flat_map(|s| s.pole_magnitudes())
            .collect()
    }

    fn assert_stable(&self) -> Result<()> {
        if self.pole_magnitudes().iter().all(|&m| m < 1.0) {
            Ok(())
        } else {
            // A correctly designed Butterworth/notch never trips this; it
            // guards against degenerate band edges slipping through.
            Err(Error::BadEpochPlan {
                detail: "unstable filter design".to_string(),
            })
        }
    }
}

/// Subtracts the channel mean. Idempotent up to rounding.
pub fn remove_offset(signal: &ChannelSignal) -> ChannelSignal {
    let mean = signal.samples.iter().sum::<f64>() / signal.len() as f64;
    signal.with_samples(signal.samples.iter().map(|v| v - mean).collect())
}

/// Full-wave rectification: elementwise absolute value.
pub fn rectify(signal: &ChannelSignal) -> ChannelSignal {
    signal.with_samples(signal.samples.iter().map(|v| v.abs()).collect())
}

/// Designs a Butterworth band-pass of the given (even) prototype order.
///
/// The returned cascade has `order` sections (2·order poles). Gain is
/// distributed evenly across sections; each section carries one zero at
/// z = 1 and one at z = −1.
pub fn design_butterworth_bandpass(
    order: usize,
    low_hz: f64,
    high_hz: f64,
    fs: f64,
) -> Result<FilterSpec> {
    if !(fs > 0.0) || !fs.is_finite() {
        return Err(Error::BadSamplingRate { fs });
    }
    if order == 0 || !order.is_multiple_of(2) {
        return Err(Error::BadFilterOrder { order });
    }
    let nyquist = fs / 2.0;
    if !(low_hz > 0.0 && low_hz < high_hz && high_hz < nyquist) {
        return Err(Error::BadBand {
            low: low_hz,
            high: high_hz,
            nyquist,
        });
    }

    // Prewarped analog edges (rad/s) so the bilinear map lands the digital
    // −3 dB points exactly on the requested frequencies.
    let c = 2.0 * fs;
    let w1 = c * (std::f64::consts::PI * low_hz / fs).tan();
    let w2 = c * (std::f64::consts::PI * high_hz / fs).tan();
    let w0_sq = w1 * w2;
    let bw = w2 - w1;

    // Low-pass prototype poles on the unit circle, upper half only; each
    // upper pole expands to two conjugate-pair sections after the
    // band-pass transform.
    let n = order;
    let mut analog_poles: Vec<Complex64> = Vec::with_capacity(2 * n);
    for k in 0..n / 2 {
        let theta = std::f64::consts::PI * (2 * k + n + 1) as f64 / (2 * n) as f64;
        let p = Complex64::from_polar(1.0, theta); // Im(p) > 0 for k < n/2
                                                   // s^2 − bw·p·s + w0^2 = 0
        let bp = p * bw;
        let disc = (bp * bp - 4.0 * w0_sq).sqrt();
        analog_poles.push((bp + disc) / 2.0);
        analog_poles.push((bp - disc) / 2.0);
    }

    // Bilinear transform of each analog pole; conjugates map to conjugates
    // so one digital pole per section suffices.
    let digital_poles: Vec<Complex64> = analog_poles
        .iter()
        .map(|&s| (Complex64::new(c, 0.0) + s) / (Complex64::new(c, 0.0) - s))
        .collect();

    // Overall digital gain: analog gain bw^n times the bilinear factor
    // c^n / Π(c − s) over all 2n poles. The product below covers the upper
    // poles; conjugates contribute the conjugate factor, so the full
    // product is |·|².
    let mut half_prod = Complex64::new(1.0, 0.0);
    for &s in &analog_poles {
        half_prod *= Complex64::new(c, 0.0) - s;
    }
    let k_digital = bw.powi(n as i32) * c.powi(n as i32) / half_prod.norm_sqr();
    let section_gain = k_digital.powf(1.0 / n as f64);

    let sections: Vec<Sos> = digital_poles
        .iter()
        .map(|&z| Sos {
            b: [section_gain, 0.0, -section_gain], // zeros at z = ±1
            a: [1.0, -2.0 * z.re, z.norm_sqr()],
        })
        .collect();

    let spec = FilterSpec {
        kind: FilterKind::BandPass { low_hz, high_hz },
        order,
        fs,
        sections,
    };
    spec.assert_stable()?;
    Ok(spec)
}

/// Designs a single-biquad notch at `center_hz` with quality factor `q`.
/// Zeros sit exactly on the unit circle, so the center frequency is
/// nulled completely.
pub fn design_notch(center_hz: f64, q: f64, fs: f64) -> Result<FilterSpec> {
    if !(fs > 0.0) || !fs.is_finite() {
        return Err(Error::BadSamplingRate { fs });
    }
    let nyquist = fs / 2.0;
    if !(center_hz > 0.0 && center_hz < nyquist) {
        return Err(Error::BadNotchCenter {
            f0: center_hz,
            nyquist,
        });
    }
    if !(q > 0.0) {
        return Err(Error::BadQualityFactor { q });
    }
    let w = 2.0 * std::f64::consts::PI * center_hz / fs;
    let alpha = w.sin() / (2.0 * q);
    let cw = w.cos();
    let a0 = 1.0 + alpha;
    let spec = FilterSpec {
        kind: FilterKind::Notch { center_hz, q },
        order: 2,
        fs,
        sections: vec![Sos {
            b: [1.0 / a0, -2.0 * cw / a0, 1.0 / a0],
            a: [1.0, -2.0 * cw / a0, (1.0 - alpha) / a0],
        }],
    };
    spec.assert_stable()?;
    Ok(spec)
}

/// Steady-state unit-step internal state for one section (direct form II
/// transposed), used to suppress startup transients.
fn unit_step_state(s: &Sos) -> [f64; 2] {
    let k = s.dc_gain();
    [k - s.b[0], s.b[2] - s.a[2] * k]
}

/// Runs the cascade once, forward, with optional per-section initial state.
fn sos_filter(sections: &[Sos], x: &[f64], init: Option<&[[f64; 2]]>) -> Vec<f64> {
    let mut y = x.to_vec();
    for (j, s) in sections.iter().enumerate() {
        let [mut z1, mut z2] = init.map_or([0.0, 0.0], |zi| zi[j]);
        for v in y.iter_mut() {
            let xn = *v;
            let yn = s.b[0] * xn + z1;
            z1 = s.b[1] * xn - s.a[1] * yn + z2;
            z2 = s.b[2] * xn - s.a[2] * yn;
            *v = yn;
        }
    }
    y
}

/// Initial states for every section scaled to an input that starts at x0,
/// propagating each section's DC gain forward through the cascade.
fn scaled_states(sections: &[Sos], x0: f64) -> Vec<[f64; 2]> {
    let mut states = Vec::with_capacity(sections.len());
    let mut level = x0;
    for s in sections {
        let zi = unit_step_state(s);
        states.push([zi[0] * level, zi[1] * level]);
        level *= s.dc_gain();
    }
    states
}

/// Applies a designed filter to a channel.
///
/// With `zero_phase`, the cascade runs forward then backward over the
/// signal extended at both ends by odd reflection (3× the total filter
/// order), which cancels group delay and squares the magnitude response.
/// The signal must be longer than the padding.
pub fn apply_filter(
    spec: &FilterSpec,
    signal: &ChannelSignal,
    zero_phase: bool,
) -> Result<ChannelSignal> {
    spec.assert_stable()?;
    if !zero_phase {
        return Ok(signal.with_samples(sos_filter(&spec.sections, &signal.samples, None)));
    }

    let pad = 3 * spec.total_order();
    let n = signal.len();
    if n <= pad {
        return Err(Error::SignalTooShort {
            len: n,
            needed: pad,
        });
    }
    let x = &signal.samples;
    let mut ext = Vec::with_capacity(n + 2 * pad);
    for i in (1..=pad).rev() {
        ext.push(2.0 * x[0] - x[i]);
    }
    ext.extend_from_slice(x);
    for i in (1..=pad).rev() {
        ext.push(2.0 * x[n - 1] - x[n - 1 - i]);
    }

    let fwd = sos_filter(
        &spec.sections,
        &ext,
        Some(&scaled_states(&spec.sections, ext[0])),
    );
    let mut rev: Vec<f64> = fwd.into_iter().rev().collect();
    rev = sos_filter(
        &spec.sections,
        &rev,
        Some(&scaled_states(&spec.sections, rev[0])),
    );
    rev.reverse();
    Ok(signal.with_samples(rev[pad..pad + n].to_vec()))
}

/// Result of power-line notching: the filtered signal plus which harmonic
/// centers were applied and which were skipped (at or above Nyquist).
#[derive(Debug, Clone, PartialEq)]
pub struct NotchOutcome {
    pub signal: ChannelSignal,
    pub applied_hz: Vec<f64>,
    pub skipped_hz: Vec<f64>,
    pub warnings: Vec<String>,
}

/// Notches the power-line fundamental and its harmonics in cascade.
/// Harmonics at or above Nyquist are skipped with a warning rather than
/// rejected; a fundamental at or above Nyquist is an error.
pub fn notch_powerline(
    signal: &ChannelSignal,
    f0_hz: f64,
    harmonics: usize,
    q: f64,
) -> Result<NotchOutcome> {
    let nyquist = signal.fs / 2.0;
    if !(f0_hz > 0.0 && f0_hz < nyquist) {
        return Err(Error::BadNotchCenter { f0: f0_hz, nyquist });
    }
    let mut out = signal.clone();
    let mut applied_hz = Vec::new();
    let mut skipped_hz = Vec::new();
    let mut warnings = Vec::new();
    for k in 1..=harmonics.max(1) {
        let f = f0_hz * k as f64;
        if f >= nyquist {
            warnings.push(format!(
                "notch at {f} Hz skipped: at or above Nyquist ({nyquist} Hz)"
            ));
            skipped_hz.push(f);
            continue;
        }
        let spec = design_notch(f, q, signal.fs)?;
        out = apply_filter(&spec, &out, false)?;
        applied_hz.push(f);
    }
    Ok(NotchOutcome {
        signal: out,
        applied_hz,
        skipped_hz,
        warnings,
    })
}

fn check_window(window: usize, len: usize) -> Result<()> {
    if window == 0 || window > len {
        return Err(Error::BadWindow { window, len });
    }
    Ok(())
}

/// Causal moving-average envelope over a rectified signal.
///
/// Startup rule: the first N−1 outputs average the partial prefix, so the
/// envelope keeps the signal's length (the coactivation integral needs
/// equal-length envelopes).
pub fn moving_average_envelope(signal: &ChannelSignal, window: usize) -> Result<Envelope> {
    check_window(window, signal.len())?;
    if let Some(index) = signal.samples.iter().position(|&v| v < 0.0) {
        return Err(Error::NegativeSample { index });
    }
    let samples = if window == 1 {
        signal.samples.clone()
    } else {
        sliding_mean(&signal.samples, window)
    };
    Ok(Envelope {
        samples,
        fs: signal.fs,
        kind: EnvelopeKind::MovingAverage,
    })
}

/// Causal sliding-window RMS envelope; input need not be rectified.
/// Same startup rule as the moving average.
pub fn rms_envelope(signal: &ChannelSignal, window: usize) -> Result<Envelope> {
    check_window(window, signal.len())?;
    let squares: Vec<f64> = signal.samples.iter().map(|v| v * v).collect();
    let samples = if window == 1 {
        squares.iter().map(|v| v.sqrt()).collect()
    } else {
        sliding_mean(&squares, window)
            .iter()
            .map(|v| v.sqrt())
            .collect()
    };
    Ok(Envelope {
        samples,
        fs: signal.fs,
        kind: EnvelopeKind::Rms,
    })
}

fn sliding_mean(x: &[f64], window: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(x.len());
    let mut sum = 0.0;
    for (i, &v) in x.iter().enumerate() {
        sum += v;
        if i >= window {
            sum -= x[i - window];
        }
        let count = (i + 1).min(window);
        // Running sums of nonnegative input stay nonnegative up to
        // rounding; clamp shields the envelope invariant.
        out.push((sum / count as f64).max(0.0));
    }
    out
}
