//! Per-epoch fatigue features and their temporal trend.
//!
//! Time domain: RMS, average rectified value, thresholded zero crossings.
//! Frequency domain: mean frequency (spectral centroid) and median
//! frequency (half-power point) of the epoch periodogram. Myoelectric
//! fatigue shows up as all of these drifting: amplitude up, spectrum down.

use crate::epoch::EpochSeries;
use crate::error::{Error, Result};
use crate::signal::{Epoch, PowerSpectrum};
use crate::spectral::{periodogram, Window};

/// Root mean square of an epoch.
pub fn rms(samples: &[f64]) -> f64 {
    (samples.iter().map(|v| v * v).sum::<f64>() / samples.len() as f64).sqrt()
}

/// Average rectified value: mean of |x|.
pub fn arv(samples: &[f64]) -> f64 {
    samples.iter().map(|v| v.abs()).sum::<f64>() / samples.len() as f64
}

/// Counts sign changes between consecutive samples whose jump clears the
/// threshold. A sample equal to zero counts as positive, which makes the
/// sign rule total. With threshold 0 every sign change counts.
pub fn zero_crossings(samples: &[f64], threshold: f64) -> u32 {
    let positive = |v: f64| v >= 0.0;
    samples
        .windows(2)
        .filter(|p| positive(p[0]) != positive(p[1]) && (p[0] - p[1]).abs() >= threshold)
        .count() as u32
}

/// Spectral centroid: ∑ f·P·df / ∑ P·df.
pub fn mean_frequency(spectrum: &PowerSpectrum) -> Result<f64> {
    let total: f64 = spectrum.density.iter().sum();
    if total <= 0.0 {
        return Err(Error::ZeroTotalPower);
    }
    let weighted: f64 = spectrum
        .freqs
        .iter()
        .zip(&spectrum.density)
        .map(|(f, p)| f * p)
        .sum();
    Ok(weighted / total)
}

/// Half-power frequency: the smallest f where cumulative power reaches
/// half the total, linearly interpolated inside the crossing bin and
/// clamped to the grid.
pub fn median_frequency(spectrum: &PowerSpectrum) -> Result<f64> {
    let total: f64 = spectrum.density.iter().sum();
    if total <= 0.0 {
        return Err(Error::ZeroTotalPower);
    }
    let half = total / 2.0;
    let mut cum = 0.0;
    for (k, &p) in spectrum.density.iter().enumerate() {
        let next = cum + p;
        if next >= half {
            let f_hi = spectrum.freqs[k];
            let within = if p > 0.0 { (half - cum) / p } else { 0.0 };
            let f = f_hi - spectrum.df + within * spectrum.df;
            return Ok(f.clamp(spectrum.freqs[0], *spectrum.freqs.last().unwrap()));
        }
        cum = next;
    }
    // Rounding pushed the crossing past the last bin.
    Ok(*spectrum.freqs.last().unwrap())
}

/// Spectral estimation and ZC settings used when building feature tables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureConfig {
    pub window: Window,
    pub zc_threshold_mv: f64,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self {
            window: Window::Hann,
            zc_threshold_mv: 0.01,
        }
    }
}

/// Feature values for every epoch of one channel, column-oriented.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    pub label: String,
    pub start_times_s: Vec<f64>,
    pub rms_mv: Vec<f64>,
    pub arv_mv: Vec<f64>,
    pub zc: Vec<u32>,
    pub mnf_hz: Vec<f64>,
    pub mdf_hz: Vec<f64>,
}

impl FeatureTable {
    pub fn rows(&self) -> usize {
        self.start_times_s.len()
    }
}

/// Computes the full feature table for a segmented channel. Errors from
/// any epoch (zero total power) propagate.
pub fn feature_table(
    label: &str,
    series: &EpochSeries,
    config: &FeatureConfig,
) -> Result<FeatureTable> {
    if series.epochs.is_empty() {
        return Err(Error::NotEnoughPoints { needed: 1, got: 0 });
    }
    let n = series.epochs.len();
    let mut table = FeatureTable {
        label: label.to_string(),
        start_times_s: Vec::with_capacity(n),
        rms_mv: Vec::with_capacity(n),
        arv_mv: Vec::with_capacity(n),
        zc: Vec::with_capacity(n),
        mnf_hz: Vec::with_capacity(n),
        mdf_hz: Vec::with_capacity(n),
    };
    for epoch in &series.epochs {
        let spectrum = epoch_spectrum(epoch, config)?;
        table.start_times_s.push(epoch.start_time_s());
        table.rms_mv.push(rms(&epoch.samples));
        table.arv_mv.push(arv(&epoch.samples));
        table
            .zc
            .push(zero_crossings(&epoch.samples, config.zc_threshold_mv));
        table.mnf_hz.push(mean_frequency(&spectrum)?);
        table.mdf_hz.push(median_frequency(&spectrum)?);
    }
    Ok(table)
}

/// Periodogram of one epoch under the feature settings.
pub fn epoch_spectrum(epoch: &Epoch, config: &FeatureConfig) -> Result<PowerSpectrum> {
    periodogram(&epoch.samples, epoch.fs, config.window)
}

/// Least-squares line through (time, value) points.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct TrendResult {
    /// Feature units per second.
    pub slope: f64,
    pub intercept: f64,
    /// Pearson correlation; 0 when `degenerate`.
    pub r: f64,
    /// Set when the values have zero variance, where r is undefined.
    pub degenerate: bool,
}

/// Ordinary least-squares trend of a feature column over time.
pub fn fatigue_trend(times_s: &[f64], values: &[f64]) -> Result<TrendResult> {
    if times_s.len() != values.len() {
        return Err(Error::LengthMismatch {
            label: "trend values".to_string(),
            actual: values.len(),
            expected: times_s.len(),
        });
    }
    if times_s.len() < 2 {
        return Err(Error::NotEnoughPoints {
            needed: 2,
            got: times_s.len(),
        });
    }
    let n = times_s.len() as f64;
    let mean_t = times_s.iter().sum::<f64>() / n;
    let mean_v = values.iter().sum::<f64>() / n;
    let mut stt = 0.0;
    let mut svv = 0.0;
    let mut stv = 0.0;
    for (t, v) in times_s.iter().zip(values) {
        let dt = t - mean_t;
        let dv = v - mean_v;
        stt += dt * dt;
        svv += dv * dv;
        stv += dt * dv;
    }
    if stt == 0.0 {
        return Err(Error::IdenticalTimes);
    }
    let slope = stv / stt;
    let intercept = mean_v - slope * mean_t;
    // Identical values leave rounding residue in svv, so test them directly.
    let constant = values.windows(2).all(|w| w[0] == w[1]);
    if constant || svv == 0.0 {
        return Ok(TrendResult {
            slope: 0.0,
            intercept: mean_v,
            r: 0.0,
            degenerate: true,
        });
    }
    Ok(TrendResult {
        slope,
        intercept,
        r: stv / (stt * svv).sqrt(),
        degenerate: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epoch::{segment, EpochPlan};
    use crate::signal::ChannelSignal;
    use approx::assert_relative_eq;

    fn tone(f: f64, a: f64, fs: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| a * (2.0 * std::f64::consts::PI * f * i as f64 / fs).sin())
            .collect()
    }

    #[test]
    fn rms_examples() {
        assert_eq!(rms(&[3.0; 10]), 3.0);
        assert_eq!(rms(&[-3.0; 10]), 3.0);
        assert_eq!(rms(&[1.0, -1.0, 1.0, -1.0]), 1.0);
        assert_relative_eq!(
            rms(&tone(50.0, 2.0, 1000.0, 1000)),
            2.0 / 2f64.sqrt(),
            max_relative = 1e-3
        );
    }

    #[test]
    fn arv_examples() {
        assert_eq!(arv(&[1.0, -1.0, 2.0, -2.0]), 1.5);
        assert_eq!(arv(&[-4.0; 7]), 4.0);
        // Dense sampling keeps the discrete mean of |sin| close to 2/pi.
        let a = 1.3;
        assert_relative_eq!(
            arv(&tone(50.0, a, 20000.0, 20000)),
            2.0 * a / std::f64::consts::PI,
            max_relative = 1e-3
        );
    }

    #[test]
    fn arv_never_exceeds_rms() {
        let mut rng = crate::synth::SplitMix64::new(17);
        for _ in 0..200 {
            let n = 16 + (rng.next_u64() % 200) as usize;
            let x: Vec<f64> = (0..n).map(|_| rng.next_gaussian() * 3.0).collect();
            assert!(arv(&x) <= rms(&x) + 1e-12);
        }
    }

    #[test]
    fn zero_crossing_examples() {
        assert_eq!(zero_crossings(&[1.0, -1.0, 1.0, -1.0], 0.0), 3);
        assert_eq!(zero_crossings(&[5.0; 64], 0.0), 0);
        // Zeros fall on samples 5, 10, ..., 995; the 200th zero of the
        // 100 Hz tone lands exactly one sample past the end.
        let x = tone(100.0, 1.0, 1000.0, 1000);
        assert_eq!(zero_crossings(&x, 0.0), 199);
    }

    #[test]
    fn zero_crossing_threshold_gates_small_jumps() {
        let x = [0.004, -0.004, 0.004, -0.004];
        assert_eq!(zero_crossings(&x, 0.01), 0);
        assert_eq!(zero_crossings(&x, 0.0), 3);
        // zero counts as positive
        assert_eq!(zero_crossings(&[0.0, -1.0, 0.0], 0.0), 2);
    }

    fn flat_spectrum(b_hz: f64, fs: f64, bins: usize) -> PowerSpectrum {
        let df = (fs / 2.0) / (bins - 1) as f64;
        let freqs: Vec<f64> = (0..bins).map(|k| k as f64 * df).collect();
        let density = freqs
            .iter()
            .map(|&f| if f <= b_hz { 1.0 } else { 0.0 })
            .collect();
        PowerSpectrum { freqs, density, df }
    }

    #[test]
    fn centroid_of_flat_band_is_midpoint() {
        let ps = flat_spectrum(200.0, 1000.0, 501);
        let mnf = mean_frequency(&ps).unwrap();
        assert_relative_eq!(mnf, 100.0, max_relative = 0.01);
        let mdf = median_frequency(&ps).unwrap();
        assert!((mdf - 100.0).abs() <= ps.df, "mdf {mdf}");
    }

    #[test]
    fn tone_centroid_and_median_land_on_the_bin() {
        let fs = 1000.0;
        let x = tone(100.0, 1.0, fs, 1000);
        let ps = periodogram(&x, fs, Window::Rectangular).unwrap();
        let mnf = mean_frequency(&ps).unwrap();
        let mdf = median_frequency(&ps).unwrap();
        assert!((mnf - 100.0).abs() <= ps.df, "mnf {mnf}");
        assert!((mdf - 100.0).abs() <= ps.df, "mdf {mdf}");
    }

    #[test]
    fn high_frequency_tail_pulls_mean_above_median() {
        // Mass concentrated low with a long high tail.
        let bins = 251;
        let df = 2.0;
        let freqs: Vec<f64> = (0..bins).map(|k| k as f64 * df).collect();
        let density: Vec<f64> = freqs
            .iter()
            .map(|&f| {
                if (20.0..60.0).contains(&f) {
                    10.0
                } else if f >= 60.0 {
                    0.5
                } else {
                    0.0
                }
            })
            .collect();
        let ps = PowerSpectrum { freqs, density, df };
        let mnf = mean_frequency(&ps).unwrap();
        let mdf = median_frequency(&ps).unwrap();
        assert!(mnf > mdf, "mnf {mnf} mdf {mdf}");
    }

    #[test]
    fn zero_power_is_an_error() {
        let ps = PowerSpectrum {
            freqs: vec![0.0, 1.0, 2.0],
            density: vec![0.0; 3],
            df: 1.0,
        };
        assert_eq!(mean_frequency(&ps).unwrap_err(), Error::ZeroTotalPower);
        assert_eq!(median_frequency(&ps).unwrap_err(), Error::ZeroTotalPower);
    }

    #[test]
    fn feature_table_has_one_row_per_epoch() {
        let spec = crate::synth::SynthSpec {
            fs: 1000.0,
            duration_s: 10.0,
            amplitude_mv: 1.0,
            shape: crate::synth::SpectralShape::Band {
                low_hz: 50.0,
                high_hz: 150.0,
            },
            seed: 3,
        };
        let sig = crate::synth::synth_band_noise(&spec).unwrap();
        let series = segment(&sig, &EpochPlan::default()).unwrap();
        let table = feature_table("band", &series, &FeatureConfig::default()).unwrap();
        assert_eq!(table.rows(), 39);
        for i in 0..table.rows() {
            assert!(table.arv_mv[i] <= table.rms_mv[i] + 1e-12);
            assert!(table.mnf_hz[i] > 0.0 && table.mnf_hz[i] < 500.0);
            assert!(table.mdf_hz[i] > 0.0 && table.mdf_hz[i] < 500.0);
        }
    }

    #[test]
    fn feature_table_on_zero_signal_errors() {
        let sig = ChannelSignal::new("z", vec![0.0; 1000], 1000.0).unwrap();
        let series = segment(&sig, &EpochPlan::default()).unwrap();
        assert_eq!(
            feature_table("z", &series, &FeatureConfig::default()).unwrap_err(),
            Error::ZeroTotalPower
        );
    }

    #[test]
    fn trend_recovers_exact_line() {
        let times: Vec<f64> = (0..20).map(|i| i as f64 * 0.25).collect();
        let values: Vec<f64> = times.iter().map(|t| 2.0 * t + 1.0).collect();
        let tr = fatigue_trend(&times, &values).unwrap();
        assert_relative_eq!(tr.slope, 2.0, max_relative = 1e-12);
        assert_relative_eq!(tr.intercept, 1.0, max_relative = 1e-12);
        assert_relative_eq!(tr.r, 1.0, max_relative = 1e-12);
        assert!(!tr.degenerate);
    }

    #[test]
    fn trend_on_constant_values_is_degenerate_zero() {
        let times: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let tr = fatigue_trend(&times, &[4.2; 10]).unwrap();
        assert_eq!(tr.slope, 0.0);
        assert_eq!(tr.r, 0.0);
        assert!(tr.degenerate);
        assert_relative_eq!(tr.intercept, 4.2, max_relative = 1e-12);
    }

    #[test]
    fn trend_rejects_degenerate_times() {
        assert!(matches!(
            fatigue_trend(&[1.0], &[2.0]),
            Err(Error::NotEnoughPoints { .. })
        ));
        assert_eq!(
            fatigue_trend(&[2.0, 2.0, 2.0], &[1.0, 2.0, 3.0]).unwrap_err(),
            Error::IdenticalTimes
        );
    }

    #[test]
    fn scaling_invariances() {
        let mut rng = crate::synth::SplitMix64::new(23);
        let x: Vec<f64> = (0..256).map(|_| rng.next_gaussian()).collect();
        let c = 2.5;
        let scaled: Vec<f64> = x.iter().map(|v| c * v).collect();
        assert_relative_eq!(rms(&scaled), c * rms(&x), max_relative = 1e-12);
        assert_relative_eq!(arv(&scaled), c * arv(&x), max_relative = 1e-12);
        let th = 0.02;
        assert_eq!(zero_crossings(&scaled, c * th), zero_crossings(&x, th));
    }
}
