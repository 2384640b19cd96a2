//! Frequency-response validation of the band-pass design against an
//! independent closed-form magnitude oracle and a set of frozen
//! reference magnitudes.

use approx::assert_relative_eq;
use semg::preprocess::{apply_filter, design_butterworth_bandpass};
use semg::signal::ChannelSignal;

const FS: f64 = 2000.0;
const LOW: f64 = 15.0;
const HIGH: f64 = 400.0;
const ORDER: usize = 4;

/// Magnitude of the Butterworth band-pass at digital frequency `f`,
/// straight from the analog prototype through the bilinear frequency
/// mapping: |H| = 1 / sqrt(1 + x^(2n)) with x = (W^2 - w0^2) / (bw W).
fn analytic_magnitude(f: f64) -> f64 {
    let c = 2.0 * FS;
    let w1 = c * (std::f64::consts::PI * LOW / FS).tan();
    let w2 = c * (std::f64::consts::PI * HIGH / FS).tan();
    let w0_sq = w1 * w2;
    let bw = w2 - w1;
    let omega = c * (std::f64::consts::PI * f / FS).tan();
    let x = (omega * omega - w0_sq) / (bw * omega);
    1.0 / (1.0 + x.powi(2 * ORDER as i32)).sqrt()
}

/// Reference magnitudes frozen from an independent filter-design
/// implementation for order 4, band 15-400 Hz, fs 2000 Hz. The edge
/// values land near 1/sqrt(2) by construction but are measured output,
/// so they stay verbatim.
#[allow(clippy::approx_constant, clippy::excessive_precision)]
const REFERENCE_PROBES: &[(f64, f64)] = &[
    (1.0, 1.730946379566897e-05),
    (5.0, 1.096961814170946e-02),
    (15.0, 7.071067811864736e-01),
    (30.0, 9.991693494714841e-01),
    (77.45966692414834, 9.999999999999211e-01),
    (100.0, 9.999999996574915e-01),
    (200.0, 9.997472510187723e-01),
    (300.0, 9.786382157080318e-01),
    (400.0, 7.071067811865470e-01),
    (450.0, 4.505632555407256e-01),
    (490.0, 2.856466898489368e-01),
];

#[test]
fn matches_frozen_reference_magnitudes() {
    let spec = design_butterworth_bandpass(ORDER, LOW, HIGH, FS).unwrap();
    for &(f, expected) in REFERENCE_PROBES {
        assert_relative_eq!(spec.magnitude_at(f), expected, max_relative = 1e-6);
    }
}

#[test]
fn matches_analytic_oracle_across_the_spectrum() {
    let spec = design_butterworth_bandpass(ORDER, LOW, HIGH, FS).unwrap();
    let mut f = 0.5;
    while f < 1000.0 {
        assert_relative_eq!(
            spec.magnitude_at(f),
            analytic_magnitude(f),
            max_relative = 1e-8,
            epsilon = 1e-12
        );
        f += 0.5;
    }
}

#[test]
fn oracle_holds_for_other_orders_and_bands() {
    for &(order, low, high, fs) in &[
        (2usize, 20.0, 450.0, 1000.0),
        (6, 10.0, 350.0, 1024.0),
        (8, 30.0, 300.0, 2048.0),
    ] {
        let spec = design_butterworth_bandpass(order, low, high, fs).unwrap();
        let c = 2.0 * fs;
        let w1 = c * (std::f64::consts::PI * low / fs).tan();
        let w2 = c * (std::f64::consts::PI * high / fs).tan();
        for i in 1..100 {
            let f = i as f64 * fs / 200.0;
            let omega = c * (std::f64::consts::PI * f / fs).tan();
            let x = (omega * omega - w1 * w2) / ((w2 - w1) * omega);
            let expected = 1.0 / (1.0 + x.powi(2 * order as i32)).sqrt();
            assert_relative_eq!(
                spec.magnitude_at(f),
                expected,
                max_relative = 1e-8,
                epsilon = 1e-12
            );
        }
    }
}

/// Steady-state amplitude of a filtered tone, from the RMS of the middle
/// half of the output (edges carry the transients).
fn filtered_amplitude(f: f64, zero_phase: bool) -> f64 {
    let n = (4.0 * FS) as usize;
    let w = 2.0 * std::f64::consts::PI * f / FS;
    let x: Vec<f64> = (0..n).map(|i| (w * i as f64).sin()).collect();
    let signal = ChannelSignal::new("tone", x, FS).unwrap();
    let spec = design_butterworth_bandpass(ORDER, LOW, HIGH, FS).unwrap();
    let out = apply_filter(&spec, &signal, zero_phase).unwrap();
    let mid = &out.samples[n / 4..3 * n / 4];
    let ms = mid.iter().map(|v| v * v).sum::<f64>() / mid.len() as f64;
    (2.0 * ms).sqrt()
}

#[test]
fn causal_tone_amplitude_follows_the_response() {
    for &f in &[100.0, 300.0, 450.0] {
        assert_relative_eq!(
            filtered_amplitude(f, false),
            analytic_magnitude(f),
            max_relative = 1e-2
        );
    }
}

#[test]
fn zero_phase_squares_the_magnitude() {
    // Forward plus reverse passes apply |H|^2 with no phase shift.
    for &f in &[300.0, 450.0] {
        let expected = analytic_magnitude(f).powi(2);
        assert_relative_eq!(filtered_amplitude(f, true), expected, max_relative = 1e-2);
    }
}
