//! Property-based invariants spanning module boundaries.

use proptest::prelude::*;
use semg::coactivation::time_normalize;
use semg::epoch::{segment, EpochPlan};
use semg::features::{arv, rms};
use semg::preprocess::rectify;
use semg::signal::{make_recording, ChannelSignal, Envelope, EnvelopeKind};
use semg::spectral::{periodogram, Window};
use semg::stats::{histogram, ks_two_sample, quartile_summary};
use std::collections::BTreeMap;

fn finite_samples(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0e3..1.0e3f64, 1..max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn recording_rejects_any_non_finite_sample(
        mut samples in finite_samples(64),
        position in 0usize..64,
        bad in prop::sample::select(vec![f64::NAN, f64::INFINITY, f64::NEG_INFINITY]),
    ) {
        let at = position % samples.len();
        samples[at] = bad;
        let channels = vec![("ch1".to_string(), samples)];
        prop_assert!(make_recording(channels, 2000.0, BTreeMap::new()).is_err());
    }

    #[test]
    fn recording_rejects_mismatched_channel_lengths(
        a in finite_samples(64),
        b in finite_samples(64),
    ) {
        prop_assume!(a.len() != b.len());
        let channels = vec![
            ("ch1".to_string(), a),
            ("ch2".to_string(), b),
        ];
        prop_assert!(make_recording(channels, 2000.0, BTreeMap::new()).is_err());
    }

    #[test]
    fn rectification_is_nonnegative_and_idempotent(samples in finite_samples(128)) {
        let signal = ChannelSignal::new("x", samples, 1000.0).unwrap();
        let once = rectify(&signal);
        prop_assert!(once.samples.iter().all(|v| *v >= 0.0));
        let twice = rectify(&once);
        prop_assert_eq!(&once.samples, &twice.samples);
    }

    #[test]
    fn amplitude_features_scale_homogeneously(
        samples in finite_samples(128),
        scale in 0.125f64..8.0,
    ) {
        let scaled: Vec<f64> = samples.iter().map(|v| v * scale).collect();
        prop_assert!((rms(&scaled) - scale * rms(&samples)).abs() <= 1e-9 * (1.0 + rms(&samples)));
        prop_assert!((arv(&scaled) - scale * arv(&samples)).abs() <= 1e-9 * (1.0 + arv(&samples)));
    }

    #[test]
    fn epoch_layout_is_exact(
        len in 64usize..4000,
        window_ms in 20.0f64..200.0,
        overlap in 0.0f64..0.9,
    ) {
        let fs = 1000.0;
        let plan = EpochPlan::new(window_ms, overlap).unwrap();
        let window = plan.window_samples(fs).unwrap();
        let step = plan.step_samples(fs).unwrap();
        prop_assume!(len >= window);
        let signal = ChannelSignal::new("x", vec![0.25; len], fs).unwrap();
        let series = segment(&signal, &plan).unwrap();
        prop_assert_eq!(series.epochs.len(), (len - window) / step + 1);
        for (i, epoch) in series.epochs.iter().enumerate() {
            prop_assert_eq!(epoch.samples.len(), window);
            prop_assert_eq!(epoch.start_index, i * step);
        }
    }

    #[test]
    fn ks_statistic_is_bounded_and_symmetric(
        a in finite_samples(32),
        b in finite_samples(32),
    ) {
        let d_ab = ks_two_sample(&a, &b, 0.05).unwrap().statistic;
        let d_ba = ks_two_sample(&b, &a, 0.05).unwrap().statistic;
        prop_assert!((0.0..=1.0).contains(&d_ab));
        prop_assert_eq!(d_ab, d_ba);
    }

    #[test]
    fn quartiles_are_ordered_and_fence_the_outliers(samples in finite_samples(96)) {
        let s = quartile_summary(&samples).unwrap();
        prop_assert!(s.q0 <= s.q1 && s.q1 <= s.q2 && s.q2 <= s.q3 && s.q3 <= s.q4);
        let lo = s.q1 - 1.5 * s.iqr;
        let hi = s.q3 + 1.5 * s.iqr;
        for v in &s.outliers {
            prop_assert!(*v < lo || *v > hi);
        }
        let flagged = samples.iter().filter(|v| **v < lo || **v > hi).count();
        prop_assert_eq!(flagged, s.outliers.len());
    }

    #[test]
    fn histogram_conserves_mass(samples in finite_samples(96), bins in 1usize..16) {
        let h = histogram(&samples, bins).unwrap();
        prop_assert_eq!(h.counts.iter().sum::<usize>(), samples.len());
    }

    #[test]
    fn cycle_normalization_pins_the_endpoints(
        samples in prop::collection::vec(0.0f64..10.0, 2..200),
        points in 2usize..150,
    ) {
        let envelope = Envelope {
            samples: samples.clone(),
            fs: 1000.0,
            kind: EnvelopeKind::MovingAverage,
        };
        let cycle = time_normalize(&envelope, points).unwrap();
        prop_assert_eq!(cycle.values.len(), points);
        prop_assert_eq!(cycle.values[0], samples[0]);
        prop_assert_eq!(cycle.values[points - 1], samples[samples.len() - 1]);
    }

    #[test]
    fn rectangular_periodogram_preserves_mean_square(
        samples in prop::collection::vec(-10.0f64..10.0, 2..256),
    ) {
        prop_assume!(samples.len() % 2 == 0);
        let fs = 1000.0;
        let spectrum = periodogram(&samples, fs, Window::Rectangular).unwrap();
        let mean_square = samples.iter().map(|v| v * v).sum::<f64>() / samples.len() as f64;
        let total = spectrum.total_power();
        prop_assert!(
            (total - mean_square).abs() <= 1e-9 * (1.0 + mean_square),
            "total power {} vs mean square {}", total, mean_square
        );
    }
}
