//! Distribution summaries: five-number summary with outlier fences, and
//! fixed-width histograms.

use crate::error::{Error, Result};

/// Minimum, quartiles, maximum, interquartile range, and any points
/// outside the 1.5 IQR fences.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct FiveNumberSummary {
    pub q0: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub q4: f64,
    pub iqr: f64,
    pub outliers: Vec<f64>,
}

/// Quantile by linear interpolation between closest order statistics
/// (position 1 + (n - 1) p, the common spreadsheet/statistics default).
fn interpolated_quantile(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let pos = (n - 1) as f64 * p;
    let lo = pos.floor() as usize;
    let frac = pos - lo as f64;
    if lo + 1 < n {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    } else {
        sorted[n - 1]
    }
}

/// Five-number summary of a sample with 1.5 IQR outlier fences.
pub fn quartile_summary(sample: &[f64]) -> Result<FiveNumberSummary> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    if let Some(index) = sample.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteSample {
            label: "sample".to_string(),
            index,
        });
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values compare"));

    let q1 = interpolated_quantile(&sorted, 0.25);
    let q2 = interpolated_quantile(&sorted, 0.50);
    let q3 = interpolated_quantile(&sorted, 0.75);
    let iqr = q3 - q1;
    let lo_fence = q1 - 1.5 * iqr;
    let hi_fence = q3 + 1.5 * iqr;
    let outliers = sorted
        .iter()
        .copied()
        .filter(|v| *v < lo_fence || *v > hi_fence)
        .collect();

    Ok(FiveNumberSummary {
        q0: sorted[0],
        q1,
        q2,
        q3,
        q4: sorted[sorted.len() - 1],
        iqr,
        outliers,
    })
}

/// Uniform-width histogram over [min, max].
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct HistogramSummary {
    /// Bin edges, one more than the number of bins.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
    pub total: usize,
}

/// Histogram of a sample with `bins` uniform bins spanning [min, max].
///
/// Every bin is half-open on the right except the last, which includes
/// the maximum, so the counts always sum to n. A constant sample gets a
/// unit-width span centered on the value.
pub fn histogram(sample: &[f64], bins: usize) -> Result<HistogramSummary> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    if bins == 0 {
        return Err(Error::BadWindow {
            window: 0,
            len: sample.len(),
        });
    }
    if let Some(index) = sample.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteSample {
            label: "sample".to_string(),
            index,
        });
    }

    let min = sample.iter().copied().fold(f64::INFINITY, f64::min);
    let max = sample.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (lo, hi) = if max > min {
        (min, max)
    } else {
        (min - 0.5, max + 0.5)
    };
    let width = (hi - lo) / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|i| lo + i as f64 * width).collect();

    let mut counts = vec![0usize; bins];
    for &v in sample {
        let idx = (((v - lo) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }

    Ok(HistogramSummary {
        edges,
        counts,
        total: sample.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn odd_length_median_is_middle_value() {
        let s = quartile_summary(&[5.0, 1.0, 3.0, 2.0, 4.0]).unwrap();
        assert_eq!(s.q2, 3.0);
        assert_eq!(s.q0, 1.0);
        assert_eq!(s.q4, 5.0);
        assert_eq!(s.q1, 2.0);
        assert_eq!(s.q3, 4.0);
        assert!(s.outliers.is_empty());
    }

    #[test]
    fn interpolated_quartiles_worked_example() {
        // Positions for n = 4: q1 at 1.75, q2 at 2.5, q3 at 3.25 (1-based).
        let s = quartile_summary(&[1.0, 2.0, 3.0, 100.0]).unwrap();
        assert_abs_diff_eq!(s.q1, 1.75, epsilon = 1e-12);
        assert_abs_diff_eq!(s.q2, 2.5, epsilon = 1e-12);
        assert_abs_diff_eq!(s.q3, 27.25, epsilon = 1e-12);
        assert_abs_diff_eq!(s.iqr, 25.5, epsilon = 1e-12);
        // Upper fence 27.25 + 1.5 * 25.5 = 65.5, so 100 is flagged.
        assert_eq!(s.outliers, vec![100.0]);
    }

    #[test]
    fn constant_sample_collapses() {
        let s = quartile_summary(&[7.0; 9]).unwrap();
        assert_eq!((s.q0, s.q1, s.q2, s.q3, s.q4), (7.0, 7.0, 7.0, 7.0, 7.0));
        assert_eq!(s.iqr, 0.0);
        assert!(s.outliers.is_empty());
    }

    #[test]
    fn quartiles_are_ordered_on_random_samples() {
        let mut rng = crate::synth::SplitMix64::new(31);
        for _ in 0..100 {
            let n = 1 + (rng.next_u64() % 40) as usize;
            let data: Vec<f64> = (0..n).map(|_| rng.next_gaussian() * 10.0).collect();
            let s = quartile_summary(&data).unwrap();
            assert!(s.q0 <= s.q1 && s.q1 <= s.q2 && s.q2 <= s.q3 && s.q3 <= s.q4);
        }
    }

    #[test]
    fn histogram_two_bins_splits_evenly() {
        let h = histogram(&[0.0, 1.0, 2.0, 3.0], 2).unwrap();
        assert_eq!(h.counts, vec![2, 2]);
        assert_eq!(h.edges, vec![0.0, 1.5, 3.0]);
        assert_eq!(h.total, 4);
    }

    #[test]
    fn histogram_last_bin_includes_maximum() {
        let h = histogram(&[0.0, 1.0], 4).unwrap();
        assert_eq!(h.counts.iter().sum::<usize>(), 2);
        assert_eq!(h.counts[3], 1);
    }

    #[test]
    fn histogram_of_constant_sample_has_one_loaded_bin() {
        let h = histogram(&[4.2; 12], 5).unwrap();
        assert_eq!(h.counts.iter().sum::<usize>(), 12);
        assert_eq!(h.counts.iter().filter(|c| **c > 0).count(), 1);
        assert!(h.edges[0] < 4.2 && 4.2 < h.edges[5]);
    }

    #[test]
    fn histogram_mass_is_conserved_on_random_samples() {
        let mut rng = crate::synth::SplitMix64::new(32);
        for _ in 0..50 {
            let n = 1 + (rng.next_u64() % 200) as usize;
            let bins = 1 + (rng.next_u64() % 12) as usize;
            let data: Vec<f64> = (0..n).map(|_| rng.next_gaussian()).collect();
            let h = histogram(&data, bins).unwrap();
            assert_eq!(h.counts.iter().sum::<usize>(), n);
            assert_eq!(h.counts.len(), bins);
            assert_eq!(h.edges.len(), bins + 1);
        }
    }

    #[test]
    fn uniform_mass_spreads_across_bins() {
        let mut rng = crate::synth::SplitMix64::new(33);
        let data: Vec<f64> = (0..10_000).map(|_| rng.next_f64()).collect();
        let h = histogram(&data, 10).unwrap();
        for &c in &h.counts {
            // Binomial sd is about 30; allow five of those.
            assert!((c as f64 - 1000.0).abs() < 150.0, "count {c}");
        }
    }

    #[test]
    fn invalid_inputs_error() {
        assert_eq!(quartile_summary(&[]), Err(Error::EmptySample));
        assert_eq!(histogram(&[], 3), Err(Error::EmptySample));
        assert!(histogram(&[1.0], 0).is_err());
        assert!(matches!(
            quartile_summary(&[f64::NAN]),
            Err(Error::NonFiniteSample { .. })
        ));
    }
}
