//! D'Agostino's D test for departure from normality in larger samples.
//!
//! D is the ratio of Downton's linear estimate of the standard deviation
//! to the sample standard deviation. Under normality the standardized
//! statistic Y concentrates near zero; values outside a two-sided
//! acceptance interval signal non-normal shape. The interval comes from an
//! embedded simulation-derived critical table, so no p-value is produced;
//! the decision is table-based, as is conventional for this test.

use super::{check_alpha, TestKind, TestResult};
use crate::error::{Error, Result};

pub const MIN_N: usize = 10;

/// Asymptotic mean of D under normality: 1 / (2 sqrt(pi)).
const D_MEAN: f64 = 0.282_094_791_773_878_1;
/// Asymptotic scale of sqrt(n) (D - mean).
const D_SCALE: f64 = 0.029_985_98;

/// Two-sided acceptance bounds for Y, simulated under the null
/// (300k replicates per row, standard normal draws).
/// Rows: (n, lower 1%, lower 5%, upper 5%, upper 1%).
const CRITICAL_Y: &[(f64, f64, f64, f64, f64)] = &[
    (10.0, -4.6932, -3.2537, 0.3008, 0.3875),
    (15.0, -4.5437, -3.1234, 0.4955, 0.5853),
    (20.0, -4.4465, -3.0576, 0.6336, 0.7290),
    (30.0, -4.1877, -2.8970, 0.8297, 0.9481),
    (50.0, -3.9015, -2.7439, 1.0559, 1.2311),
    (75.0, -3.7118, -2.6266, 1.2116, 1.4421),
    (100.0, -3.5902, -2.5521, 1.3127, 1.5842),
    (150.0, -3.4232, -2.4478, 1.4277, 1.7495),
    (200.0, -3.3015, -2.3926, 1.5003, 1.8595),
    (300.0, -3.1886, -2.3164, 1.5789, 1.9815),
    (500.0, -3.0376, -2.2260, 1.6643, 2.1118),
    (700.0, -2.9509, -2.1886, 1.7215, 2.1925),
    (1000.0, -2.9002, -2.1584, 1.7518, 2.2522),
    (2000.0, -2.8037, -2.1037, 1.8174, 2.3461),
    (5000.0, -2.7162, -2.0524, 1.8631, 2.4219),
    (10000.0, -2.6301, -2.0123, 1.9006, 2.4741),
];

/// D statistic of a sample (order statistics against the identity ramp).
///
/// Uses the mean-centered form of the numerator so that location shifts
/// cancel exactly and pure scalings by powers of two reproduce bit-for-bit.
pub(crate) fn d_statistic(sample: &[f64]) -> Result<f64> {
    let n = sample.len();
    let nf = n as f64;
    let mut sorted = sample.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values compare"));

    let mean = sorted.iter().sum::<f64>() / nf;
    let var = sorted.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / nf;
    if var <= 0.0 {
        return Err(Error::ZeroVariance);
    }

    let mid = (nf + 1.0) / 2.0;
    let num: f64 = sorted
        .iter()
        .enumerate()
        .map(|(i, x)| ((i + 1) as f64 - mid) * x)
        .sum();
    Ok(num / (nf * nf * var.sqrt()))
}

/// Interpolated acceptance interval (y_lo, y_hi) for the given n and a
/// supported significance level.
fn acceptance_interval(n: usize, one_percent: bool) -> (f64, f64) {
    let pick = |row: &(f64, f64, f64, f64, f64)| {
        if one_percent {
            (row.1, row.4)
        } else {
            (row.2, row.3)
        }
    };

    let nf = n as f64;
    let first = CRITICAL_Y.first().unwrap();
    let last = CRITICAL_Y.last().unwrap();
    if nf <= first.0 {
        return pick(first);
    }
    if nf >= last.0 {
        return pick(last);
    }
    let hi = CRITICAL_Y.iter().position(|row| row.0 >= nf).unwrap();
    let (ra, rb) = (&CRITICAL_Y[hi - 1], &CRITICAL_Y[hi]);
    if rb.0 == nf {
        return pick(rb);
    }
    // Bounds vary smoothly in log n; interpolate there.
    let t = (nf.ln() - ra.0.ln()) / (rb.0.ln() - ra.0.ln());
    let (alo, ahi) = pick(ra);
    let (blo, bhi) = pick(rb);
    (alo + t * (blo - alo), ahi + t * (bhi - ahi))
}

/// D test of the null hypothesis that `sample` is normal.
///
/// Needs n >= 10. Critical values exist for alpha 0.05 and 0.01; any other
/// level snaps to the nearer of the two, recorded in the notes. There is
/// no p-value: `reject_null` is set from the acceptance interval directly.
pub fn dagostino_d(sample: &[f64], alpha: f64) -> Result<TestResult> {
    check_alpha(alpha)?;
    let n = sample.len();
    if n < MIN_N {
        return Err(Error::SampleSizeOutOfRange {
            n,
            min: MIN_N,
            max: usize::MAX,
        });
    }
    if let Some(index) = sample.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteSample {
            label: "sample".to_string(),
            index,
        });
    }

    let mut notes = Vec::new();
    let one_percent = if (alpha - 0.05).abs() < 1e-12 {
        false
    } else if (alpha - 0.01).abs() < 1e-12 {
        true
    } else {
        let snapped = (alpha - 0.05).abs() <= (alpha - 0.01).abs();
        let level = if snapped { 0.05 } else { 0.01 };
        notes.push(format!(
            "critical values tabulated for alpha 0.05 and 0.01 only; \
             {alpha} evaluated at {level}"
        ));
        !snapped
    };

    let d = d_statistic(sample)?;
    let y = (n as f64).sqrt() * (d - D_MEAN) / D_SCALE;
    let (y_lo, y_hi) = acceptance_interval(n, one_percent);
    let reject = y < y_lo || y > y_hi;
    notes.push(format!(
        "Y = {y:.4}, acceptance interval [{y_lo:.4}, {y_hi:.4}]"
    ));

    Ok(TestResult {
        test: TestKind::DagostinoD,
        statistic: d,
        p_value: None,
        alpha,
        reject_null: Some(reject),
        notes,
    })
}
