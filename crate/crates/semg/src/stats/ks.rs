//! Kolmogorov-Smirnov goodness-of-fit tests.
//!
//! The statistic is the exact supremum distance between distribution
//! functions, found by checking every sample point from both sides of the
//! step. Decisions use the asymptotic critical value; an asymptotic
//! p-value from the Kolmogorov series is attached for reporting.

use super::{check_alpha, TestKind, TestResult};
use crate::error::{Error, Result};

/// Reference distribution for `ks_test`: either a second sample or a
/// theoretical CDF.
pub enum KsReference<'a> {
    Sample(&'a [f64]),
    Cdf(&'a dyn Fn(f64) -> f64),
}

/// Empirical CDF of a sorted sample evaluated just below and at `x`.
fn ecdf_sides(sorted: &[f64], x: f64) -> (f64, f64) {
    let n = sorted.len() as f64;
    let below = sorted.partition_point(|v| *v < x) as f64 / n;
    let at = sorted.partition_point(|v| *v <= x) as f64 / n;
    (below, at)
}

fn sorted_copy(sample: &[f64], which: &str) -> Result<Vec<f64>> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    if let Some(index) = sample.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteSample {
            label: which.to_string(),
            index,
        });
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values compare"));
    Ok(sorted)
}

/// Supremum distance between the empirical CDFs of two samples.
fn two_sample_statistic(s1: &[f64], s2: &[f64]) -> f64 {
    let mut d: f64 = 0.0;
    for x in s1.iter().chain(s2.iter()) {
        let (f1_below, f1_at) = ecdf_sides(s1, *x);
        let (f2_below, f2_at) = ecdf_sides(s2, *x);
        d = d.max((f1_below - f2_below).abs());
        d = d.max((f1_at - f2_at).abs());
    }
    d
}

/// Survival function of the Kolmogorov distribution,
/// Q(lambda) = 2 sum_k (-1)^(k-1) exp(-2 k^2 lambda^2).
fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 0.05 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=200u32 {
        let kf = f64::from(k);
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Critical constant c(alpha) = sqrt(-ln(alpha / 2) / 2); c(0.05) = 1.358.
fn critical_constant(alpha: f64) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt()
}

fn build_result(d: f64, effective_n: f64, alpha: f64, mut notes: Vec<String>) -> TestResult {
    let critical = critical_constant(alpha) / effective_n.sqrt();
    let p = kolmogorov_q(d * effective_n.sqrt());
    notes.push(format!("critical value {critical:.4} at alpha {alpha}"));
    TestResult {
        test: TestKind::KolmogorovSmirnov,
        statistic: d,
        p_value: Some(p),
        alpha,
        reject_null: Some(d > critical),
        notes,
    }
}

/// Two-sample test of the null that both samples share one distribution.
pub fn ks_two_sample(sample1: &[f64], sample2: &[f64], alpha: f64) -> Result<TestResult> {
    check_alpha(alpha)?;
    let s1 = sorted_copy(sample1, "sample1")?;
    let s2 = sorted_copy(sample2, "sample2")?;
    let d = two_sample_statistic(&s1, &s2);
    let (n1, n2) = (s1.len() as f64, s2.len() as f64);
    // The two-sample scaling n1 n2 / (n1 + n2) plays the role of n.
    Ok(build_result(d, n1 * n2 / (n1 + n2), alpha, Vec::new()))
}

/// One-sample test against a theoretical CDF (assumed nondecreasing,
/// with values in [0, 1]).
pub fn ks_one_sample<F>(sample: &[f64], cdf: F, alpha: f64) -> Result<TestResult>
where
    F: Fn(f64) -> f64,
{
    check_alpha(alpha)?;
    let sorted = sorted_copy(sample, "sample")?;
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, x) in sorted.iter().enumerate() {
        let f = cdf(*x);
        d = d.max((i + 1) as f64 / n - f);
        d = d.max(f - i as f64 / n);
    }
    Ok(build_result(d, n, alpha, Vec::new()))
}

/// Union interface: compare a sample against either a second sample or a
/// reference CDF.
pub fn ks_test(sample1: &[f64], reference: KsReference<'_>, alpha: f64) -> Result<TestResult> {
    match reference {
        KsReference::Sample(sample2) => ks_two_sample(sample1, sample2, alpha),
        KsReference::Cdf(cdf) => ks_one_sample(sample1, cdf, alpha),
    }
}
