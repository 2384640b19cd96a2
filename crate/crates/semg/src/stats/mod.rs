//! Normality tests, goodness-of-fit, distribution summaries, and the
//! sample-size-based routing between them.

mod dagostino;
mod ks;
mod normal;
mod shapiro;
mod summary;

pub use dagostino::dagostino_d;
pub use ks::{ks_one_sample, ks_test, ks_two_sample, KsReference};
pub use shapiro::shapiro_wilk;
pub use summary::{histogram, quartile_summary, FiveNumberSummary, HistogramSummary};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestKind {
    ShapiroWilk,
    DagostinoD,
    KolmogorovSmirnov,
}

impl std::fmt::Display for TestKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TestKind::ShapiroWilk => write!(f, "shapiro-wilk"),
            TestKind::DagostinoD => write!(f, "dagostino-d"),
            TestKind::KolmogorovSmirnov => write!(f, "kolmogorov-smirnov"),
        }
    }
}

/// Outcome of one hypothesis test.
///
/// `reject_null` is present exactly when a p-value or a critical value was
/// applied; the D test carries no p-value (its decision comes from a
/// critical table), so `p_value` is `None` there.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct TestResult {
    pub test: TestKind,
    pub statistic: f64,
    pub p_value: Option<f64>,
    pub alpha: f64,
    pub reject_null: Option<bool>,
    pub notes: Vec<String>,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::BadAlpha { alpha });
    }
    Ok(())
}

/// Which role a test played in a routing report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestRole {
    Primary,
    Fallback,
}

impl std::fmt::Display for TestRole {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TestRole::Primary => write!(f, "primary"),
            TestRole::Fallback => write!(f, "fallback"),
        }
    }
}

/// Routing outcome: which normality test decided and why, plus every
/// result produced along the way.
#[derive(Debug, Clone, PartialEq)]
pub struct RoutingReport {
    pub n: usize,
    pub alpha: f64,
    /// The test whose decision stands, when one could run.
    pub primary: Option<TestKind>,
    pub reason: String,
    pub results: Vec<(TestRole, TestResult)>,
}

/// Upper sample size for Shapiro-Wilk routing.
const SHAPIRO_ROUTE_MAX: usize = 50;
/// Below this, a goodness-of-fit fallback runs alongside the primary test.
const SMALL_SAMPLE_N: usize = 20;

/// Picks and runs the normality test(s) suited to the sample size.
///
/// Shapiro-Wilk for 3 ≤ n ≤ 50, the D test for n > 50. Small samples
/// (n < 20) also get a Kolmogorov-Smirnov check against a normal fitted by
/// moments, reported as a fallback. Never errors: degenerate samples come
/// back with an explanatory reason and no results.
pub fn choose_test(sample: &[f64], alpha: f64) -> RoutingReport {
    let n = sample.len();
    let mut results = Vec::new();
    let mut reason;
    let mut primary = None;

    if n < 3 {
        return RoutingReport {
            n,
            alpha,
            primary,
            reason: format!("{n} value(s): no normality test is informative below n = 3"),
            results,
        };
    }

    if n <= SHAPIRO_ROUTE_MAX {
        reason = format!("n = {n} in [3, {SHAPIRO_ROUTE_MAX}]: Shapiro-Wilk");
        match shapiro_wilk(sample, alpha) {
            Ok(r) => {
                primary = Some(TestKind::ShapiroWilk);
                results.push((TestRole::Primary, r));
            }
            Err(e) => reason = format!("{reason} (failed: {e})"),
        }
        if n < SMALL_SAMPLE_N {
            reason = format!(
                "{reason}; n < {SMALL_SAMPLE_N} adds a goodness-of-fit fallback \
                 against a moment-fitted normal"
            );
            if let Ok(r) = fitted_normal_ks(sample, alpha) {
                results.push((TestRole::Fallback, r));
            }
        }
    } else {
        reason = format!("n = {n} > {SHAPIRO_ROUTE_MAX}: D test");
        match dagostino_d(sample, alpha) {
            Ok(r) => {
                primary = Some(TestKind::DagostinoD);
                results.push((TestRole::Primary, r));
            }
            Err(e) => reason = format!("{reason} (failed: {e})"),
        }
    }

    RoutingReport {
        n,
        alpha,
        primary,
        reason,
        results,
    }
}

/// One-sample KS against a normal with the sample's own mean and
/// population standard deviation.
fn fitted_normal_ks(sample: &[f64], alpha: f64) -> Result<TestResult> {
    let n = sample.len() as f64;
    let mean = sample.iter().sum::<f64>() / n;
    let var = sample.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    if var <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    let sd = var.sqrt();
    let mut result = ks_one_sample(sample, |x| normal::cdf((x - mean) / sd), alpha)?;
    result
        .notes
        .push("reference: normal fitted by sample moments".to_string());
    Ok(result)
}
