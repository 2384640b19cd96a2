//! Integrated EMG and the coactivation index over a time-normalized
//! contraction cycle.
//!
//! Envelopes of different durations are resampled onto a common 0-100%
//! cycle grid (101 points by default). The coactivation index of a muscle
//! is its share of the summed integrated EMG, so the indices of a muscle
//! set always add to one.

use crate::error::{Error, Result};
use crate::signal::Envelope;

/// Default number of grid points spanning 0-100% of the cycle.
pub const DEFAULT_CYCLE_POINTS: usize = 101;

/// An envelope resampled onto the percent-of-cycle grid. The abscissa runs
/// 0..=100 with `values.len()` uniform points.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedCycle {
    pub values: Vec<f64>,
}

impl NormalizedCycle {
    pub fn points(&self) -> usize {
        self.values.len()
    }

    /// Percent positions of the grid points.
    pub fn grid(&self) -> Vec<f64> {
        let last = (self.values.len() - 1) as f64;
        (0..self.values.len())
            .map(|i| 100.0 * i as f64 / last)
            .collect()
    }
}

/// Linear resampling of an envelope onto `points` uniform positions across
/// its duration. Endpoints are copied exactly.
pub fn time_normalize(envelope: &Envelope, points: usize) -> Result<NormalizedCycle> {
    let n = envelope.samples.len();
    if n < 2 {
        return Err(Error::NotEnoughPoints { needed: 2, got: n });
    }
    if points < 2 {
        return Err(Error::NotEnoughPoints {
            needed: 2,
            got: points,
        });
    }
    let src = &envelope.samples;
    let mut values = Vec::with_capacity(points);
    values.push(src[0]);
    for j in 1..points - 1 {
        let pos = j as f64 * (n - 1) as f64 / (points - 1) as f64;
        let lo = pos.floor() as usize;
        let frac = pos - lo as f64;
        let v = if lo + 1 < n {
            src[lo] + frac * (src[lo + 1] - src[lo])
        } else {
            src[n - 1]
        };
        values.push(v);
    }
    values.push(src[n - 1]);
    Ok(NormalizedCycle { values })
}

/// Trapezoidal integral of a nonnegative cycle over its 0-100% abscissa.
pub fn integrate_emg(cycle: &NormalizedCycle) -> Result<f64> {
    if cycle.values.len() < 2 {
        return Err(Error::NotEnoughPoints {
            needed: 2,
            got: cycle.values.len(),
        });
    }
    if let Some(index) = cycle.values.iter().position(|&v| v < 0.0) {
        return Err(Error::NegativeEnvelopeValue { index });
    }
    let dx = 100.0 / (cycle.values.len() - 1) as f64;
    let sum: f64 = cycle.values.iter().sum();
    let ends = (cycle.values[0] + cycle.values[cycle.values.len() - 1]) / 2.0;
    Ok(dx * (sum - ends))
}

/// Per-muscle integrated EMG and coactivation indices.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CoactivationReport {
    pub muscles: Vec<String>,
    /// Envelope-units · percent-of-cycle, same order as `muscles`.
    pub iemg: Vec<f64>,
    /// Shares of the summed iEMG; nonnegative, summing to 1.
    pub ci: Vec<f64>,
    pub points: usize,
}

impl CoactivationReport {
    /// CI of one muscle by label.
    pub fn index_of(&self, muscle: &str) -> Option<f64> {
        self.muscles
            .iter()
            .position(|m| m == muscle)
            .map(|i| self.ci[i])
    }
}

/// Computes iEMG and CI for every muscle of a set. All cycles must share
/// one grid, and at least one must integrate to a positive value.
pub fn coactivation_report(cycles: &[(String, NormalizedCycle)]) -> Result<CoactivationReport> {
    if cycles.len() < 2 {
        return Err(Error::NotEnoughPoints {
            needed: 2,
            got: cycles.len(),
        });
    }
    let points = cycles[0].1.points();
    for (_, c) in cycles {
        if c.points() != points {
            return Err(Error::GridMismatch {
                len_a: points,
                len_b: c.points(),
            });
        }
    }
    let mut muscles = Vec::with_capacity(cycles.len());
    let mut iemg = Vec::with_capacity(cycles.len());
    for (label, cycle) in cycles {
        muscles.push(label.clone());
        iemg.push(integrate_emg(cycle)?);
    }
    let total: f64 = iemg.iter().sum();
    if !(total > 0.0) {
        return Err(Error::ZeroDenominator);
    }
    let ci = iemg.iter().map(|v| v / total).collect();
    Ok(CoactivationReport {
        muscles,
        iemg,
        ci,
        points,
    })
}
