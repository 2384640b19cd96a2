//! Shapiro-Wilk W test for departure from normality.
//!
//! Weights and the p-value transform follow Royston's 1995 algorithm
//! (Applied Statistics AS R94), the same formulation used by R and scipy,
//! so statistics agree with those implementations to well below 1e-6.

use super::normal;
use super::{check_alpha, TestKind, TestResult};
use crate::error::{Error, Result};

pub const MIN_N: usize = 3;
pub const MAX_N: usize = 5000;

/// Polynomial in x with coefficients in ascending-degree order.
fn poly(cc: &[f64], x: f64) -> f64 {
    let mut ret = cc[0];
    if cc.len() > 1 {
        let mut p = x * cc[cc.len() - 1];
        for j in (1..cc.len() - 1).rev() {
            p = (p + cc[j]) * x;
        }
        ret += p;
    }
    ret
}

/// Half-length weight vector a[0..n/2] for a sample of size n.
///
/// The full coefficient vector is antisymmetric: the largest observation
/// gets +a[0], the smallest -a[0], and so inward; an odd middle value
/// gets zero.
fn weights(n: usize) -> Vec<f64> {
    let nn2 = n / 2;
    if n == 3 {
        return vec![std::f64::consts::FRAC_1_SQRT_2];
    }

    const C1: [f64; 6] = [0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056];
    const C2: [f64; 6] = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633];

    let an = n as f64;
    let an25 = an + 0.25;
    let mut a: Vec<f64> = (1..=nn2)
        .map(|i| normal::quantile((i as f64 - 0.375) / an25))
        .collect();
    let summ2 = 2.0 * a.iter().map(|m| m * m).sum::<f64>();
    let ssumm2 = summ2.sqrt();
    let rsn = 1.0 / an.sqrt();
    let a1 = poly(&C1, rsn) - a[0] / ssumm2;

    let (i1, fac) = if n > 5 {
        let a2 = -a[1] / ssumm2 + poly(&C2, rsn);
        let fac = ((summ2 - 2.0 * a[0] * a[0] - 2.0 * a[1] * a[1])
            / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2))
            .sqrt();
        a[1] = a2;
        (2, fac)
    } else {
        let fac = ((summ2 - 2.0 * a[0] * a[0]) / (1.0 - 2.0 * a1 * a1)).sqrt();
        (1, fac)
    };
    a[0] = a1;
    for v in &mut a[i1..] {
        *v /= -fac;
    }
    a
}

/// W as the squared correlation between the ordered sample and the
/// antisymmetric weight vector, computed in the 1 - W form to keep
/// precision when W is close to one.
fn w_statistic(sorted: &[f64], a: &[f64]) -> f64 {
    let n = sorted.len();
    let range = sorted[n - 1] - sorted[0];
    let coeff = |i: usize| -> f64 {
        let j = n - 1 - i;
        match i.cmp(&j) {
            std::cmp::Ordering::Less => -a[i],
            std::cmp::Ordering::Equal => 0.0,
            std::cmp::Ordering::Greater => a[j],
        }
    };

    let sx = sorted.iter().map(|x| x / range).sum::<f64>() / n as f64;
    let sa = (0..n).map(coeff).sum::<f64>() / n as f64;

    let (mut ssa, mut ssx, mut sax) = (0.0, 0.0, 0.0);
    for (i, x) in sorted.iter().enumerate() {
        let asa = coeff(i) - sa;
        let xsx = x / range - sx;
        ssa += asa * asa;
        ssx += xsx * xsx;
        sax += asa * xsx;
    }

    let ssassx = (ssa * ssx).sqrt();
    let w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);
    1.0 - w1
}

/// P-value for W under the null, via Royston's normalizing transforms.
fn p_value(w: f64, n: usize) -> f64 {
    if n == 3 {
        // Exact small-sample distribution: P = (6/pi)(asin sqrt(W) - pi/3),
        // since W ranges over [3/4, 1] and asin sqrt(3/4) = pi/3.
        let pw = 6.0 / std::f64::consts::PI * (w.sqrt().asin() - std::f64::consts::FRAC_PI_3);
        return pw.clamp(0.0, 1.0);
    }

    const G: [f64; 2] = [-2.273, 0.459];
    const C3: [f64; 4] = [0.544, -0.39978, 0.025054, -6.714e-4];
    const C4: [f64; 4] = [1.3822, -0.77857, 0.062767, -0.0020322];
    const C5: [f64; 4] = [-1.5861, -0.31082, -0.083751, 0.0038915];
    const C6: [f64; 3] = [-0.4803, -0.082676, 0.0030302];

    let an = n as f64;
    let mut y = (1.0 - w).ln();
    let (m, s) = if n <= 11 {
        let gamma = poly(&G, an);
        if y >= gamma {
            return 1e-99;
        }
        y = -(gamma - y).ln();
        (poly(&C3, an), poly(&C4, an).exp())
    } else {
        let xx = an.ln();
        (poly(&C5, xx), poly(&C6, xx).exp())
    };
    // Upper tail of the standard normal.
    1.0 - normal::cdf((y - m) / s)
}

/// Shapiro-Wilk test of the null hypothesis that `sample` is normal.
///
/// Supports 3 <= n <= 5000. Small samples (n < 20) pass but carry a note
/// that power is limited there.
pub fn shapiro_wilk(sample: &[f64], alpha: f64) -> Result<TestResult> {
    check_alpha(alpha)?;
    let n = sample.len();
    if !(MIN_N..=MAX_N).contains(&n) {
        return Err(Error::SampleSizeOutOfRange {
            n,
            min: MIN_N,
            max: MAX_N,
        });
    }
    if let Some(index) = sample.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteSample {
            label: "sample".to_string(),
            index,
        });
    }

    let mut sorted = sample.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values compare"));
    if sorted[n - 1] - sorted[0] <= 0.0 {
        return Err(Error::ZeroVariance);
    }

    let a = weights(n);
    let w = w_statistic(&sorted, &a);
    let p = p_value(w, n);

    let mut notes = Vec::new();
    if n < 20 {
        notes.push(format!(
            "n = {n} < 20: limited power, interpret with caution"
        ));
    }

    Ok(TestResult {
        test: TestKind::ShapiroWilk,
        statistic: w,
        p_value: Some(p),
        alpha,
        reject_null: Some(p < alpha),
        notes,
    })
}
