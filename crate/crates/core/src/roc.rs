//! Empirical ROC curves and the area under them.
//!
//! The AUC is computed two independent ways: the trapezoid integral of the
//! step ROC curve, and the Mann-Whitney pair count `P(X0 < X1) + P(X0 = X1)/2`.
//! Both reduce to exact integer counts before the final division, so they
//! agree to the last bit whenever the pair counts agree.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ClassLabel {
    /// Signal absent.
    Class0,
    /// Signal present.
    Class1,
}

/// Observations of the test statistic for one class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalSample {
    values: Vec<f64>,
    label: ClassLabel,
}

impl EmpiricalSample {
    pub fn new(values: Vec<f64>, label: ClassLabel) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Precondition(format!(
                "sample values must be finite, found {bad}"
            )));
        }
        Ok(EmpiricalSample { values, label })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> ClassLabel {
        self.label
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn sorted(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_by(cmp_finite);
        v
    }
}

// Values are finite, so this is a total order in which -0.0 == 0.0.
fn cmp_finite(a: &f64, b: &f64) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    /// False-positive rate (level of the test).
    pub alpha: f64,
    /// True-positive rate (power).
    pub power: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    pub points: Vec<RocPoint>,
    pub auc_trapezoid: f64,
}

/// Threshold `x(alpha)` of the level-`alpha` test that rejects when the
/// class-0 statistic exceeds it.
///
/// This is the generalised inverse `inf { x : F0(x) >= 1 - alpha }` of the
/// right-continuous empirical CDF, i.e. the order statistic
/// `v[ceil((1 - alpha) n)]`. It agrees with `sup { x : 1 - F0(x) >= alpha }`
/// except at `alpha = k/n`. There the supremum is not attained by the step
/// CDF, so the attained threshold is returned instead, and the test has
/// size exactly `alpha`.
pub fn threshold_of_alpha(s0: &EmpiricalSample, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::param("alpha", alpha, "must lie in (0, 1)"));
    }
    let sorted = s0.sorted();
    let n = sorted.len();
    // absorb the rounding in (1 - alpha) * n when it should be an integer
    let k = ((1.0 - alpha) * n as f64 - 1e-9).ceil().max(1.0) as usize;
    Ok(sorted[k.min(n) - 1])
}

/// Labels sorted by descending value, with `true` for class 1.
fn merged_descending(s0: &EmpiricalSample, s1: &EmpiricalSample) -> Vec<(f64, bool)> {
    let mut all: Vec<(f64, bool)> = s0
        .values
        .iter()
        .map(|&v| (v, false))
        .chain(s1.values.iter().map(|&v| (v, true)))
        .collect();
    all.sort_by(|a, b| cmp_finite(&b.0, &a.0));
    all
}

/// Step ROC curve over every distinct threshold, from `(0, 0)` to `(1, 1)`.
///
/// Tied values across the two classes become one diagonal segment, so the
/// trapezoid rule gives such pairs half weight.
pub fn roc_curve(s0: &EmpiricalSample, s1: &EmpiricalSample) -> RocCurve {
    let (n0, n1) = (s0.len() as u64, s1.len() as u64);
    let all = merged_descending(s0, s1);
    let mut points = vec![RocPoint {
        alpha: 0.0,
        power: 0.0,
    }];
    let (mut fp, mut tp) = (0u64, 0u64);
    let mut twice_area: u128 = 0;
    let mut i = 0;
    while i < all.len() {
        let (prev_fp, prev_tp) = (fp, tp);
        let v = all[i].0;
        while i < all.len() && all[i].0 == v {
            if all[i].1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        twice_area += u128::from(fp - prev_fp) * u128::from(prev_tp + tp);
        points.push(RocPoint {
            alpha: fp as f64 / n0 as f64,
            power: tp as f64 / n1 as f64,
        });
    }
    RocCurve {
        points,
        auc_trapezoid: twice_area as f64 / (2 * n0 as u128 * n1 as u128) as f64,
    }
}

/// Mann-Whitney estimate of `P(X0 < X1) + P(X0 = X1)/2` from mid-ranks.
pub fn auc_mann_whitney(s0: &EmpiricalSample, s1: &EmpiricalSample) -> f64 {
    let (n0, n1) = (s0.len() as u128, s1.len() as u128);
    let mut all = merged_descending(s0, s1);
    all.reverse();
    // doubled mid-ranks keep everything in integers
    let mut twice_rank_sum: u128 = 0;
    let mut i = 0;
    while i < all.len() {
        let mut j = i;
        while j < all.len() && all[j].0 == all[i].0 {
            j += 1;
        }
        let twice_mid_rank = (i + 1 + j) as u128;
        let ones = all[i..j].iter().filter(|e| e.1).count() as u128;
        twice_rank_sum += ones * twice_mid_rank;
        i = j;
    }
    let twice_u = twice_rank_sum - n1 * (n1 + 1);
    twice_u as f64 / (2 * n0 * n1) as f64
}
