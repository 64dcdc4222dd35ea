//! Exact triple-overlap integrals over finite unions of intervals, and the
//! symmetric-rearrangement inequality they satisfy.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite union of disjoint open intervals, sorted by left end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl IntervalSet {
    /// Overlapping or touching intervals are merged; the result differs from
    /// the plain union by at most finitely many points.
    pub fn new(mut intervals: Vec<(f64, f64)>) -> Result<Self> {
        for &(lo, hi) in &intervals {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::Precondition(format!(
                    "interval ({lo}, {hi}) must be finite with lo < hi"
                )));
            }
        }
        intervals.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(intervals.len());
        for (lo, hi) in intervals {
            match merged.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        Ok(IntervalSet { intervals: merged })
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        IntervalSet::new(vec![(lo, hi)])
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(lo, hi)| hi - lo).sum()
    }

    /// The centred open interval of the same measure.
    pub fn rearranged(&self) -> IntervalSet {
        let half = 0.5 * self.measure();
        IntervalSet {
            intervals: if half > 0.0 {
                vec![(-half, half)]
            } else {
                vec![]
            },
        }
    }
}

// integral of max(k - y, 0) over y in (c_lo, c_hi)
fn ramp_integral(k: f64, c_lo: f64, c_hi: f64) -> f64 {
    let r = |z: f64| if z > 0.0 { 0.5 * z * z } else { 0.0 };
    r(k - c_lo) - r(k - c_hi)
}

/// `∫∫ 1_A(x) 1_B(x - y) 1_C(y) dx dy` for single intervals `A`, `B`, `C`.
///
/// The inner integral over `x` is the overlap length `|A ∩ (B + y)|`, a
/// trapezoid in `y` written as a signed sum of four ramps. Each ramp has a
/// closed-form integral over `C`. Degenerate (empty) intervals contribute 0.
pub fn triple_overlap(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    if a.1 <= a.0 || b.1 <= b.0 || c.1 <= c.0 {
        return 0.0;
    }
    let v = ramp_integral(a.1 - b.0, c.0, c.1)
        - ramp_integral(a.0 - b.0, c.0, c.1)
        - ramp_integral(a.1 - b.1, c.0, c.1)
        + ramp_integral(a.0 - b.1, c.0, c.1);
    v.max(0.0)
}

/// Left and right sides of the rearrangement inequality for three sets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RieszCheck {
    pub lhs: f64,
    pub rhs: f64,
}

impl RieszCheck {
    pub fn holds(&self, tol: f64) -> bool {
        self.lhs <= self.rhs + tol
    }
}

/// `lhs = ∫∫ 1_A(x) 1_B(x - y) 1_C(y)`, `rhs` the same with each set
/// replaced by its symmetric rearrangement. Riesz's inequality says
/// `lhs <= rhs`.
pub fn riesz_check(a: &IntervalSet, b: &IntervalSet, c: &IntervalSet) -> RieszCheck {
    RieszCheck {
        lhs: union_triple_overlap(a, b, c),
        rhs: union_triple_overlap(&a.rearranged(), &b.rearranged(), &c.rearranged()),
    }
}

fn union_triple_overlap(a: &IntervalSet, b: &IntervalSet, c: &IntervalSet) -> f64 {
    let mut total = 0.0;
    for &ia in &a.intervals {
        for &ib in &b.intervals {
            for &ic in &c.intervals {
                total += triple_overlap(ia, ib, ic);
            }
        }
    }
    total
}
