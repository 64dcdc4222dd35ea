//! Brute-force maximisation of tail probabilities over grids of extreme
//! points of the unit-variance unimodal classes.
//!
//! Every unimodal law is a mixture of boxcars containing its mode and a point
//! mass at the mode. One variance constraint means a maximiser can be taken
//! as a mixture of at most two such pieces. The sweeps enumerate both the
//! atom-plus-boxcar and the two-boxcar families on nested geometric grids,
//! so refining the grid can only raise the best value found.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{one_sided_tail_bound, symmetric_unimodal_tail_bound};
use crate::error::{Error, Result};
use crate::extremal::{BoxcarComponent, ExtremalDistribution, TailConvention};

const DEFAULT_POINTS: usize = 1001;
// smallest inner half-width relative to its upper limit
const INNER_RANGE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    /// Points per parameter. Grids with `n` and `2n - 1` points are nested.
    pub points: usize,
    /// Largest boxcar width searched; defaults to `max(50, 10 t)`.
    pub max_width: Option<f64>,
}

impl Default for SweepGrid {
    fn default() -> Self {
        SweepGrid {
            points: DEFAULT_POINTS,
            max_width: None,
        }
    }
}

impl SweepGrid {
    pub fn with_points(points: usize) -> Self {
        SweepGrid {
            points,
            ..SweepGrid::default()
        }
    }

    /// The next nested refinement.
    pub fn refined(&self) -> Self {
        SweepGrid {
            points: 2 * self.points - 1,
            ..*self
        }
    }

    fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::Precondition(format!(
                "sweep grid needs at least 2 points per parameter, got {}",
                self.points
            )));
        }
        if let Some(w) = self.max_width {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::param("max_width", w, "must be positive and finite"));
            }
        }
        Ok(())
    }

    fn width_limit(&self, t: f64) -> f64 {
        self.max_width.unwrap_or_else(|| (10.0 * t).max(50.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SweepFamily {
    AtomBoxcar,
    TwoBoxcar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub target: f64,
    pub best_value: f64,
    pub best_family: SweepFamily,
    pub best_config: ExtremalDistribution,
    pub bound_value: f64,
    /// `bound_value - best_value`; negative when some configuration beats
    /// the bound.
    pub gap: f64,
    pub configurations: u64,
}

/// `lo (hi/lo)^(i/(n-1))`, with both ends exact.
fn geometric(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let ratio = (hi / lo).ln();
    (0..n)
        .map(|i| match i {
            0 => lo,
            _ if i == n - 1 => hi,
            _ => lo * (ratio * i as f64 / (n - 1) as f64).exp(),
        })
        .collect()
}

// P(V >= t) for V ~ Uniform(lo, hi)
fn uniform_tail(lo: f64, hi: f64, t: f64) -> f64 {
    ((hi - t) / (hi - lo)).clamp(0.0, 1.0)
}

/// A candidate: tail value and the pieces `(lo, hi, weight)` of its boxcars.
/// Any missing mass sits in an atom at 0.
#[derive(Debug, Clone, Copy)]
struct Candidate {
    value: f64,
    family: SweepFamily,
    parts: [(f64, f64, f64); 2],
    count: u64,
}

impl Candidate {
    fn none() -> Self {
        Candidate {
            value: f64::NEG_INFINITY,
            family: SweepFamily::AtomBoxcar,
            parts: [(0.0, 0.0, 0.0); 2],
            count: 0,
        }
    }

    fn offer(&mut self, value: f64, family: SweepFamily, parts: [(f64, f64, f64); 2]) {
        self.count += 1;
        if value > self.value {
            *self = Candidate {
                value,
                family,
                parts,
                count: self.count,
            };
        }
    }

    /// Keeps the earlier candidate on ties, so row order decides.
    fn merge(self, later: Candidate) -> Candidate {
        let count = self.count + later.count;
        let mut best = if later.value > self.value {
            later
        } else {
            self
        };
        best.count = count;
        best
    }

    fn into_distribution(self) -> Result<ExtremalDistribution> {
        let components = self
            .parts
            .iter()
            .filter(|p| p.2 > 0.0)
            .map(|&(lo, hi, w)| BoxcarComponent::new(lo, hi, w))
            .collect::<Result<Vec<_>>>()?;
        // weights computed from the variance constraint may miss 1 by an ulp
        let mass: f64 = components.iter().map(|c| c.weight).sum();
        ExtremalDistribution::new((1.0 - mass).max(0.0), components)
    }
}

fn best_of_rows(rows: impl IndexedParallelIterator<Item = Candidate>) -> Candidate {
    rows.collect::<Vec<_>>()
        .into_iter()
        .fold(Candidate::none(), Candidate::merge)
}

fn report(
    t: f64,
    best: Candidate,
    bound_value: f64,
    convention: TailConvention,
) -> Result<SweepReport> {
    let best_config = best.into_distribution()?;
    // re-evaluate through the distribution itself rather than the sweep formula
    let best_value = best_config.tail_prob_with(t, convention);
    Ok(SweepReport {
        target: t,
        best_value,
        best_family: best.family,
        best_config,
        bound_value,
        gap: bound_value - best_value,
        configurations: best.count,
    })
}

fn check_target(t: f64) -> Result<()> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::param("t", t, "must be positive and finite"));
    }
    Ok(())
}

/// Maximises `P(X >= t)` over symmetric unimodal unit-variance laws built
/// from `(1 - beta) delta_0 + beta Uniform(-a, a)` and
/// `(1 - beta) Uniform(-a1, a1) + beta Uniform(-a2, a2)`, compared with
/// [`symmetric_unimodal_tail_bound`].
pub fn sweep_symmetric_unimodal(t: f64, grid: &SweepGrid) -> Result<SweepReport> {
    check_target(t)?;
    grid.validate()?;
    let n = grid.points;
    let root3 = 3f64.sqrt();
    let a_max = grid.width_limit(t).max(2.0 * root3);

    let widths = geometric(root3, a_max, n);
    let atom_family = best_of_rows(widths.par_iter().map(|&a| {
        let beta = (3.0 / (a * a)).min(1.0);
        let mut c = Candidate::none();
        c.offer(
            beta * uniform_tail(-a, a, t),
            SweepFamily::AtomBoxcar,
            [(-a, a, beta), (0.0, 0.0, 0.0)],
        );
        c
    }));

    let inner = geometric(root3 * INNER_RANGE, root3, n);
    let outer = &widths[1..];
    let two_boxcar = best_of_rows(inner[..n - 1].par_iter().map(|&a1| {
        let mut c = Candidate::none();
        for &a2 in outer {
            let beta = ((3.0 - a1 * a1) / (a2 * a2 - a1 * a1)).clamp(0.0, 1.0);
            let value = (1.0 - beta) * uniform_tail(-a1, a1, t) + beta * uniform_tail(-a2, a2, t);
            c.offer(
                value,
                SweepFamily::TwoBoxcar,
                [(-a1, a1, 1.0 - beta), (-a2, a2, beta)],
            );
        }
        c
    }));

    let bound = symmetric_unimodal_tail_bound(t)?.value;
    report(t, atom_family.merge(two_boxcar), bound, TailConvention::Ge)
}

/// Roots in `[0, 1]` of `q2 x^2 + q1 x + q0`.
fn unit_roots(q2: f64, q1: f64, q0: f64) -> impl Iterator<Item = f64> {
    let disc = q1 * q1 - 4.0 * q2 * q0;
    let roots = if q2 == 0.0 {
        [-q0 / q1, f64::NAN]
    } else if disc < 0.0 {
        [f64::NAN; 2]
    } else {
        // avoid cancellation between -q1 and the square root
        let s = -0.5 * (q1 + q1.signum() * disc.sqrt());
        [s / q2, if s != 0.0 { q0 / s } else { f64::NAN }]
    };
    roots.into_iter().filter(|x| (0.0..=1.0).contains(x))
}

/// Maximises `P(X > t)` over laws unimodal at 0, supported on `[0, inf)`,
/// with unit variance and any mean. The families are
/// `(1 - beta) delta_0 + beta Uniform(0, a)` and
/// `(1 - beta) Uniform(0, a1) + beta Uniform(0, a2)`. The result is compared
/// with [`one_sided_tail_bound`].
pub fn sweep_one_sided_unimodal(t: f64, grid: &SweepGrid) -> Result<SweepReport> {
    check_target(t)?;
    grid.validate()?;
    let n = grid.points;
    let root12 = 12f64.sqrt();
    let a_max = grid.width_limit(t).max(2.0 * root12);

    // variance a^2 beta (4 - 3 beta) / 12 = 1
    let betas = geometric((3.0 / (a_max * a_max)).min(1.0), 1.0, n);
    let atom_family = best_of_rows(betas.par_iter().map(|&beta| {
        let a = (12.0 / (beta * (4.0 - 3.0 * beta))).sqrt();
        let mut c = Candidate::none();
        c.offer(
            beta * uniform_tail(0.0, a, t),
            SweepFamily::AtomBoxcar,
            [(0.0, a, beta), (0.0, 0.0, 0.0)],
        );
        c
    }));

    // mixtures of two boxcars only reach variance 1 when the narrower one is
    // below sqrt 12
    let inner = geometric(root12 * INNER_RANGE, root12, n);
    let outer = geometric(root12 * INNER_RANGE, a_max, n);
    let two_boxcar = best_of_rows(inner[..n - 1].par_iter().map(|&a1| {
        let mut c = Candidate::none();
        for &a2 in outer.iter().filter(|&&a2| a2 > a1) {
            let d1 = a2 - a1;
            let d2 = a2 * a2 - a1 * a1;
            let q2 = -0.25 * d1 * d1;
            let q1 = d2 / 3.0 - 0.5 * a1 * d1;
            let q0 = a1 * a1 / 12.0 - 1.0;
            for beta in unit_roots(q2, q1, q0) {
                let value =
                    (1.0 - beta) * uniform_tail(0.0, a1, t) + beta * uniform_tail(0.0, a2, t);
                c.offer(
                    value,
                    SweepFamily::TwoBoxcar,
                    [(0.0, a1, 1.0 - beta), (0.0, a2, beta)],
                );
            }
        }
        c
    }));

    let bound = one_sided_tail_bound(t)?.value;
    report(t, atom_family.merge(two_boxcar), bound, TailConvention::Gt)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_grid_is_nested() {
        let coarse = geometric(0.5, 40.0, 11);
        let fine = geometric(0.5, 40.0, 21);
        for (i, x) in coarse.iter().enumerate() {
            assert!((fine[2 * i] - x).abs() <= 1e-13 * x);
        }
        assert_eq!((fine[0], fine[20]), (0.5, 40.0));
    }

    #[test]
    fn unit_roots_cases() {
        let r: Vec<f64> = unit_roots(1.0, -1.0, 0.16).collect();
        assert_eq!(r.len(), 2);
        assert!(r.iter().any(|x| (x - 0.2).abs() < 1e-15));
        assert!(r.iter().any(|x| (x - 0.8).abs() < 1e-15));
        assert_eq!(unit_roots(1.0, 0.0, 1.0).count(), 0);
        assert_eq!(unit_roots(0.0, 2.0, -1.0).collect::<Vec<_>>(), vec![0.5]);
    }

    #[test]
    fn every_sweep_config_has_unit_variance() {
        for t in [0.5, 2.0, 3.18198, 9.0] {
            let grid = SweepGrid::with_points(101);
            let s = sweep_symmetric_unimodal(t, &grid).unwrap();
            assert!((s.best_config.variance() - 1.0).abs() < 1e-9, "{s:?}");
            assert!(s.best_config.mean().abs() < 1e-12);
            let o = sweep_one_sided_unimodal(t, &grid).unwrap();
            assert!((o.best_config.variance() - 1.0).abs() < 1e-9, "{o:?}");
            assert!(o.best_config.support().0 >= 0.0);
        }
    }

    #[test]
    fn symmetric_sweep_examples() {
        let grid = SweepGrid::default();
        let s = sweep_symmetric_unimodal(2.0, &grid).unwrap();
        assert!(s.gap >= -1e-8 && s.gap <= 1e-3, "{s:?}");
        assert!((s.best_value - 1.0 / 18.0).abs() <= 1e-3);
        let s = sweep_symmetric_unimodal(1.0, &grid).unwrap();
        assert!((s.best_value - (0.5 - 0.5 / 3f64.sqrt())).abs() < 1e-12);
        assert_eq!(s.best_config, ExtremalDistribution::flat_unit_variance());
    }

    #[test]
    fn one_sided_sweep_below_junction_hits_flat_law() {
        let s = sweep_one_sided_unimodal(2.0, &SweepGrid::default()).unwrap();
        assert!(
            (s.best_value - (1.0 - 1.0 / 3f64.sqrt())).abs() < 1e-12,
            "{s:?}"
        );
        assert!(s.gap.abs() < 1e-12);
    }

    #[test]
    fn one_sided_sweep_finds_laws_above_the_closed_form_value() {
        // two boxcars with mean far from 1/sqrt(u^2 - 1) exceed the
        // one-sided formula above the junction
        let s = sweep_one_sided_unimodal(3.18198, &SweepGrid::with_points(201)).unwrap();
        assert!(s.best_value > 0.08, "{s:?}");
        assert!(s.gap < 0.0);
    }

    #[test]
    fn refinement_never_lowers_best_value() {
        let coarse = SweepGrid::with_points(51);
        let fine = coarse.refined();
        for t in [1.5, 2.5, 6.0] {
            let a = sweep_symmetric_unimodal(t, &coarse).unwrap();
            let b = sweep_symmetric_unimodal(t, &fine).unwrap();
            assert!(b.best_value >= a.best_value);
            let a = sweep_one_sided_unimodal(t, &coarse).unwrap();
            let b = sweep_one_sided_unimodal(t, &fine).unwrap();
            assert!(b.best_value >= a.best_value);
        }
    }

    #[test]
    fn deterministic_and_serializable() {
        let grid = SweepGrid::with_points(101);
        let a = sweep_one_sided_unimodal(5.0, &grid).unwrap();
        let b = sweep_one_sided_unimodal(5.0, &grid).unwrap();
        assert_eq!(a, b);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<SweepReport>(&json).unwrap(), a);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(sweep_symmetric_unimodal(0.0, &SweepGrid::default()).is_err());
        assert!(sweep_one_sided_unimodal(f64::NAN, &SweepGrid::default()).is_err());
        assert!(sweep_symmetric_unimodal(1.0, &SweepGrid::with_points(1)).is_err());
    }
}
