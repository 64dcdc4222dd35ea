//! Point-mass-plus-boxcar mixtures.
//!
//! Every distribution that attains one of the sharp bounds in [`crate::bounds`]
//! is a finite mixture of a Dirac mass at the origin and uniform densities on
//! bounded intervals. [`ExtremalDistribution`] represents exactly that family,
//! with closed-form moments, CDF, tail and quantile, plus a seeded
//! inverse-CDF sampler.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Allowed slack in `atom_weight + sum(weights) == 1`.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// Relative slack for the discrete log-concavity test.
pub const LOG_CONCAVITY_TOLERANCE: f64 = 1e-9;

/// Uniform density on `(lo, hi)` carrying probability mass `weight`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxcarComponent {
    pub lo: f64,
    pub hi: f64,
    pub weight: f64,
}

impl BoxcarComponent {
    pub fn new(lo: f64, hi: f64, weight: f64) -> Result<Self> {
        let c = BoxcarComponent { lo, hi, weight };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(Error::InvalidDistribution(format!(
                "boxcar needs finite lo < hi, got ({}, {})",
                self.lo, self.hi
            )));
        }
        if !(self.weight > 0.0 && self.weight <= 1.0) {
            return Err(Error::InvalidDistribution(format!(
                "boxcar weight must lie in (0, 1], got {}",
                self.weight
            )));
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Density value on the open interval.
    pub fn height(&self) -> f64 {
        self.weight / self.width()
    }

    /// Weighted mass strictly above `t`.
    fn mass_above(&self, t: f64) -> f64 {
        self.weight * ((self.hi - t) / self.width()).clamp(0.0, 1.0)
    }

    fn mirrored(&self) -> Self {
        BoxcarComponent {
            lo: -self.hi,
            hi: -self.lo,
            weight: self.weight,
        }
    }
}

/// Which side of the threshold a tail probability includes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailConvention {
    /// `P(X > t)`
    #[default]
    Gt,
    /// `P(X >= t)`
    Ge,
}

/// `atom_weight * delta_0 + sum_i weight_i * Uniform(lo_i, hi_i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawExtremal")]
pub struct ExtremalDistribution {
    atom_weight: f64,
    components: Vec<BoxcarComponent>,
}

#[derive(Deserialize)]
struct RawExtremal {
    atom_weight: f64,
    components: Vec<BoxcarComponent>,
}

impl TryFrom<RawExtremal> for ExtremalDistribution {
    type Error = Error;

    fn try_from(raw: RawExtremal) -> Result<Self> {
        ExtremalDistribution::new(raw.atom_weight, raw.components)
    }
}

impl ExtremalDistribution {
    pub fn new(atom_weight: f64, components: Vec<BoxcarComponent>) -> Result<Self> {
        if !(0.0..=1.0).contains(&atom_weight) {
            return Err(Error::InvalidDistribution(format!(
                "atom weight must lie in [0, 1], got {atom_weight}"
            )));
        }
        for c in &components {
            c.validate()?;
        }
        let total = atom_weight + components.iter().map(|c| c.weight).sum::<f64>();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "total mass is {total}, expected 1"
            )));
        }
        Ok(ExtremalDistribution {
            atom_weight,
            components,
        })
    }

    /// Symmetric boxcar on `(-sqrt 3, sqrt 3)`: unit variance, and the
    /// maximiser of `P(X >= t)` among symmetric unimodal unit-variance laws
    /// for `t <= 2/sqrt 3`.
    pub fn flat_unit_variance() -> Self {
        let a = 3f64.sqrt();
        ExtremalDistribution {
            atom_weight: 0.0,
            components: vec![BoxcarComponent {
                lo: -a,
                hi: a,
                weight: 1.0,
            }],
        }
    }

    /// `(1 - beta) delta_0 + beta Uniform(-3t/2, 3t/2)` with `beta = 4/(3t^2)`.
    ///
    /// Unit variance; maximises `P(X >= t)` among symmetric unimodal
    /// unit-variance laws for `t > 2/sqrt 3`.
    pub fn symmetric_atom_boxcar(t: f64) -> Result<Self> {
        let threshold = 2.0 / 3f64.sqrt();
        if !(t.is_finite() && t > threshold) {
            return Err(Error::param("t", t, "must exceed 2/sqrt(3)"));
        }
        let beta = 4.0 / (3.0 * t * t);
        let half = 1.5 * t;
        Ok(ExtremalDistribution {
            atom_weight: 1.0 - beta,
            components: vec![BoxcarComponent {
                lo: -half,
                hi: half,
                weight: beta,
            }],
        })
    }

    /// One-sided law `(1 - 4/(3u^2)) delta_0 + (4/(3u^2)) Uniform(0, 3u^2 / (2 sqrt(u^2 - 1)))`.
    ///
    /// Mode 0, variance 1, mean `1/sqrt(u^2 - 1)`. At `u = 2/sqrt 3` the atom
    /// vanishes and the law is `Uniform(0, 2 sqrt 3)`.
    pub fn one_sided_atom_boxcar(u: f64) -> Result<Self> {
        let threshold = 2.0 / 3f64.sqrt();
        if !(u.is_finite() && u >= threshold) {
            return Err(Error::param("u", u, "must be at least 2/sqrt(3)"));
        }
        let u2 = u * u;
        let beta = (4.0 / (3.0 * u2)).min(1.0);
        let right = 3.0 * u2 / (2.0 * (u2 - 1.0).sqrt());
        Ok(ExtremalDistribution {
            atom_weight: 1.0 - beta,
            components: vec![BoxcarComponent {
                lo: 0.0,
                hi: right,
                weight: beta,
            }],
        })
    }

    /// Uniform density of height `b` centred at the origin.
    pub fn uniform_bounded_density(b: f64) -> Result<Self> {
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::param("b", b, "must be positive"));
        }
        let half = 0.5 / b;
        Ok(ExtremalDistribution {
            atom_weight: 0.0,
            components: vec![BoxcarComponent {
                lo: -half,
                hi: half,
                weight: 1.0,
            }],
        })
    }

    pub fn atom_weight(&self) -> f64 {
        self.atom_weight
    }

    pub fn components(&self) -> &[BoxcarComponent] {
        &self.components
    }

    pub fn has_atom(&self) -> bool {
        self.atom_weight > 0.0
    }

    pub fn mean(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.weight * 0.5 * (c.lo + c.hi))
            .sum()
    }

    pub fn second_moment(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.weight * (c.lo * c.lo + c.lo * c.hi + c.hi * c.hi) / 3.0)
            .sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.second_moment() - m * m
    }

    /// `P(X <= x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        let atom = if x >= 0.0 { self.atom_weight } else { 0.0 };
        let boxes: f64 = self
            .components
            .iter()
            .map(|c| c.weight * ((x - c.lo) / c.width()).clamp(0.0, 1.0))
            .sum();
        (atom + boxes).min(1.0)
    }

    /// `P(X < x)`.
    pub fn cdf_left(&self, x: f64) -> f64 {
        self.cdf(x) - self.point_mass(x)
    }

    /// Mass sitting exactly at `x` (nonzero only for the atom at the origin).
    pub fn point_mass(&self, x: f64) -> f64 {
        if x == 0.0 {
            self.atom_weight
        } else {
            0.0
        }
    }

    /// `P(X > t)`, summed component by component so deep tails keep full
    /// relative precision.
    pub fn tail_prob(&self, t: f64) -> f64 {
        let atom = if t < 0.0 { self.atom_weight } else { 0.0 };
        let boxes: f64 = self.components.iter().map(|c| c.mass_above(t)).sum();
        (atom + boxes).min(1.0)
    }

    pub fn tail_prob_with(&self, t: f64, convention: TailConvention) -> f64 {
        match convention {
            TailConvention::Gt => self.tail_prob(t),
            TailConvention::Ge => (self.tail_prob(t) + self.point_mass(t)).min(1.0),
        }
    }

    /// Density of the continuous part at `x` (the atom is excluded).
    pub fn density(&self, x: f64) -> f64 {
        self.components
            .iter()
            .filter(|c| c.lo < x && x < c.hi)
            .map(BoxcarComponent::height)
            .sum()
    }

    /// Supremum of the density; infinite when there is an atom.
    pub fn max_density(&self) -> f64 {
        if self.has_atom() {
            return f64::INFINITY;
        }
        let knots = self.knots();
        knots
            .windows(2)
            .map(|w| self.density(0.5 * (w[0] + w[1])))
            .fold(0.0, f64::max)
    }

    /// Smallest closed interval carrying all the mass.
    pub fn support(&self) -> (f64, f64) {
        let init = if self.has_atom() {
            (0.0, 0.0)
        } else {
            (f64::INFINITY, f64::NEG_INFINITY)
        };
        self.components
            .iter()
            .fold(init, |(lo, hi), c| (lo.min(c.lo), hi.max(c.hi)))
    }

    /// Law of `-X`.
    pub fn mirrored(&self) -> Self {
        ExtremalDistribution {
            atom_weight: self.atom_weight,
            components: self.components.iter().map(|c| c.mirrored()).collect(),
        }
    }

    /// Same law with identical intervals merged and components sorted.
    pub fn canonical(&self) -> Self {
        let mut comps = self.components.clone();
        comps.sort_by(|a, b| a.lo.total_cmp(&b.lo).then(a.hi.total_cmp(&b.hi)));
        let mut merged: Vec<BoxcarComponent> = Vec::with_capacity(comps.len());
        for c in comps {
            match merged.last_mut() {
                Some(last) if last.lo == c.lo && last.hi == c.hi => last.weight += c.weight,
                _ => merged.push(c),
            }
        }
        ExtremalDistribution {
            atom_weight: self.atom_weight,
            components: merged,
        }
    }

    /// Whether `P(X <= x) = P(X >= -x)` at every breakpoint, within `tol`.
    ///
    /// Both CDFs are piecewise linear with the same breakpoint set once it is
    /// closed under negation, so checking the breakpoints is exact.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        let mut knots = self.knots();
        knots.extend(knots.clone().into_iter().map(|x| -x));
        knots
            .into_iter()
            .all(|x| (self.cdf(x) - (1.0 - self.cdf_left(-x))).abs() <= tol)
    }

    /// Sorted, deduplicated breakpoints of the CDF.
    pub fn knots(&self) -> Vec<f64> {
        let mut xs: Vec<f64> = self.components.iter().flat_map(|c| [c.lo, c.hi]).collect();
        if self.has_atom() {
            xs.push(0.0);
        }
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        xs
    }

    /// Generalised inverse `inf { x : P(X <= x) >= p }`.
    pub fn quantile(&self, p: f64) -> f64 {
        QuantileTable::new(self).quantile(p)
    }

    /// `n` i.i.d. draws by inversion, reproducible from `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_with(&mut rng, n)
    }

    pub fn sample_with<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<f64> {
        let table = QuantileTable::new(self);
        (0..n)
            .map(|_| table.quantile(rng.random::<f64>()))
            .collect()
    }
}

/// Precomputed CDF values at every breakpoint, for repeated inversion.
pub(crate) struct QuantileTable {
    xs: Vec<f64>,
    left: Vec<f64>,
    right: Vec<f64>,
}

impl QuantileTable {
    pub(crate) fn new(d: &ExtremalDistribution) -> Self {
        let xs = d.knots();
        let left = xs.iter().map(|&x| d.cdf_left(x)).collect();
        let right = xs.iter().map(|&x| d.cdf(x)).collect();
        QuantileTable { xs, left, right }
    }

    pub(crate) fn quantile(&self, p: f64) -> f64 {
        let i = self.right.partition_point(|&r| r < p);
        if i >= self.xs.len() {
            return *self.xs.last().expect("distribution has at least one knot");
        }
        if i == 0 || self.left[i] < p {
            // either below the first knot or inside the jump at an atom
            return self.xs[i];
        }
        let (x0, x1) = (self.xs[i - 1], self.xs[i]);
        let (c0, c1) = (self.right[i - 1], self.left[i]);
        if c1 <= c0 {
            return x1;
        }
        x0 + (p - c0) / (c1 - c0) * (x1 - x0)
    }
}

/// Tabulated density on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    xs: Vec<f64>,
    fs: Vec<f64>,
}

impl DensityGrid {
    /// With `normalized` set, the trapezoid integral must be within `1e-6` of one.
    pub fn new(xs: Vec<f64>, fs: Vec<f64>, normalized: bool) -> Result<Self> {
        if xs.len() != fs.len() {
            return Err(Error::Precondition(format!(
                "grid has {} abscissae but {} density values",
                xs.len(),
                fs.len()
            )));
        }
        if xs.len() < 2 {
            return Err(Error::Precondition("grid needs at least two points".into()));
        }
        if xs.iter().any(|x| !x.is_finite()) || xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition(
                "grid abscissae must be finite and strictly increasing".into(),
            ));
        }
        if fs.iter().any(|f| !(f.is_finite() && *f >= 0.0)) {
            return Err(Error::Precondition(
                "density values must be finite and nonnegative".into(),
            ));
        }
        let grid = DensityGrid { xs, fs };
        if normalized {
            let mass = grid.trapezoid_integral();
            if (mass - 1.0).abs() > 1e-6 {
                return Err(Error::Precondition(format!(
                    "normalized grid integrates to {mass}"
                )));
            }
        }
        Ok(grid)
    }

    /// Evaluates `f` at `n` equally spaced points on `[lo, hi]`.
    pub fn from_fn(lo: f64, hi: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Precondition("grid needs at least two points".into()));
        }
        let step = (hi - lo) / (n - 1) as f64;
        let xs: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
        let fs = xs.iter().map(|&x| f(x)).collect();
        DensityGrid::new(xs, fs, false)
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn fs(&self) -> &[f64] {
        &self.fs
    }

    pub fn trapezoid_integral(&self) -> f64 {
        self.xs
            .windows(2)
            .zip(self.fs.windows(2))
            .map(|(x, f)| 0.5 * (x[1] - x[0]) * (f[0] + f[1]))
            .sum()
    }
}

/// Discrete test of whether `ln f` is concave on the positive support.
///
/// A strictly unimodal density is strongly unimodal exactly when it is
/// log-concave. A positive support broken by zeros cannot be log-concave. On
/// a contiguous positive run, successive slopes of `ln f` must not increase
/// by more than [`LOG_CONCAVITY_TOLERANCE`] times the local slope scale.
pub fn is_log_concave(grid: &DensityGrid) -> Result<bool> {
    let positive: Vec<usize> = (0..grid.fs.len()).filter(|&i| grid.fs[i] > 0.0).collect();
    if positive.len() < 3 {
        return Err(Error::Precondition(format!(
            "log-concavity needs at least 3 positive density points, got {}",
            positive.len()
        )));
    }
    let (first, last) = (positive[0], positive[positive.len() - 1]);
    if last - first + 1 != positive.len() {
        return Ok(false);
    }
    let xs = &grid.xs[first..=last];
    let logs: Vec<f64> = grid.fs[first..=last].iter().map(|f| f.ln()).collect();
    let slopes: Vec<f64> = xs
        .windows(2)
        .zip(logs.windows(2))
        .map(|(x, l)| (l[1] - l[0]) / (x[1] - x[0]))
        .collect();
    Ok(slopes.windows(2).all(|s| {
        let scale = 1f64.max(s[0].abs()).max(s[1].abs());
        s[1] - s[0] <= LOG_CONCAVITY_TOLERANCE * scale
    }))
}
