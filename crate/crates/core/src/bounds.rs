//! Closed-form sharp bounds on tail probabilities and on `P(X <= Y + mu)`.
//!
//! Lower bounds on the AUC come from unimodality with unit variance; upper
//! bounds come from symmetry with a bounded density. Every two-branch bound
//! records which branch produced the value, the value before clamping to
//! `[0, 1]`, and the parameters of the law that attains it.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extremal::ExtremalDistribution;

/// Relative cubic residual accepted from the shape-parameter solve.
pub const ROOT_RESIDUAL_TOLERANCE: f64 = 1e-10;
const MAX_ROOT_ITERATIONS: u32 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Branch {
    Linear,
    Quadratic,
    Saturated,
    /// Below the range where the inequality says anything.
    Vacuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Direction {
    Upper,
    Lower,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub value: f64,
    pub branch: Branch,
    pub direction: Direction,
    pub params: BTreeMap<String, f64>,
}

impl BoundResult {
    fn new(raw: f64, branch: Branch, direction: Direction) -> Self {
        let mut params = BTreeMap::new();
        params.insert("unclamped".to_string(), raw);
        BoundResult {
            value: raw.clamp(0.0, 1.0),
            branch,
            direction,
            params,
        }
    }

    fn with(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.get(name).copied()
    }
}

/// Outcome of solving for the shape parameter `u` of the one-sided extremal law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootSolve {
    pub t: f64,
    pub u: f64,
    /// Value of [`root_condition`] at `(t, u)`.
    pub residual: f64,
    pub iterations: u32,
    pub bracket: (f64, f64),
}

fn sqrt3() -> f64 {
    3f64.sqrt()
}

fn check_positive(name: &'static str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::param(name, x, "must be positive and finite"))
    }
}

/// Junction of the symmetric-unimodal bound, `2/sqrt 3`.
pub fn symmetric_junction() -> f64 {
    2.0 / sqrt3()
}

/// Junction of the one-sided bound, `4/sqrt 3`.
pub fn one_sided_junction() -> f64 {
    4.0 / sqrt3()
}

/// Junction of the AUC lower bound, `sqrt 6 + 4 sqrt(2/3)`.
pub fn shift_junction() -> f64 {
    6f64.sqrt() + 4.0 * (2.0f64 / 3.0).sqrt()
}

/// Gauss's inequality: upper bound on `P(|X - m| > s)` for a law unimodal at
/// `m` with `E (X - m)^2 = tau^2`.
///
/// The branches meet at `s = 2 tau / sqrt 3`, where both equal `1/3`.
pub fn gauss_tail_bound(s: f64, tau: f64) -> Result<BoundResult> {
    if !(s.is_finite() && s >= 0.0) {
        return Err(Error::param("s", s, "must be nonnegative and finite"));
    }
    check_positive("tau", tau)?;
    let crossover = 2.0 * tau / sqrt3();
    let result = if s <= crossover {
        BoundResult::new(1.0 - s / (sqrt3() * tau), Branch::Linear, Direction::Upper)
    } else {
        BoundResult::new(
            4.0 * tau * tau / (9.0 * s * s),
            Branch::Quadratic,
            Direction::Upper,
        )
    };
    Ok(result
        .with("s", s)
        .with("tau", tau)
        .with("crossover", crossover))
}

/// Sharp upper bound on `P(X >= t)` for symmetric unimodal `X` with unit
/// variance.
pub fn symmetric_unimodal_tail_bound(t: f64) -> Result<BoundResult> {
    check_positive("t", t)?;
    let result = if t <= symmetric_junction() {
        BoundResult::new(0.5 - t / (2.0 * sqrt3()), Branch::Linear, Direction::Upper)
            .with("atom_weight", 0.0)
            .with("half_width", sqrt3())
    } else {
        let beta = 4.0 / (3.0 * t * t);
        BoundResult::new(2.0 / (9.0 * t * t), Branch::Quadratic, Direction::Upper)
            .with("beta", beta)
            .with("atom_weight", 1.0 - beta)
            .with("half_width", 1.5 * t)
    };
    Ok(result.with("t", t))
}

/// The symmetric law attaining [`symmetric_unimodal_tail_bound`] at `t`.
pub fn symmetric_unimodal_extremal(t: f64) -> Result<ExtremalDistribution> {
    check_positive("t", t)?;
    if t <= symmetric_junction() {
        Ok(ExtremalDistribution::flat_unit_variance())
    } else {
        ExtremalDistribution::symmetric_atom_boxcar(t)
    }
}

/// Upper bound on `P(|X| > t sqrt(1 + mu_x^2))` for `X` unimodal at 0 with
/// unit variance and mean `mu_x`.
///
/// The threshold scales with the second moment, so the value does not
/// depend on `mu_x`; it is recorded for the caller.
pub fn two_sided_unimodal_bound(t: f64, mu_x: f64) -> Result<BoundResult> {
    check_positive("t", t)?;
    if !mu_x.is_finite() {
        return Err(Error::param("mu_x", mu_x, "must be finite"));
    }
    let result = if t < symmetric_junction() {
        BoundResult::new(1.0 - t / sqrt3(), Branch::Linear, Direction::Upper)
    } else {
        BoundResult::new(4.0 / (9.0 * t * t), Branch::Quadratic, Direction::Upper)
    };
    Ok(result
        .with("t", t)
        .with("mu_x", mu_x)
        .with("threshold", t * (1.0 + mu_x * mu_x).sqrt()))
}

/// `t^3 - (3u^2 / (2 sqrt(u^2 - 1))) t^2 + (1/2) (u^4 / (u^2 - 1))^(3/2)`.
///
/// With `s = u^2 / sqrt(u^2 - 1)` this is `(t - s)^2 (t + s/2)`: a double
/// root at `t = s` and nonnegative everywhere else.
pub fn root_condition(t: f64, u: f64) -> f64 {
    let u2 = u * u;
    let q = u2 - 1.0;
    t * t * t - 3.0 * u2 / (2.0 * q.sqrt()) * t * t + 0.5 * (u2 * u2 / q).powf(1.5)
}

/// Finds the `u >= 2/sqrt 3` at which `t` is the positive root of
/// [`root_condition`], for `t > 4/sqrt 3`.
///
/// The cubic touches zero without crossing it, so it cannot be bracketed.
/// The solver brackets the equivalent `ln(u^2 / sqrt(u^2 - 1)) = ln t`
/// instead. The left side is strictly increasing on `[sqrt 2, inf)` and sits
/// below `ln t` at `sqrt 2` (value `ln 2`) and above it at `u = t`. Bisection
/// narrows the bracket and safeguarded secant steps finish it. Below `sqrt 2`
/// the same equation has a second root, but that root is less than
/// `2/sqrt 3` whenever `t > 4/sqrt 3`.
pub fn solve_shape_parameter(t: f64) -> Result<RootSolve> {
    if !(t.is_finite() && t > one_sided_junction()) {
        return Err(Error::param("t", t, "must exceed 4/sqrt(3)"));
    }
    let log_t = t.ln();
    // ln(u) - ln(t) - ln(1 - 1/u^2)/2, accurate even when u ~ t is huge
    let g = |u: f64| (u.ln() - log_t) - 0.5 * (-1.0 / (u * u)).ln_1p();

    let bracket = (std::f64::consts::SQRT_2, t);
    let (mut lo, mut hi) = bracket;
    let (mut g_lo, mut g_hi) = (g(lo), g(hi));
    if !(g_lo < 0.0 && g_hi > 0.0) {
        return Err(Error::ConvergenceFailure {
            t,
            reason: format!("no sign change on [{lo}, {hi}]: g = ({g_lo}, {g_hi})"),
        });
    }

    let mut iterations = 0;
    while hi - lo > 1e-6 * hi && iterations < MAX_ROOT_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        let g_mid = g(mid);
        if g_mid < 0.0 {
            (lo, g_lo) = (mid, g_mid);
        } else {
            (hi, g_hi) = (mid, g_mid);
        }
        iterations += 1;
    }

    let mut u = 0.5 * (lo + hi);
    while iterations < MAX_ROOT_ITERATIONS {
        iterations += 1;
        let mut next = hi - g_hi * (hi - lo) / (g_hi - g_lo);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let g_next = g(next);
        u = next;
        if g_next == 0.0 {
            break;
        }
        if g_next < 0.0 {
            (lo, g_lo) = (next, g_next);
        } else {
            (hi, g_hi) = (next, g_next);
        }
        if g_next.abs() <= 4.0 * f64::EPSILON || hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
    }

    let residual = root_condition(t, u);
    if !(residual.abs() <= ROOT_RESIDUAL_TOLERANCE * t.powi(3)) {
        return Err(Error::ConvergenceFailure {
            t,
            reason: format!("residual {residual} after {iterations} iterations"),
        });
    }
    Ok(RootSolve {
        t,
        u,
        residual,
        iterations,
        bracket,
    })
}

/// `4u^2 / (9 t^2 (u^2 - 1))`: the tail of the one-sided extremal law with
/// parameter `u`, at the point `t` paired with it.
pub fn one_sided_branch_value(t: f64, u: f64) -> f64 {
    let u2 = u * u;
    4.0 * u2 / (9.0 * t * t * (u2 - 1.0))
}

/// Upper bound on `P(X > t)` for `X` unimodal at 0 with unit variance.
///
/// For `t <= 4/sqrt 3` the value is `1 - t/(2 sqrt 3)`, attained by
/// `Uniform(0, 2 sqrt 3)`. Above the junction the value is
/// [`one_sided_branch_value`] at `u = solve_shape_parameter(t)`, attained by
/// `ExtremalDistribution::one_sided_atom_boxcar(u)`, whose mean is
/// `1/sqrt(u^2 - 1)`. That value equals the Gauss bound `4(1 + mu^2)/(9t^2)`
/// at this particular mean. It is not the supremum over all means (see
/// `verify::sweep_one_sided_unimodal`).
pub fn one_sided_tail_bound(t: f64) -> Result<BoundResult> {
    check_positive("t", t)?;
    if t <= one_sided_junction() {
        let u = 2.0 / sqrt3();
        return Ok(
            BoundResult::new(1.0 - t / (2.0 * sqrt3()), Branch::Linear, Direction::Upper)
                .with("t", t)
                .with("u", u)
                .with("mu_x", sqrt3()),
        );
    }
    let solve = solve_shape_parameter(t)?;
    let u = solve.u;
    Ok(BoundResult::new(
        one_sided_branch_value(t, u),
        Branch::Quadratic,
        Direction::Upper,
    )
    .with("t", t)
    .with("u", u)
    .with("mu_x", 1.0 / (u * u - 1.0).sqrt())
    .with("residual", solve.residual)
    .with("iterations", f64::from(solve.iterations))
    .with("bracket_lo", solve.bracket.0)
    .with("bracket_hi", solve.bracket.1))
}

/// The one-sided law attaining [`one_sided_tail_bound`] at `t`.
pub fn one_sided_extremal(t: f64) -> Result<ExtremalDistribution> {
    check_positive("t", t)?;
    if t <= one_sided_junction() {
        ExtremalDistribution::one_sided_atom_boxcar(2.0 / sqrt3())
    } else {
        ExtremalDistribution::one_sided_atom_boxcar(solve_shape_parameter(t)?.u)
    }
}

/// Largest possible `|mode|` of `(X - Y)/sqrt 2` for independent zero-mean,
/// unit-variance unimodal `X`, `Y` with one of them strongly unimodal.
/// For symmetric inputs the mode is 0, which is outside what this crate models.
pub fn difference_mode_bound() -> f64 {
    sqrt3()
}

/// Lower bound on `P(X <= Y + mu)` for independent zero-mean, unit-variance
/// unimodal `X`, `Y`, one of them strongly unimodal.
///
/// The bound is vacuous (reported as 0) for `mu < sqrt 6`, where
/// `sqrt 6 = sqrt 2 * difference_mode_bound()`.
pub fn shift_lower_bound(mu: f64) -> Result<BoundResult> {
    if !mu.is_finite() {
        return Err(Error::param("mu", mu, "must be finite"));
    }
    let root6 = 6f64.sqrt();
    let junction = shift_junction();
    let result = if mu < root6 {
        BoundResult::new(0.0, Branch::Vacuous, Direction::Lower)
    } else if mu <= junction {
        BoundResult::new(
            (mu - root6) / (2.0 * root6),
            Branch::Linear,
            Direction::Lower,
        )
    } else {
        let d = mu - root6;
        BoundResult::new(
            1.0 - 32.0 / (9.0 * d * d),
            Branch::Quadratic,
            Direction::Lower,
        )
    };
    Ok(result
        .with("mu", mu)
        .with("mode_shift", root6)
        .with("junction", junction))
}

/// Sharp upper bound on `P(X <= Y + mu)` for independent symmetric `X`, `Y`
/// with densities bounded by `b`. The bound is attained by two uniforms of
/// height `b`.
pub fn bounded_density_upper_bound(b: f64, mu: f64) -> Result<BoundResult> {
    check_positive("b", b)?;
    if !(mu.is_finite() && mu >= 0.0) {
        return Err(Error::param("mu", mu, "must be nonnegative and finite"));
    }
    let bm = b * mu;
    let result = if bm < 1.0 {
        BoundResult::new(
            bm + 0.5 * (1.0 - bm * bm),
            Branch::Quadratic,
            Direction::Upper,
        )
    } else {
        BoundResult::new(1.0, Branch::Saturated, Direction::Upper)
    };
    Ok(result.with("b", b).with("mu", mu).with("b_mu", bm))
}
