//! Named property suites with machine-readable pass/fail outcomes.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::probability::{monte_carlo_prob, prob_leq_shift, reflection_identity_check};
use super::random::{
    random_interval_set, random_mixture, random_symmetric_mixture, random_tie_free_pair,
};
use super::riesz::{riesz_check, IntervalSet};
use super::sweep::{sweep_one_sided_unimodal, sweep_symmetric_unimodal, SweepGrid, SweepReport};
use crate::bounds::{
    bounded_density_upper_bound, gauss_tail_bound, one_sided_branch_value, one_sided_extremal,
    one_sided_junction, one_sided_tail_bound, shift_junction, shift_lower_bound,
    symmetric_junction, symmetric_unimodal_extremal, symmetric_unimodal_tail_bound,
    two_sided_unimodal_bound, BoundResult,
};
use crate::error::{Error, Result};
use crate::extremal::{ExtremalDistribution, TailConvention};
use crate::roc::{auc_mann_whitney, roc_curve, ClassLabel, EmpiricalSample};

pub const CONTINUITY_TOLERANCE: f64 = 1e-12;
pub const SYMMETRIC_SHARPNESS_TOLERANCE: f64 = 1e-10;
pub const ONE_SIDED_SHARPNESS_TOLERANCE: f64 = 1e-8;
pub const BOUNDED_DENSITY_SHARPNESS_TOLERANCE: f64 = 1e-10;
pub const SWEEP_GAP_TOLERANCE: f64 = 1e-3;
pub const SWEEP_EXCESS_TOLERANCE: f64 = 1e-8;
pub const RIESZ_TOLERANCE: f64 = 1e-10;
pub const REFLECTION_TOLERANCE: f64 = 1e-9;
pub const MONTE_CARLO_SIGMAS: f64 = 4.0;
pub const BAMBER_TOLERANCE: f64 = 1e-12;

/// Targets swept when no `t` is given.
pub const DEFAULT_SWEEP_TARGETS: [f64; 7] = [0.5, 1.0, 2.0, 3.18198, 5.0, 10.0, 20.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Continuity,
    Sharpness,
    Riesz,
    Reflection,
    Sweeps,
    Montecarlo,
    Bamber,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Continuity,
        Suite::Sharpness,
        Suite::Riesz,
        Suite::Reflection,
        Suite::Sweeps,
        Suite::Montecarlo,
        Suite::Bamber,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Continuity => "continuity",
            Suite::Sharpness => "sharpness",
            Suite::Riesz => "riesz",
            Suite::Reflection => "reflection",
            Suite::Sweeps => "sweeps",
            Suite::Montecarlo => "montecarlo",
            Suite::Bamber => "bamber",
        }
    }

    fn default_cases(self) -> usize {
        match self {
            Suite::Riesz => 1000,
            Suite::Bamber => 100,
            Suite::Sharpness => 50,
            Suite::Reflection | Suite::Montecarlo => 20,
            Suite::Continuity | Suite::Sweeps => 0,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                Error::Precondition(format!(
                    "unknown suite '{s}'; expected one of {}",
                    Suite::ALL.map(Suite::name).join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    /// Restricts sharpness and sweep checks to this target.
    pub t: Option<f64>,
    pub grid: usize,
    /// Monte Carlo draws per configuration.
    pub n: usize,
    pub seed: u64,
    /// Overrides the per-suite number of random cases.
    pub cases: Option<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            t: None,
            grid: SweepGrid::default().points,
            n: 1_000_000,
            seed: 0,
            cases: None,
        }
    }
}

impl SuiteConfig {
    fn cases(&self, suite: Suite) -> usize {
        self.cases.unwrap_or_else(|| suite.default_cases())
    }

    fn rng(&self, suite: Suite) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(suite as u64);
        rng
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyOutcome {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    /// Worst observed discrepancy, in the units of `tolerance`.
    pub observed: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl PropertyOutcome {
    fn at_most(suite: Suite, name: impl Into<String>, observed: f64, tolerance: f64) -> Self {
        PropertyOutcome {
            suite,
            name: name.into(),
            // NaN fails
            passed: observed <= tolerance,
            observed,
            tolerance,
            detail: String::new(),
        }
    }

    fn detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

/// Runs `suites` in the given order.
pub fn run_suites(suites: &[Suite], config: &SuiteConfig) -> Result<Vec<PropertyOutcome>> {
    let mut out = Vec::new();
    for &suite in suites {
        out.extend(run_suite(suite, config)?);
    }
    Ok(out)
}

pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Result<Vec<PropertyOutcome>> {
    if let Some(t) = config.t {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::param("t", t, "must be positive and finite"));
        }
    }
    match suite {
        Suite::Continuity => continuity(),
        Suite::Sharpness => sharpness(config),
        Suite::Riesz => Ok(riesz(config)),
        Suite::Reflection => reflection(config),
        Suite::Sweeps => sweeps(config),
        Suite::Montecarlo => montecarlo(config),
        Suite::Bamber => bamber(config),
    }
}

/// Values of `f` on either side of `at`, one ulp away.
fn straddle(
    name: &str,
    at: f64,
    f: impl Fn(f64) -> Result<BoundResult>,
) -> Result<PropertyOutcome> {
    let left = f(at.next_down())?;
    let right = f(at.next_up())?;
    let diff = (left.value - right.value).abs();
    let detail = format!(
        "{:?} {} | {:?} {}",
        left.branch, left.value, right.branch, right.value
    );
    let mut outcome = PropertyOutcome::at_most(Suite::Continuity, name, diff, CONTINUITY_TOLERANCE)
        .detail(detail);
    if left.branch == right.branch {
        outcome.passed = false;
        outcome.detail.push_str(" (no branch change)");
    }
    Ok(outcome)
}

fn continuity() -> Result<Vec<PropertyOutcome>> {
    let mut out = vec![
        straddle("gauss crossover s = 2/sqrt(3)", symmetric_junction(), |s| {
            gauss_tail_bound(s, 1.0)
        })?,
        straddle(
            "symmetric unimodal tail at t = 2/sqrt(3)",
            symmetric_junction(),
            symmetric_unimodal_tail_bound,
        )?,
        straddle(
            "two-sided unimodal tail at t = 2/sqrt(3)",
            symmetric_junction(),
            |t| two_sided_unimodal_bound(t, 0.0),
        )?,
        straddle(
            "one-sided unimodal tail at t = 4/sqrt(3)",
            one_sided_junction(),
            one_sided_tail_bound,
        )?,
        straddle(
            "shift lower bound at mu = sqrt(6) + 4 sqrt(2/3)",
            shift_junction(),
            shift_lower_bound,
        )?,
        straddle("bounded density at b mu = 1", 1.0, |mu| {
            bounded_density_upper_bound(1.0, mu)
        })?,
    ];

    // the quadratic-branch formula evaluated at the shape parameter of the
    // flat law, rather than at the solver's root
    let j = one_sided_junction();
    let linear = 1.0 - j / (2.0 * 3f64.sqrt());
    let paired = one_sided_branch_value(j, 2.0 / 3f64.sqrt());
    out.push(
        PropertyOutcome::at_most(
            Suite::Continuity,
            "one-sided quadratic formula at (t, u) = (4/sqrt(3), 2/sqrt(3))",
            (linear - paired).abs(),
            CONTINUITY_TOLERANCE,
        )
        .detail(format!("linear {linear} | quadratic {paired}")),
    );
    Ok(out)
}

/// `n` points spread over `(lo, hi]`.
fn open_closed_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (1..=n)
        .map(|i| lo + (hi - lo) * i as f64 / n as f64)
        .collect()
}

fn worst_gap(
    ts: &[f64],
    bound: impl Fn(f64) -> Result<f64>,
    attained: impl Fn(f64) -> Result<f64>,
) -> Result<(f64, f64)> {
    let mut worst = (0.0, f64::NAN);
    for &t in ts {
        let gap = (bound(t)? - attained(t)?).abs();
        if !(gap <= worst.0) {
            worst = (gap, t);
        }
    }
    Ok(worst)
}

fn sharpness(config: &SuiteConfig) -> Result<Vec<PropertyOutcome>> {
    let n = config.cases(Suite::Sharpness);
    let (sym_ts, one_ts) = match config.t {
        Some(t) => (vec![t], vec![t]),
        None => (
            open_closed_grid(symmetric_junction(), 20.0, n),
            open_closed_grid(one_sided_junction(), 20.0, n),
        ),
    };
    let (sym, sym_at) = worst_gap(
        &sym_ts,
        |t| Ok(symmetric_unimodal_tail_bound(t)?.value),
        |t| Ok(symmetric_unimodal_extremal(t)?.tail_prob_with(t, TailConvention::Ge)),
    )?;
    let (one, one_at) = worst_gap(
        &one_ts,
        |t| Ok(one_sided_tail_bound(t)?.value),
        |t| Ok(one_sided_extremal(t)?.tail_prob_with(t, TailConvention::Gt)),
    )?;
    let mut out = vec![
        PropertyOutcome::at_most(
            Suite::Sharpness,
            "symmetric unimodal bound attained",
            sym,
            SYMMETRIC_SHARPNESS_TOLERANCE,
        )
        .detail(format!("{} targets, worst at t = {sym_at}", sym_ts.len())),
        PropertyOutcome::at_most(
            Suite::Sharpness,
            "one-sided unimodal bound attained",
            one,
            ONE_SIDED_SHARPNESS_TOLERANCE,
        )
        .detail(format!("{} targets, worst at t = {one_at}", one_ts.len())),
    ];
    if config.t.is_none() {
        let bms = open_closed_grid(0.0, 1.0, n + 1);
        let (bd, bd_at) = worst_gap(
            &bms[..n],
            |bm| Ok(bounded_density_upper_bound(1.0, bm)?.value),
            |bm| {
                let u = ExtremalDistribution::uniform_bounded_density(1.0)?;
                Ok(prob_leq_shift(&u, &u, bm))
            },
        )?;
        out.push(
            PropertyOutcome::at_most(
                Suite::Sharpness,
                "bounded-density bound attained by uniforms",
                bd,
                BOUNDED_DENSITY_SHARPNESS_TOLERANCE,
            )
            .detail(format!("{n} values of b mu, worst at {bd_at}")),
        );
    }
    Ok(out)
}

fn riesz(config: &SuiteConfig) -> Vec<PropertyOutcome> {
    let cases = config.cases(Suite::Riesz);
    let mut rng = config.rng(Suite::Riesz);
    let mut worst = f64::NEG_INFINITY;
    let mut held = 0;
    for _ in 0..cases {
        let (a, b, c) = (
            random_interval_set(&mut rng),
            random_interval_set(&mut rng),
            random_interval_set(&mut rng),
        );
        let r = riesz_check(&a, &b, &c);
        worst = worst.max(r.lhs - r.rhs);
        if r.holds(RIESZ_TOLERANCE) {
            held += 1;
        }
    }
    let unit = IntervalSet::interval(0.0, 1.0).expect("unit interval");
    let hand = riesz_check(&unit, &unit, &unit);
    let hand_err = (hand.lhs - 0.5).abs().max((hand.rhs - 0.75).abs());
    vec![
        PropertyOutcome {
            suite: Suite::Riesz,
            name: "lhs <= rhs on random interval unions".into(),
            passed: held == cases,
            observed: if cases == 0 { 0.0 } else { worst },
            tolerance: RIESZ_TOLERANCE,
            detail: format!("{held}/{cases} cases lhs <= rhs"),
        },
        PropertyOutcome::at_most(Suite::Riesz, "A = B = C = (0, 1)", hand_err, 1e-15)
            .detail(format!("lhs {} rhs {}", hand.lhs, hand.rhs)),
    ]
}

fn reflection(config: &SuiteConfig) -> Result<Vec<PropertyOutcome>> {
    let cases = config.cases(Suite::Reflection);
    let mut rng = config.rng(Suite::Reflection);
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let d0 = random_symmetric_mixture(&mut rng);
        let d1 = random_symmetric_mixture(&mut rng);
        let mu = rng.random_range(0.0..4.0);
        let r = reflection_identity_check(&d0, &d1, mu)?;
        worst = worst.max((r.direct - r.via_abs).abs());
    }
    Ok(vec![PropertyOutcome::at_most(
        Suite::Reflection,
        "P(Y0 <= Y1 + mu) = (1 + P(|Y1 - Y0| < mu)) / 2",
        worst,
        REFLECTION_TOLERANCE,
    )
    .detail(format!("{cases} symmetric atom-free configurations"))])
}

fn sweep_outcome(label: &str, coarse: &SweepReport, fine: &SweepReport) -> PropertyOutcome {
    let excess = -coarse.gap.min(fine.gap);
    let refined_ok = fine.best_value >= coarse.best_value;
    let passed =
        coarse.gap <= SWEEP_GAP_TOLERANCE && excess <= SWEEP_EXCESS_TOLERANCE && refined_ok;
    PropertyOutcome {
        suite: Suite::Sweeps,
        name: format!("{label} sweep at t = {}", coarse.target),
        passed,
        observed: coarse.gap,
        tolerance: SWEEP_GAP_TOLERANCE,
        detail: format!(
            "bound {} best {} ({:?}); refined gap {}; max excess {excess}",
            coarse.bound_value, coarse.best_value, coarse.best_family, fine.gap
        ),
    }
}

fn sweeps(config: &SuiteConfig) -> Result<Vec<PropertyOutcome>> {
    let targets = match config.t {
        Some(t) => vec![t],
        None => DEFAULT_SWEEP_TARGETS.to_vec(),
    };
    let grid = SweepGrid::with_points(config.grid);
    let fine = grid.refined();
    let mut out = Vec::new();
    for &t in &targets {
        out.push(sweep_outcome(
            "symmetric unimodal",
            &sweep_symmetric_unimodal(t, &grid)?,
            &sweep_symmetric_unimodal(t, &fine)?,
        ));
    }
    for &t in &targets {
        out.push(sweep_outcome(
            "one-sided unimodal",
            &sweep_one_sided_unimodal(t, &grid)?,
            &sweep_one_sided_unimodal(t, &fine)?,
        ));
    }
    Ok(out)
}

fn montecarlo(config: &SuiteConfig) -> Result<Vec<PropertyOutcome>> {
    let cases = config.cases(Suite::Montecarlo);
    let mut rng = config.rng(Suite::Montecarlo);
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let dx = random_mixture(&mut rng);
        let dy = random_mixture(&mut rng);
        let mu = rng.random_range(-2.0..2.0);
        let seed = rng.random::<u64>();
        let exact = prob_leq_shift(&dx, &dy, mu);
        let mc = monte_carlo_prob(&dx, &dy, mu, config.n, seed)?;
        worst = worst.max((mc.estimate - exact).abs() / mc.stderr);
    }
    Ok(vec![PropertyOutcome::at_most(
        Suite::Montecarlo,
        "sampled P(X <= Y + mu) within 4 standard errors of exact",
        worst,
        MONTE_CARLO_SIGMAS,
    )
    .detail(format!(
        "{cases} configurations, n = {} each",
        config.n
    ))])
}

fn bamber(config: &SuiteConfig) -> Result<Vec<PropertyOutcome>> {
    let cases = config.cases(Suite::Bamber);
    let mut rng = config.rng(Suite::Bamber);
    let (mut identity, mut swap): (f64, f64) = (0.0, 0.0);
    for _ in 0..cases {
        let (v0, v1) = random_tie_free_pair(&mut rng, 500);
        let s0 = EmpiricalSample::new(v0.clone(), ClassLabel::Class0)?;
        let s1 = EmpiricalSample::new(v1.clone(), ClassLabel::Class1)?;
        let mw = auc_mann_whitney(&s0, &s1);
        identity = identity.max((mw - roc_curve(&s0, &s1).auc_trapezoid).abs());
        let r0 = EmpiricalSample::new(v1, ClassLabel::Class0)?;
        let r1 = EmpiricalSample::new(v0, ClassLabel::Class1)?;
        swap = swap.max((mw + auc_mann_whitney(&r0, &r1) - 1.0).abs());
    }
    Ok(vec![
        PropertyOutcome::at_most(
            Suite::Bamber,
            "Mann-Whitney AUC equals ROC trapezoid area",
            identity,
            BAMBER_TOLERANCE,
        )
        .detail(format!("{cases} tie-free sample pairs")),
        PropertyOutcome::at_most(
            Suite::Bamber,
            "label-swapped AUCs sum to 1",
            swap,
            BAMBER_TOLERANCE,
        )
        .detail(format!("{cases} tie-free sample pairs")),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn find<'a>(outcomes: &'a [PropertyOutcome], prefix: &str) -> &'a PropertyOutcome {
        outcomes
            .iter()
            .find(|o| o.name.starts_with(prefix))
            .unwrap_or_else(|| panic!("no outcome named {prefix}"))
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
            assert_eq!(serde_json::to_string(&s).unwrap(), format!("\"{s}\""));
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn continuity_outcomes() {
        let out = continuity().unwrap();
        for prefix in [
            "gauss",
            "symmetric unimodal",
            "two-sided",
            "shift",
            "bounded density",
            "one-sided quadratic formula",
        ] {
            assert!(find(&out, prefix).passed, "{:?}", find(&out, prefix));
        }
        // the solver's root jumps to u = 2 just above the junction, where the
        // quadratic branch is 1/9
        let one = find(&out, "one-sided unimodal tail");
        assert!(!one.passed);
        assert!((one.observed - (1.0 / 3.0 - 1.0 / 9.0)).abs() < 1e-6);
    }

    #[test]
    fn small_random_suites_pass() {
        let config = SuiteConfig {
            n: 100_000,
            cases: Some(20),
            seed: 9,
            ..SuiteConfig::default()
        };
        let out = run_suites(
            &[
                Suite::Riesz,
                Suite::Reflection,
                Suite::Montecarlo,
                Suite::Bamber,
            ],
            &config,
        )
        .unwrap();
        assert_eq!(out.len(), 6);
        for o in &out {
            assert!(o.passed, "{o:?}");
        }
        assert_eq!(
            out,
            run_suites(
                &[
                    Suite::Riesz,
                    Suite::Reflection,
                    Suite::Montecarlo,
                    Suite::Bamber
                ],
                &config
            )
            .unwrap()
        );
    }

    #[test]
    fn sharpness_at_single_target() {
        let config = SuiteConfig {
            t: Some(3.18198),
            ..SuiteConfig::default()
        };
        let out = run_suite(Suite::Sharpness, &config).unwrap();
        assert_eq!(out.len(), 2);
        assert!(out.iter().all(|o| o.passed), "{out:?}");
    }
}
