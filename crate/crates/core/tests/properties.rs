use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rocbounds::bounds::{bounded_density_upper_bound, one_sided_tail_bound, shift_lower_bound};
use rocbounds::roc::{auc_mann_whitney, roc_curve};
use rocbounds::verify::random::{random_mixture, random_symmetric_mixture};
use rocbounds::verify::{
    monte_carlo_prob, prob_leq_shift, riesz_check, run_suite, sweep_one_sided_unimodal,
    sweep_symmetric_unimodal, symmetrize, IntervalSet, Suite, SuiteConfig, SweepGrid, SweepReport,
};
use rocbounds::{
    BoundResult, BoxcarComponent, ClassLabel, EmpiricalSample, ExtremalDistribution, RocCurve,
};

fn seeded_mixture() -> impl Strategy<Value = ExtremalDistribution> {
    any::<u64>().prop_map(|s| random_mixture(&mut ChaCha8Rng::seed_from_u64(s)))
}

fn seeded_symmetric() -> impl Strategy<Value = ExtremalDistribution> {
    any::<u64>().prop_map(|s| random_symmetric_mixture(&mut ChaCha8Rng::seed_from_u64(s)))
}

fn interval_union() -> impl Strategy<Value = IntervalSet> {
    prop::collection::vec((-5.0f64..5.0, 0.01f64..3.0), 1..5).prop_map(|v| {
        IntervalSet::new(v.into_iter().map(|(lo, w)| (lo, lo + w)).collect()).unwrap()
    })
}

/// `∫ x^k f(x) dx` plus the atom, by Simpson's rule between consecutive
/// breakpoints. The density is constant there, so the rule is exact for
/// `k <= 3`; it only sees `density()`.
fn moment_by_quadrature(d: &ExtremalDistribution, k: i32) -> f64 {
    let knots = d.knots();
    let mut m = 0.0;
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mid = 0.5 * (a + b);
        let f = d.density(mid);
        m += (b - a) / 6.0 * f * (a.powi(k) + 4.0 * mid.powi(k) + b.powi(k));
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn prob_leq_shift_is_a_monotone_probability(
        dx in seeded_mixture(), dy in seeded_mixture(), mu in -6.0f64..6.0, step in 0.0f64..2.0,
    ) {
        let p = prob_leq_shift(&dx, &dy, mu);
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert!(prob_leq_shift(&dx, &dy, mu + step) >= p - 1e-12);
    }

    #[test]
    fn symmetric_pairs_give_one_half_at_zero(d0 in seeded_symmetric(), d1 in seeded_symmetric()) {
        prop_assert!((prob_leq_shift(&d0, &d1, 0.0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn symmetrize_adds_squared_mean_to_variance(d in seeded_mixture()) {
        let s = symmetrize(&d);
        let second = moment_by_quadrature(&s, 2);
        let first = moment_by_quadrature(&s, 1);
        prop_assert!(first.abs() < 1e-12);
        let expected = d.variance() + d.mean().powi(2);
        prop_assert!((second - expected).abs() < 1e-10, "{} vs {}", second, expected);
    }

    #[test]
    fn rearrangement_never_decreases_the_integral(
        a in interval_union(), b in interval_union(), c in interval_union(),
    ) {
        let r = riesz_check(&a, &b, &c);
        prop_assert!(r.lhs >= 0.0);
        prop_assert!(r.lhs <= r.rhs + 1e-10, "{:?}", r);
    }

    #[test]
    fn centred_intervals_are_equality_cases(
        ra in 0.01f64..4.0, rb in 0.01f64..4.0, rc in 0.01f64..4.0,
    ) {
        let centred = |r: f64| IntervalSet::interval(-r, r).unwrap();
        let r = riesz_check(&centred(ra), &centred(rb), &centred(rc));
        prop_assert!((r.lhs - r.rhs).abs() <= 1e-15 * (1.0 + r.rhs));
    }

    #[test]
    fn uniforms_attain_bounded_density_bound(b in 0.05f64..20.0, frac in 0.0f64..1.0) {
        let mu = frac / b;
        let d = ExtremalDistribution::uniform_bounded_density(b).unwrap();
        let bound = bounded_density_upper_bound(b, mu).unwrap().value;
        prop_assert!((prob_leq_shift(&d, &d, mu) - bound).abs() <= 1e-10);
    }

    #[test]
    fn json_round_trips(
        d in seeded_mixture(), t in 0.1f64..30.0, mu in -2.0f64..12.0,
        values in prop::collection::vec(-1e6f64..1e6, 1..30),
    ) {
        let back: ExtremalDistribution = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
        prop_assert_eq!(back, d);
        for r in [one_sided_tail_bound(t).unwrap(), shift_lower_bound(mu).unwrap()] {
            let back: BoundResult = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
            prop_assert_eq!(back, r);
        }
        let s0 = EmpiricalSample::new(values.clone(), ClassLabel::Class0).unwrap();
        let s1 = EmpiricalSample::new(values.iter().map(|v| v * 0.5 + 1.0).collect(), ClassLabel::Class1).unwrap();
        let curve = roc_curve(&s0, &s1);
        let back: RocCurve = serde_json::from_str(&serde_json::to_string(&curve).unwrap()).unwrap();
        prop_assert_eq!(back, curve);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn sweep_refinement_never_widens_gap(t in 0.2f64..15.0, points in 20usize..80) {
        let coarse = SweepGrid::with_points(points);
        let fine = coarse.refined();
        let a = sweep_symmetric_unimodal(t, &coarse).unwrap();
        let b = sweep_symmetric_unimodal(t, &fine).unwrap();
        prop_assert!(b.gap <= a.gap);
        prop_assert!(a.gap >= -1e-8);
        let a = sweep_one_sided_unimodal(t, &coarse).unwrap();
        let b = sweep_one_sided_unimodal(t, &fine).unwrap();
        prop_assert!(b.gap <= a.gap);
        let back: SweepReport = serde_json::from_str(&serde_json::to_string(&b).unwrap()).unwrap();
        prop_assert_eq!(back, b);
    }
}

#[test]
fn exact_and_sampled_probabilities_agree_on_fifty_configs() {
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    for _ in 0..50 {
        let dx = random_mixture(&mut rng);
        let dy = random_mixture(&mut rng);
        let mu = rng.random_range(-2.0..2.0);
        let exact = prob_leq_shift(&dx, &dy, mu);
        let mc = monte_carlo_prob(&dx, &dy, mu, 200_000, rng.random()).unwrap();
        assert!(
            (mc.estimate - exact).abs() <= 4.0 * mc.stderr,
            "{dx:?} {dy:?} {mu}: {mc:?} vs {exact}"
        );
    }
}

#[test]
fn boxcar_pair_against_brute_force_grid() {
    // P(X <= Y + mu) by a 2-D midpoint grid over two boxcars
    let x = BoxcarComponent::new(-0.3, 1.7, 1.0).unwrap();
    let y = BoxcarComponent::new(0.2, 0.9, 1.0).unwrap();
    let dx = ExtremalDistribution::new(0.0, vec![x]).unwrap();
    let dy = ExtremalDistribution::new(0.0, vec![y]).unwrap();
    let n = 2000;
    for mu in [-1.0, 0.0, 0.35, 0.8, 2.0] {
        let mut hits = 0u64;
        for i in 0..n {
            let xv = x.lo + (i as f64 + 0.5) * x.width() / n as f64;
            for j in 0..n {
                let yv = y.lo + (j as f64 + 0.5) * y.width() / n as f64;
                hits += u64::from(xv <= yv + mu);
            }
        }
        let grid = hits as f64 / (n * n) as f64;
        assert!(
            (prob_leq_shift(&dx, &dy, mu) - grid).abs() < 1e-3,
            "mu = {mu}"
        );
    }
}

#[test]
fn auc_of_tie_free_samples_matches_trapezoid() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let n0 = rng.random_range(1..200);
        let n1 = rng.random_range(1..200);
        let s0: Vec<f64> = (0..n0).map(|_| rng.random::<f64>()).collect();
        let s1: Vec<f64> = (0..n1).map(|_| rng.random::<f64>() + 0.2).collect();
        let a = EmpiricalSample::new(s0, ClassLabel::Class0).unwrap();
        let b = EmpiricalSample::new(s1, ClassLabel::Class1).unwrap();
        assert_eq!(auc_mann_whitney(&a, &b), roc_curve(&a, &b).auc_trapezoid);
    }
}

#[test]
fn default_sweep_suite_reports_every_target() {
    let config = SuiteConfig {
        grid: 101,
        ..SuiteConfig::default()
    };
    let out = run_suite(Suite::Sweeps, &config).unwrap();
    assert_eq!(out.len(), 14);
    let symmetric_ok = out
        .iter()
        .filter(|o| o.name.starts_with("symmetric"))
        .all(|o| o.observed >= -1e-8);
    assert!(symmetric_ok);
}
