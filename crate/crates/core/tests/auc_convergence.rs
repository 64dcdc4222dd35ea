//! Mann-Whitney AUC of samples drawn from extremal laws converges to the
//! exact `P(X <= Y + mu)`.

use rocbounds::bounds::{one_sided_extremal, symmetric_unimodal_extremal};
use rocbounds::roc::auc_mann_whitney;
use rocbounds::verify::prob_leq_shift;
use rocbounds::{ClassLabel, EmpiricalSample, ExtremalDistribution};

const N: usize = 1_000_000;

fn check(dx: &ExtremalDistribution, dy: &ExtremalDistribution, mu: f64, seed: u64) {
    let x = dx.sample(N, seed);
    let y: Vec<f64> = dy.sample(N, seed + 1).into_iter().map(|v| v + mu).collect();
    let s0 = EmpiricalSample::new(x, ClassLabel::Class0).unwrap();
    let s1 = EmpiricalSample::new(y, ClassLabel::Class1).unwrap();
    let auc = auc_mann_whitney(&s0, &s1);
    let exact = prob_leq_shift(dx, dy, mu);
    // Var of the two-sample U statistic is at most p(1 - p) / min(n0, n1)
    let sigma = (exact * (1.0 - exact) / N as f64).sqrt();
    assert!(
        (auc - exact).abs() <= 3.0 * sigma,
        "mu = {mu}: auc {auc} exact {exact} sigma {sigma}"
    );
}

#[test]
fn symmetric_atom_laws() {
    let d = symmetric_unimodal_extremal(2.0).unwrap();
    check(&d, &d, 0.7, 1);
}

#[test]
fn one_sided_against_symmetric() {
    let dx = one_sided_extremal(3.18198).unwrap();
    let dy = symmetric_unimodal_extremal(3.0).unwrap();
    check(&dx, &dy, 0.4, 11);
    check(&dy, &dx, -0.2, 21);
}

#[test]
fn bounded_density_uniforms() {
    let d = ExtremalDistribution::uniform_bounded_density(1.0).unwrap();
    check(&d, &d, 0.5, 31);
}
