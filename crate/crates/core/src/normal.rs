//! Standard normal CDF used for the Gaussian comparison.
//!
//! `erf` is evaluated from the everywhere-convergent series
//! `erf(x) = 2/sqrt(pi) * exp(-x^2) * sum_n 2^n x^(2n+1) / (1*3*...*(2n+1))`.
//! All of its terms are positive, so there is no cancellation. The relative
//! error is a few ulp times the number of terms (at most about 120 for
//! `|x| <= 6`). Beyond `|x| = 6`, `1 - erf(x) < 2.2e-17`, and the function
//! returns `+-1`. The absolute error of [`normal_cdf`] is below `1e-14`,
//! which is checked against an independent implementation and
//! high-precision values in the tests.

const ERF_CUTOFF: f64 = 6.0;

pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.abs() >= ERF_CUTOFF {
        return x.signum();
    }
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    (2.0 / std::f64::consts::PI.sqrt() * (-x2).exp() * sum).clamp(-1.0, 1.0)
}

/// `P(Z <= z)` for a standard normal `Z`.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * (1.0 + erf(z / std::f64::consts::SQRT_2))
}
