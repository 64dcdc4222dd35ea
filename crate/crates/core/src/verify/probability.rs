//! Exact and sampled evaluation of `P(X <= Y + mu)` for independent mixtures.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::riesz::triple_overlap;
use crate::error::{Error, Result};
use crate::extremal::{BoxcarComponent, ExtremalDistribution, QuantileTable};

/// Symmetry tolerance used when an identity requires symmetric inputs.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

const SHARD_SIZE: usize = 1 << 16;

// ∫_{-inf}^{z} clamp(s - lo, 0, hi - lo) ds
fn clamped_ramp_antiderivative(z: f64, lo: f64, hi: f64) -> f64 {
    if z <= lo {
        0.0
    } else if z <= hi {
        0.5 * (z - lo) * (z - lo)
    } else {
        let w = hi - lo;
        0.5 * w * w + w * (z - hi)
    }
}

/// `P(X - Y <= mu)` for `X ~ Uniform(x)`, `Y ~ Uniform(y)`.
fn boxcar_pair(x: &BoxcarComponent, y: &BoxcarComponent, mu: f64) -> f64 {
    // area of {(s, r) in x × y : s <= r + mu}, integrating over r
    let area = clamped_ramp_antiderivative(y.hi + mu, x.lo, x.hi)
        - clamped_ramp_antiderivative(y.lo + mu, x.lo, x.hi);
    (area / (x.width() * y.width())).clamp(0.0, 1.0)
}

/// `P(X <= Y + mu)` for independent `X ~ dx`, `Y ~ dy`, by closed-form
/// integration over every pair of mixture components.
pub fn prob_leq_shift(dx: &ExtremalDistribution, dy: &ExtremalDistribution, mu: f64) -> f64 {
    let (ax, ay) = (dx.atom_weight(), dy.atom_weight());
    let mut p = 0.0;
    if ax > 0.0 && ay > 0.0 && mu >= 0.0 {
        p += ax * ay;
    }
    for cy in dy.components() {
        if ax > 0.0 {
            // 0 <= Y + mu
            p += ax * cy.weight * ((cy.hi + mu) / cy.width()).clamp(0.0, 1.0);
        }
    }
    for cx in dx.components() {
        if ay > 0.0 {
            // X <= mu
            p += ay * cx.weight * ((mu - cx.lo) / cx.width()).clamp(0.0, 1.0);
        }
        for cy in dy.components() {
            p += cx.weight * cy.weight * boxcar_pair(cx, cy, mu);
        }
    }
    p.clamp(0.0, 1.0)
}

/// Law with distribution function `(H(x) + 1 - H(-x)) / 2`: the equal
/// mixture of `X` and `-X`. Its variance is `var X + (E X)^2`.
pub fn symmetrize(d: &ExtremalDistribution) -> ExtremalDistribution {
    let mirrored = d.mirrored();
    let components = d
        .components()
        .iter()
        .chain(mirrored.components())
        .map(|c| BoxcarComponent {
            weight: 0.5 * c.weight,
            ..*c
        })
        .collect();
    ExtremalDistribution::new(d.atom_weight(), components)
        .expect("halving component weights preserves total mass")
        .canonical()
}

/// `P(|Y1 - Y0| < mu)` for symmetric atom-free laws, through the
/// triple-overlap kernel `∫∫ 1_(-mu,mu)(x) f0(x - y) f1(y)`. The kernel
/// measures `|Y0 + Y1|`, which has the same law as `|Y1 - Y0|` under symmetry.
pub fn prob_abs_difference_below(
    d0: &ExtremalDistribution,
    d1: &ExtremalDistribution,
    mu: f64,
) -> f64 {
    let window = (-mu, mu);
    let mut p = 0.0;
    for c0 in d0.components() {
        for c1 in d1.components() {
            p += c0.height() * c1.height() * triple_overlap(window, (c0.lo, c0.hi), (c1.lo, c1.hi));
        }
    }
    p.clamp(0.0, 1.0)
}

/// Both sides of `P(Y0 <= Y1 + mu) = (1 + P(|Y1 - Y0| < mu)) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReflectionCheck {
    pub direct: f64,
    pub via_abs: f64,
}

/// Evaluates the reflection identity for symmetric, atom-free `d0`, `d1` and
/// `mu >= 0`.
pub fn reflection_identity_check(
    d0: &ExtremalDistribution,
    d1: &ExtremalDistribution,
    mu: f64,
) -> Result<ReflectionCheck> {
    if !(mu.is_finite() && mu >= 0.0) {
        return Err(Error::param("mu", mu, "must be nonnegative and finite"));
    }
    for d in [d0, d1] {
        if d.has_atom() {
            return Err(Error::Precondition(
                "reflection identity needs atom-free laws".into(),
            ));
        }
        if !d.is_symmetric(SYMMETRY_TOLERANCE) {
            return Err(Error::Precondition(
                "reflection identity needs laws symmetric about 0".into(),
            ));
        }
    }
    Ok(ReflectionCheck {
        direct: prob_leq_shift(d0, d1, mu),
        via_abs: 0.5 * (1.0 + prob_abs_difference_below(d0, d1, mu)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub estimate: f64,
    /// `sqrt(max(p(1-p), 1/n) / n)`; the floor keeps the band nonzero when
    /// every draw lands on one side.
    pub stderr: f64,
    pub n: u64,
}

/// Sampled `P(X <= Y + mu)` from `n` independent pairs.
///
/// Draws are split into fixed-size shards, each on its own ChaCha stream of
/// `seed`. Counts are summed, so the result is independent of thread
/// scheduling.
pub fn monte_carlo_prob(
    dx: &ExtremalDistribution,
    dy: &ExtremalDistribution,
    mu: f64,
    n: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if n < 1000 {
        return Err(Error::Precondition(format!(
            "Monte Carlo needs at least 1000 draws, got {n}"
        )));
    }
    if !mu.is_finite() {
        return Err(Error::param("mu", mu, "must be finite"));
    }
    let (tx, ty) = (QuantileTable::new(dx), QuantileTable::new(dy));
    let shards = n.div_ceil(SHARD_SIZE);
    let hits: u64 = (0..shards)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let len = SHARD_SIZE.min(n - k * SHARD_SIZE);
            let mut hits = 0u64;
            for _ in 0..len {
                let x = tx.quantile(rand::Rng::random::<f64>(&mut rng));
                let y = ty.quantile(rand::Rng::random::<f64>(&mut rng));
                if x <= y + mu {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    let nf = n as f64;
    let p = hits as f64 / nf;
    Ok(MonteCarloEstimate {
        estimate: p,
        stderr: ((p * (1.0 - p)).max(1.0 / nf) / nf).sqrt(),
        n: n as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mixture(atom: f64, parts: &[(f64, f64, f64)]) -> ExtremalDistribution {
        ExtremalDistribution::new(
            atom,
            parts
                .iter()
                .map(|&(lo, hi, w)| BoxcarComponent::new(lo, hi, w).unwrap())
                .collect(),
        )
        .unwrap()
    }

    /// Triangular density of `U1 - U0` for `U ~ Uniform(-1/(2b), 1/(2b))`,
    /// integrated numerically by the trapezoid rule.
    fn triangular_oracle(b: f64, mu: f64) -> f64 {
        let w = 1.0 / b;
        let f = |z: f64| ((w - z.abs()) / (w * w)).max(0.0);
        let n = 200_000;
        let (lo, hi) = (-mu, w);
        if hi <= lo {
            return 0.0;
        }
        let h = (hi - lo) / n as f64;
        let mut s = 0.5 * (f(lo) + f(hi));
        for i in 1..n {
            s += f(lo + i as f64 * h);
        }
        s * h
    }

    #[test]
    fn uniform_pair_examples() {
        let u = ExtremalDistribution::uniform_bounded_density(1.0).unwrap();
        assert!((prob_leq_shift(&u, &u, 0.5) - 0.875).abs() < 1e-15);
        assert!((triangular_oracle(1.0, 0.5) - 0.875).abs() < 1e-8);
        assert!((prob_leq_shift(&u, &u, 0.0) - 0.5).abs() < 1e-15);
        assert_eq!(prob_leq_shift(&u, &u, 1.0), 1.0);
        assert_eq!(prob_leq_shift(&u, &u, 5.0), 1.0);
        assert_eq!(prob_leq_shift(&u, &u, -5.0), 0.0);
        for &(b, mu) in &[(0.7, 0.2), (2.0, 0.1), (1.3, 0.6)] {
            let d = ExtremalDistribution::uniform_bounded_density(b).unwrap();
            assert!((prob_leq_shift(&d, &d, mu) - triangular_oracle(b, mu)).abs() < 1e-8);
        }
    }

    #[test]
    fn atoms_are_exact() {
        let point = mixture(1.0, &[]);
        assert_eq!(prob_leq_shift(&point, &point, 0.0), 1.0);
        assert_eq!(prob_leq_shift(&point, &point, -1e-300), 0.0);
        let flat = ExtremalDistribution::flat_unit_variance();
        assert!((prob_leq_shift(&point, &flat, 0.0) - 0.5).abs() < 1e-15);
        assert!((prob_leq_shift(&flat, &point, 0.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn complement_identity() {
        // P(X <= Y + mu) + P(Y < X - mu) = 1, and for atom-free laws
        // P(Y < X - mu) = P(Y <= X - mu)
        let x = mixture(0.0, &[(-1.0, 2.0, 0.4), (0.5, 3.0, 0.6)]);
        let y = mixture(0.0, &[(-2.0, 0.0, 0.7), (1.0, 1.5, 0.3)]);
        for k in -20..20 {
            let mu = 0.25 * k as f64;
            let s = prob_leq_shift(&x, &y, mu) + prob_leq_shift(&y, &x, -mu);
            assert!((s - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn symmetrize_properties() {
        for &u in &[1.2, 2.0, 3.0, 9.0] {
            let d = ExtremalDistribution::one_sided_atom_boxcar(u).unwrap();
            let s = symmetrize(&d);
            assert!(s.mean().abs() < 1e-15);
            assert!((s.variance() - u * u / (u * u - 1.0)).abs() < 1e-12);
            assert!((s.variance() - (d.variance() + d.mean().powi(2))).abs() < 1e-12);
            assert!(s.is_symmetric(1e-14));
        }
        let flat = ExtremalDistribution::flat_unit_variance();
        assert_eq!(symmetrize(&flat), flat.canonical());
        let pair = mixture(0.2, &[(-2.0, -1.0, 0.4), (1.0, 2.0, 0.4)]);
        assert_eq!(symmetrize(&pair), pair.canonical());
    }

    #[test]
    fn reflection_examples() {
        let u = ExtremalDistribution::uniform_bounded_density(1.0).unwrap();
        let r = reflection_identity_check(&u, &u, 0.5).unwrap();
        assert!((r.direct - 0.875).abs() < 1e-15 && (r.via_abs - 0.875).abs() < 1e-15);
        let r = reflection_identity_check(&u, &u, 0.0).unwrap();
        assert_eq!((r.direct, r.via_abs), (0.5, 0.5));
        let r = reflection_identity_check(&u, &u, 10.0).unwrap();
        assert_eq!((r.direct, r.via_abs), (1.0, 1.0));

        let skew = ExtremalDistribution::one_sided_atom_boxcar(2.0 / 3f64.sqrt()).unwrap();
        assert!(reflection_identity_check(&skew, &u, 0.5).is_err());
        let atom = ExtremalDistribution::symmetric_atom_boxcar(2.0).unwrap();
        assert!(reflection_identity_check(&atom, &u, 0.5).is_err());
        assert!(reflection_identity_check(&u, &u, -0.5).is_err());
    }

    #[test]
    fn monte_carlo_uniform_pair() {
        let u = ExtremalDistribution::uniform_bounded_density(1.0).unwrap();
        let mc = monte_carlo_prob(&u, &u, 0.5, 10_000_000, 3).unwrap();
        assert!((mc.estimate - 0.875).abs() < 0.0005, "{mc:?}");
        let mc0 = monte_carlo_prob(&u, &u, 0.0, 1_000_000, 5).unwrap();
        assert!((mc0.estimate - 0.5).abs() < 3.0 * mc0.stderr);
        assert_eq!(mc0, monte_carlo_prob(&u, &u, 0.0, 1_000_000, 5).unwrap());
        assert!(monte_carlo_prob(&u, &u, 0.0, 999, 5).is_err());
    }
}
