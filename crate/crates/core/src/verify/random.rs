//! Random test configurations for the property suites.

use rand::Rng;

use super::riesz::IntervalSet;
use crate::extremal::{BoxcarComponent, ExtremalDistribution};

fn normalized(raw: &[f64]) -> Vec<f64> {
    let total: f64 = raw.iter().sum();
    raw.iter().map(|w| w / total).collect()
}

/// Atom at 0 with probability 0.3, plus one to three boxcars with left ends in
/// `[-3, 3]` and widths in `[0.1, 4]`.
pub fn random_mixture<R: Rng + ?Sized>(rng: &mut R) -> ExtremalDistribution {
    let k = rng.random_range(1..=3);
    let with_atom = rng.random_bool(0.3);
    let mut raw: Vec<f64> = (0..k + usize::from(with_atom))
        .map(|_| rng.random_range(0.05..1.0))
        .collect();
    raw = normalized(&raw);
    let atom = if with_atom {
        raw.pop().unwrap_or(0.0)
    } else {
        0.0
    };
    let components = raw
        .into_iter()
        .map(|w| {
            let lo = rng.random_range(-3.0..3.0);
            let width = rng.random_range(0.1..4.0);
            BoxcarComponent::new(lo, lo + width, w).expect("positive width and weight")
        })
        .collect();
    ExtremalDistribution::new(atom, components).expect("normalised weights")
}

/// Atom-free law symmetric about 0: each piece is either a centred boxcar
/// `(-a, a)` or a mirrored pair `(-hi, -lo) ∪ (lo, hi)` with equal weights.
pub fn random_symmetric_mixture<R: Rng + ?Sized>(rng: &mut R) -> ExtremalDistribution {
    let k = rng.random_range(1..=3);
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
    let mut components = Vec::new();
    for w in normalized(&raw) {
        if rng.random_bool(0.5) {
            let a = rng.random_range(0.1..3.0);
            components.push(BoxcarComponent::new(-a, a, w).expect("valid boxcar"));
        } else {
            let lo = rng.random_range(0.0..2.0);
            let hi = lo + rng.random_range(0.1..2.0);
            components.push(BoxcarComponent::new(lo, hi, 0.5 * w).expect("valid boxcar"));
            components.push(BoxcarComponent::new(-hi, -lo, 0.5 * w).expect("valid boxcar"));
        }
    }
    ExtremalDistribution::new(0.0, components).expect("normalised weights")
}

/// One to four intervals with left ends in `[-5, 5]` and widths in
/// `[0.01, 3]`.
pub fn random_interval_set<R: Rng + ?Sized>(rng: &mut R) -> IntervalSet {
    let k = rng.random_range(1..=4);
    let intervals = (0..k)
        .map(|_| {
            let lo = rng.random_range(-5.0..5.0);
            (lo, lo + rng.random_range(0.01..3.0))
        })
        .collect();
    IntervalSet::new(intervals).expect("finite nonempty intervals")
}

/// Two samples of sizes in `1..=max_len` with no value repeated across or
/// within them.
pub fn random_tie_free_pair<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> (Vec<f64>, Vec<f64>) {
    let n0 = rng.random_range(1..=max_len);
    let n1 = rng.random_range(1..=max_len);
    let shift = rng.random_range(-1.0..1.0);
    loop {
        let s0: Vec<f64> = (0..n0).map(|_| rng.random_range(-1.0..1.0)).collect();
        let s1: Vec<f64> = (0..n1)
            .map(|_| rng.random_range(-1.0..1.0) + shift)
            .collect();
        let mut all: Vec<f64> = s0.iter().chain(&s1).copied().collect();
        all.sort_by(f64::total_cmp);
        if all.windows(2).all(|w| w[0] != w[1]) {
            return (s0, s1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_objects_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let d = random_mixture(&mut rng);
            assert!((d.cdf(100.0) - 1.0).abs() < 1e-12);
            let s = random_symmetric_mixture(&mut rng);
            assert!(!s.has_atom());
            assert!(s.is_symmetric(1e-12));
            assert!(s.mean().abs() < 1e-12);
            assert!(random_interval_set(&mut rng).measure() > 0.0);
            let (a, b) = random_tie_free_pair(&mut rng, 20);
            assert!(!a.is_empty() && !b.is_empty());
        }
    }
}
