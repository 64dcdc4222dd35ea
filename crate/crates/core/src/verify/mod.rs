//! Independent numerical oracles for the bounds: exact piecewise integration,
//! Monte Carlo, extreme-point sweeps and the rearrangement checker.

pub mod probability;
pub mod random;
pub mod riesz;
pub mod suite;
pub mod sweep;

pub use probability::{
    monte_carlo_prob, prob_abs_difference_below, prob_leq_shift, reflection_identity_check,
    symmetrize, MonteCarloEstimate, ReflectionCheck,
};
pub use riesz::{riesz_check, triple_overlap, IntervalSet, RieszCheck};
pub use suite::{run_suite, run_suites, PropertyOutcome, Suite, SuiteConfig};
pub use sweep::{
    sweep_one_sided_unimodal, sweep_symmetric_unimodal, SweepFamily, SweepGrid, SweepReport,
};
