//! Sharp distribution-free bounds on `P(X <= Y + mu)`, the area under the ROC
//! curve, and the extremal distributions that attain them.
//!
//! * [`extremal`] builds, evaluates and samples atom-plus-boxcar mixtures.
//! * [`bounds`] holds the closed-form tail and AUC bounds.
//! * [`roc`] computes empirical ROC curves and the Mann-Whitney AUC.
//! * [`verify`] holds the independent numerical oracles (exact piecewise
//!   integration, Monte Carlo, extreme-point sweeps, rearrangement checks).
//! * [`input`] parses sample files; [`cli`] is the command-line front end.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod extremal;
pub mod input;
pub mod normal;
pub mod roc;
pub mod verify;

pub use bounds::{BoundResult, Branch, Direction, RootSolve};
pub use error::{Error, Result};
pub use extremal::{BoxcarComponent, DensityGrid, ExtremalDistribution, TailConvention};
pub use roc::{ClassLabel, EmpiricalSample, RocCurve};
