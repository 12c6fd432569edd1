//! First-order methods for convex minimization that exploit a known strict
//! lower bound `f_slb < f*` and the growth constant `G` of the objective.
//!
//! The crate is organised bottom-up:
//!
//! - [`problem`]: oracles, feasible sets, tolerances and a catalog of test
//!   problems with certified constants.
//! - [`growth`]: sampling-based lower estimates of the growth constant.
//! - [`subgradient`]: projected subgradient descent and the two-step-size
//!   simultaneous restart scheme.
//! - [`accelerated`]: the accelerated gradient method and its ratio-test
//!   restart variant.
//! - [`smoothing`]: entropy smoothing families and the parametric
//!   smoothing/restarting method.
//! - [`analysis`]: iteration-bound formulas, bound reports and envelope checks.
//! - [`experiment`]: JSON-configured runs and benchmark matrices, used by the
//!   `growthopt` binary.
//!
//! Independent work items (matrix cells, sample evaluations) run on rayon when
//! the `parallel` feature is enabled and sequentially otherwise.

// `!(a > b)` checks deliberately reject NaN inputs.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod accelerated;
pub mod analysis;
mod error;
pub mod experiment;
pub mod growth;
pub mod linalg;
pub mod parallel;
pub mod plot;
pub mod problem;
pub mod rng;
pub mod smoothing;
pub mod subgradient;
pub mod trace;

pub use error::{Error, Result};
pub use parallel::Execution;
pub use problem::{FeasibleSet, Metadata, Objective, ProblemInstance, RelativeTolerance};
pub use trace::{SolverRun, Stream, Termination, TraceRecord};
