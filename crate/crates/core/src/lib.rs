//! Exact Pareto front pruning.
//!
//! Given a set of mutually non-dominating alternatives and a budget `k`, select
//! a size-`k` slate that is optimal for one of three quality measures:
//!
//! * **uniformity**: minimum pairwise ℓ1 distance inside the slate (maximize),
//! * **coverage**: largest ℓ1 distance from any alternative to its nearest
//!   slate member (minimize),
//! * **directed coverage**: like coverage, but only counting the objectives in
//!   which the alternative outperforms the slate member (minimize).
//!
//! All arithmetic is exact. The crate also ships executable axiom checkers,
//! the distance-preserving embeddings used to build hard instances, and an
//! experiment harness that compares the three methods on normalized scores.

pub mod axioms;
pub mod embeddings;
pub mod error;
pub mod generate;
pub mod harness;
pub mod measures;
pub mod model;
pub mod number;
pub mod solvers;

pub use error::{Error, Result};
pub use measures::{
    avg_sum_objective, coverage, directed, directed_coverage, dominates, hypervolume, manhattan,
    pareto_filter, uniformity,
};
pub use model::{
    Alternative, DominatedPolicy, DuplicatePolicy, Instance, InstanceBuilder, Measure, ObjectiveKind,
    Slate, SolveResult, SolveStats, SolverId,
};
pub use number::{format_rational, format_volume, parse_rational, Rational, Volume};
pub use solvers::{solve, SolveRequest, SolverChoice};
