//! Exact optimization of the three measures.
//!
//! | solver    | domain                         | method                                   |
//! |-----------|--------------------------------|------------------------------------------|
//! | `dp2d`    | two objectives                 | dynamic program over the sorted front    |
//! | `approval`| all objectives approval        | enumeration over equivalence classes     |
//! | `exact`   | anything                       | threshold search + branch-and-bound      |
//! | `brute`   | small `C(n, k)`                | full enumeration (testing oracle)        |
//!
//! Every solver returns the exact optimum together with the lexicographically
//! smallest optimal index set, and optionally every optimal slate. Exhausting
//! a budget is an error, never a suboptimal answer.

use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::measures::DistanceTable;
use crate::model::{Instance, Measure, Slate, SolveResult, SolverId};
use crate::number::Rational;

mod approval;
mod brute;
mod dp2d;
pub(crate) mod enumerate;
mod exact;

pub use approval::solve_approval;
pub use brute::solve_brute;
pub use dp2d::{line_embedding, solve_dp2d_directed, solve_dp2d_symmetric};
pub use exact::{solve_exact_general, ThresholdLadder};

/// Largest objective count accepted by the approval solver.
pub const MAX_APPROVAL_DIM: usize = 20;

/// Which algorithm to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverChoice {
    /// `dp2d` for two objectives, `approval` when every objective is an
    /// approval objective, `exact` otherwise.
    #[default]
    Auto,
    Dp2d,
    Approval,
    Exact,
    Brute,
}

impl FromStr for SolverChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "auto" => Ok(SolverChoice::Auto),
            "dp2d" | "dp" => Ok(SolverChoice::Dp2d),
            "approval" => Ok(SolverChoice::Approval),
            "exact" => Ok(SolverChoice::Exact),
            "brute" => Ok(SolverChoice::Brute),
            _ => Err(Error::Input(format!("unknown solver '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveLimits {
    /// Branch-and-bound nodes / enumerated subsets before giving up.
    pub node_budget: u64,
    pub time_budget: Option<Duration>,
    /// Largest `C(n, k)` the brute-force solver accepts.
    pub brute_cap: u64,
    /// Largest number of optimal slates returned by full enumeration.
    pub enumeration_cap: usize,
}

impl Default for SolveLimits {
    fn default() -> Self {
        SolveLimits {
            node_budget: 10_000_000,
            time_budget: None,
            brute_cap: 20_000_000,
            enumeration_cap: 1_000_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveRequest<'a> {
    pub instance: &'a Instance,
    pub measure: Measure,
    pub k: usize,
    pub solver: SolverChoice,
    pub enumerate_all_optimal: bool,
    pub limits: SolveLimits,
}

impl<'a> SolveRequest<'a> {
    pub fn new(instance: &'a Instance, measure: Measure, k: usize) -> Self {
        SolveRequest {
            instance,
            measure,
            k,
            solver: SolverChoice::Auto,
            enumerate_all_optimal: false,
            limits: SolveLimits::default(),
        }
    }

    pub fn solver(mut self, solver: SolverChoice) -> Self {
        self.solver = solver;
        self
    }

    pub fn all_optimal(mut self, yes: bool) -> Self {
        self.enumerate_all_optimal = yes;
        self
    }

    pub fn limits(mut self, limits: SolveLimits) -> Self {
        self.limits = limits;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_k(self.instance, self.measure, self.k)
    }
}

pub(crate) fn check_k(inst: &Instance, measure: Measure, k: usize) -> Result<()> {
    if k == 0 || k > inst.n() {
        return Err(Error::Input(format!("k = {k} must lie in 1..={}", inst.n())));
    }
    if k < measure.min_k() {
        return Err(Error::Contract(format!("{measure} needs k >= {}", measure.min_k())));
    }
    Ok(())
}

/// Options shared by the individual solver entry points.
#[derive(Debug, Clone, Copy, Default)]
pub struct SolveOptions {
    pub enumerate_all_optimal: bool,
    pub limits: SolveLimits,
}

impl SolveOptions {
    pub fn all_optimal() -> Self {
        SolveOptions {
            enumerate_all_optimal: true,
            ..Default::default()
        }
    }
}

/// Solves a pruning request exactly.
pub fn solve(req: &SolveRequest<'_>) -> Result<SolveResult> {
    req.validate()?;
    let inst = req.instance;
    let opts = SolveOptions {
        enumerate_all_optimal: req.enumerate_all_optimal,
        limits: req.limits,
    };
    let choice = match req.solver {
        SolverChoice::Auto if inst.dim() == 2 => SolverChoice::Dp2d,
        SolverChoice::Auto if inst.all_approval() && inst.dim() <= 8 => SolverChoice::Approval,
        SolverChoice::Auto => SolverChoice::Exact,
        other => other,
    };
    let result = match choice {
        SolverChoice::Dp2d => match req.measure {
            Measure::DirectedCoverage => solve_dp2d_directed(inst, req.k, &opts)?,
            m => solve_dp2d_symmetric(inst, req.k, m, &opts)?,
        },
        SolverChoice::Approval => solve_approval(inst, req.k, req.measure, &opts)?,
        SolverChoice::Exact => solve_exact_general(inst, req.k, req.measure, &opts)?,
        SolverChoice::Brute => solve_brute(inst, req.k, req.measure, &opts)?,
        SolverChoice::Auto => unreachable!(),
    };
    verify_result(inst, &result)?;
    Ok(result)
}

/// The returned slate must score exactly the reported optimum.
fn verify_result(inst: &Instance, result: &SolveResult) -> Result<()> {
    let table = DistanceTable::for_measure(inst, result.measure);
    let check = |slate: &Slate| -> Result<()> {
        let value = table.to_rational(table.evaluate(result.measure, slate.members()));
        if value != result.optimal_value {
            return Err(Error::Internal(format!(
                "{} solver reported {} but slate {:?} scores {}",
                result.solver,
                result.optimal_value,
                slate.members(),
                value
            )));
        }
        Ok(())
    };
    check(&result.slate)?;
    if let Some(all) = &result.all_optimal {
        all.iter().try_for_each(check)?;
        if all.first() != Some(&result.slate) {
            return Err(Error::Internal("first enumerated slate differs from tie-broken slate".into()));
        }
    }
    Ok(())
}

/// Node / time accounting for a single solve.
#[derive(Debug)]
pub(crate) struct Budget {
    limit: u64,
    pub(crate) used: u64,
    deadline: Option<Instant>,
}

impl Budget {
    pub(crate) fn new(limits: &SolveLimits) -> Self {
        Budget {
            limit: limits.node_budget,
            used: 0,
            deadline: limits.time_budget.map(|d| Instant::now() + d),
        }
    }

    #[inline]
    pub(crate) fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            return Err(Error::Incomplete(format!("node budget of {} exhausted", self.limit)));
        }
        if self.used % 1024 == 0 {
            if let Some(deadline) = self.deadline {
                if Instant::now() > deadline {
                    return Err(Error::Incomplete("time budget exhausted".into()));
                }
            }
        }
        Ok(())
    }
}

/// Builds a result from the optimum and a consistency oracle: the oracle picks
/// the tie-broken slate and, when requested, enumerates all optimal slates.
pub(crate) fn finish(
    measure: Measure,
    optimal_value: Rational,
    n: usize,
    k: usize,
    solver: SolverId,
    opts: &SolveOptions,
    nodes: u64,
    oracle: &mut impl enumerate::Consistency,
) -> Result<SolveResult> {
    let (first, mut queries) = enumerate::lex_first(n, k, oracle)?;
    let all_optimal = if opts.enumerate_all_optimal {
        let (all, q) = enumerate::all_consistent(n, k, opts.limits.enumeration_cap, oracle)?;
        queries += q;
        Some(all.into_iter().map(Slate::from_sorted).collect())
    } else {
        None
    };
    Ok(SolveResult {
        measure,
        optimal_value,
        slate: Slate::from_sorted(first),
        all_optimal,
        solver,
        stats: crate::model::SolveStats {
            nodes,
            feasibility_checks: queries,
        },
    })
}

/// Returned by [`duality_gap`]: optimal `k`-point coverage, optimal
/// `(k+1)`-point uniformity and their ratio.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityGap {
    pub k: usize,
    pub coverage_k: Rational,
    pub uniformity_k_plus_1: Rational,
    /// `uniformity / coverage`, absent when coverage is zero.
    pub ratio: Option<Rational>,
}

/// Computes `K_k` (optimal coverage with `k` members) and `M_{k+1}` (optimal
/// uniformity with `k + 1` members) and checks `K_k <= M_{k+1} <= 2 K_k`.
pub fn duality_gap(inst: &Instance, k: usize) -> Result<DualityGap> {
    duality_gap_with(inst, k, SolverChoice::Auto)
}

pub fn duality_gap_with(inst: &Instance, k: usize, solver: SolverChoice) -> Result<DualityGap> {
    if k == 0 || k + 1 > inst.n() {
        return Err(Error::Input(format!("duality gap needs 1 <= k < n (k = {k}, n = {})", inst.n())));
    }
    let cover = solve(&SolveRequest::new(inst, Measure::Coverage, k).solver(solver))?;
    let spread = solve(&SolveRequest::new(inst, Measure::Uniformity, k + 1).solver(solver))?;
    let (kk, mk) = (cover.optimal_value, spread.optimal_value);
    if !(kk <= mk && mk <= kk * 2) {
        return Err(Error::Internal(format!(
            "sandwich K_k <= M_k+1 <= 2 K_k violated: K = {kk}, M = {mk}"
        )));
    }
    let ratio = if kk == Rational::from_integer(0) { None } else { Some(mk / kk) };
    Ok(DualityGap {
        k,
        coverage_k: kk,
        uniformity_k_plus_1: mk,
        ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Alternative;

    fn inst(points: &[&[i64]]) -> Instance {
        Instance::from_ints("t", points).unwrap()
    }

    #[test]
    fn request_validation() {
        let a = inst(&[&[1, 0], &[0, 1]]);
        assert!(matches!(solve(&SolveRequest::new(&a, Measure::Coverage, 0)), Err(Error::Input(_))));
        assert!(matches!(solve(&SolveRequest::new(&a, Measure::Coverage, 3)), Err(Error::Input(_))));
        assert!(matches!(
            solve(&SolveRequest::new(&a, Measure::Uniformity, 1)),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn uniformity_non_monotonic_pair() {
        let a = inst(&[&[2, 0, 0], &[0, 2, 0], &[0, -2, 1]]);
        let r = solve(&SolveRequest::new(&a, Measure::Uniformity, 2).all_optimal(true)).unwrap();
        assert_eq!(r.optimal_value, Rational::from_integer(5));
        let all: Vec<&[usize]> = r.all_optimal.as_ref().unwrap().iter().map(|s| s.members()).collect();
        assert!(all.contains(&[0usize, 2].as_slice()));

        let a2 = inst(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 1]]);
        let r = solve(&SolveRequest::new(&a2, Measure::Uniformity, 2).all_optimal(true)).unwrap();
        assert_eq!(r.all_optimal.unwrap(), vec![Slate::new(vec![0, 1], 3).unwrap()]);
    }

    #[test]
    fn directed_coverage_prefers_the_efficient_point() {
        let a = inst(&[&[0, 1], &[2, 0]]);
        let r = solve(&SolveRequest::new(&a, Measure::DirectedCoverage, 1).all_optimal(true)).unwrap();
        assert_eq!(r.optimal_value, Rational::from_integer(1));
        assert_eq!(r.all_optimal.unwrap(), vec![Slate::new(vec![1], 2).unwrap()]);
    }

    #[test]
    fn auto_dispatch() {
        let two = inst(&[&[1, 0], &[0, 1]]);
        assert_eq!(solve(&SolveRequest::new(&two, Measure::Coverage, 1)).unwrap().solver, SolverId::Dp2d);
        let approval = inst(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(
            solve(&SolveRequest::new(&approval, Measure::Coverage, 1)).unwrap().solver,
            SolverId::Approval
        );
        let cardinal = inst(&[&[3, 0, 0], &[0, 3, 0], &[2, 1, 1]]);
        assert_eq!(
            solve(&SolveRequest::new(&cardinal, Measure::Coverage, 1)).unwrap().solver,
            SolverId::Exact
        );
    }

    #[test]
    fn duality_on_line_points() {
        // 2k points spaced 2 apart in ℓ1 along x + y = const
        let k = 3;
        let points: Vec<Alternative> = (0..2 * k as i64).map(|i| Alternative::from_ints(&[i, -i])).collect();
        let a = Instance::new("line", points).unwrap();
        let gap = duality_gap(&a, k).unwrap();
        assert_eq!(gap.coverage_k, Rational::from_integer(2));
        let brute = solve(&SolveRequest::new(&a, Measure::Coverage, k).solver(SolverChoice::Brute)).unwrap();
        assert_eq!(brute.optimal_value, gap.coverage_k);
    }

    #[test]
    fn duality_with_n_equal_k_plus_one() {
        let a = inst(&[&[3, 0, 0], &[0, 3, 0], &[2, 1, 1]]);
        let gap = duality_gap(&a, 2).unwrap();
        let full = crate::measures::uniformity(&Slate::full(3), &a).unwrap();
        assert_eq!(gap.uniformity_k_plus_1, full);
        assert!(duality_gap(&a, 3).is_err());
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let points: Vec<Alternative> = (0..30i64).map(|i| Alternative::from_ints(&[i, -i, (i * 7) % 5 - i])).collect();
        let a = Instance::builder("b")
            .dominated(crate::model::DominatedPolicy::Filter)
            .build(points)
            .unwrap();
        let limits = SolveLimits {
            node_budget: 3,
            ..Default::default()
        };
        let r = solve(
            &SolveRequest::new(&a, Measure::Coverage, 3)
                .solver(SolverChoice::Exact)
                .limits(limits),
        );
        assert!(matches!(r, Err(Error::Incomplete(_))), "{r:?}");
    }
}
