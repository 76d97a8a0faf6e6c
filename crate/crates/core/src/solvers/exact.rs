//! Threshold search with exact branch-and-bound feasibility checks.
//!
//! The optimum of every measure is one of the pairwise distances, so the
//! solver binary-searches the sorted distinct distances (the ladder):
//!
//! * coverage-type: smallest `τ` such that at most `k` members leave every
//!   alternative within `τ` (set cover over balls);
//! * uniformity: largest `τ` such that `k` members are pairwise at distance
//!   `≥ τ` (independent set in the graph of pairs closer than `τ`).

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::measures::DistanceTable;
use crate::model::{Instance, Measure, SolveResult, SolverId};
use crate::number::Rational;

use super::{check_k, finish, Budget, SolveOptions};

/// Sorted distinct candidate values of a measure on an instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdLadder {
    denom: i64,
    scaled: Vec<i64>,
}

impl ThresholdLadder {
    /// Coverage ladders include 0 (every alternative chosen); the directed
    /// ladder uses directed distances; the uniformity ladder uses distances
    /// between distinct alternatives only.
    pub fn for_measure(inst: &Instance, measure: Measure) -> ThresholdLadder {
        Self::from_table(&DistanceTable::for_measure(inst, measure), measure, inst.denom())
    }

    fn from_table(table: &DistanceTable, measure: Measure, denom: i64) -> ThresholdLadder {
        let n = table.n();
        let mut scaled = Vec::with_capacity(n * n / 2 + 1);
        if measure != Measure::Uniformity {
            scaled.push(0);
        }
        for a in 0..n {
            for s in 0..n {
                if a == s || (measure == Measure::Uniformity && s < a) {
                    continue;
                }
                scaled.push(table.get(a, s));
            }
        }
        scaled.sort_unstable();
        scaled.dedup();
        ThresholdLadder { denom, scaled }
    }

    pub fn values(&self) -> Vec<Rational> {
        self.scaled.iter().map(|&v| Rational::new(v, self.denom)).collect()
    }

    pub fn len(&self) -> usize {
        self.scaled.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scaled.is_empty()
    }

    pub fn contains(&self, value: Rational) -> bool {
        let scaled = value * self.denom;
        scaled.is_integer() && self.scaled.binary_search(&scaled.to_integer()).is_ok()
    }
}

/// Exact optimum for any number of objectives.
pub fn solve_exact_general(inst: &Instance, k: usize, measure: Measure, opts: &SolveOptions) -> Result<SolveResult> {
    check_k(inst, measure, k)?;
    let n = inst.n();
    let table = DistanceTable::for_measure(inst, measure);
    let ladder = ThresholdLadder::from_table(&table, measure, inst.denom());
    let mut budget = Budget::new(&opts.limits);
    let mut checks = 0u64;
    let no_forced: Vec<usize> = Vec::new();
    let no_excluded = vec![false; n];

    let mut feasible = |tau: i64, budget: &mut Budget| -> Result<bool> {
        checks += 1;
        match measure {
            Measure::Uniformity => Spread::new(&table, tau).feasible(k, &no_forced, &no_excluded, budget),
            _ => Cover::new(&table, tau).feasible(k, &no_forced, &no_excluded, budget),
        }
    };

    // feasibility is monotone along the ladder; both ends of the boundary are re-checked
    let values = &ladder.scaled;
    let tau = if measure == Measure::Uniformity {
        // largest feasible: smallest value is always feasible
        let (mut good, mut bad) = (0usize, values.len());
        while bad - good > 1 {
            let mid = (good + bad) / 2;
            if feasible(values[mid], &mut budget)? {
                good = mid;
            } else {
                bad = mid;
            }
        }
        if !feasible(values[good], &mut budget)? {
            return Err(Error::Internal("smallest uniformity threshold is infeasible".into()));
        }
        if bad < values.len() && feasible(values[bad], &mut budget)? {
            return Err(Error::Internal("uniformity feasibility is not monotone".into()));
        }
        values[good]
    } else {
        // smallest feasible: largest value is always feasible
        let (mut lo, mut good) = (0usize, values.len() - 1);
        while lo < good {
            let mid = (lo + good) / 2;
            if feasible(values[mid], &mut budget)? {
                good = mid;
            } else {
                lo = mid + 1;
            }
        }
        if !feasible(values[good], &mut budget)? {
            return Err(Error::Internal("largest coverage threshold is infeasible".into()));
        }
        if good > 0 && feasible(values[good - 1], &mut budget)? {
            return Err(Error::Internal("coverage feasibility is not monotone".into()));
        }
        values[good]
    };
    let value = Rational::new(tau, inst.denom());
    log::debug!("exact {measure}: k = {k}, optimum {value}, {checks} threshold checks");

    let mut oracle = |forced: &[usize], excluded: &[bool]| -> Result<bool> {
        match measure {
            Measure::Uniformity => Spread::new(&table, tau).feasible(k, forced, excluded, &mut budget),
            _ => Cover::new(&table, tau).feasible(k, forced, excluded, &mut budget),
        }
    };
    let mut result = finish(measure, value, n, k, SolverId::Exact, opts, 0, &mut oracle)?;
    result.stats.nodes = budget.used;
    result.stats.feasibility_checks += checks;
    Ok(result)
}

/// Set cover over balls of radius `τ`.
struct Cover {
    n: usize,
    /// `covers[s]`: alternatives within `τ` of member `s`.
    covers: Vec<FixedBitSet>,
    /// `covered_by[a]`: members within `τ` of alternative `a`.
    covered_by: Vec<FixedBitSet>,
}

impl Cover {
    fn new(table: &DistanceTable, tau: i64) -> Cover {
        let n = table.n();
        let mut covers = vec![FixedBitSet::with_capacity(n); n];
        let mut covered_by = vec![FixedBitSet::with_capacity(n); n];
        for a in 0..n {
            for s in 0..n {
                if table.get(a, s) <= tau {
                    covers[s].insert(a);
                    covered_by[a].insert(s);
                }
            }
        }
        Cover { n, covers, covered_by }
    }

    /// Is there a slate of exactly `k` members, containing `forced` and
    /// avoiding `excluded`, that covers everything within `τ`?
    fn feasible(&self, k: usize, forced: &[usize], excluded: &[bool], budget: &mut Budget) -> Result<bool> {
        let open = excluded.iter().filter(|&&x| !x).count();
        if open < k || forced.len() > k {
            return Ok(false);
        }
        let mut uncovered = FixedBitSet::with_capacity(self.n);
        uncovered.insert_range(..);
        for &f in forced {
            uncovered.difference_with(&self.covers[f]);
        }
        let mut allowed = FixedBitSet::with_capacity(self.n);
        for (s, &x) in excluded.iter().enumerate() {
            if !x {
                allowed.insert(s);
            }
        }
        for &f in forced {
            allowed.set(f, false);
        }
        self.search(&uncovered, &mut allowed, k - forced.len(), budget)
    }

    fn search(&self, uncovered: &FixedBitSet, allowed: &mut FixedBitSet, left: usize, budget: &mut Budget) -> Result<bool> {
        budget.tick()?;
        if uncovered.is_clear() {
            return Ok(true);
        }
        if left == 0 {
            return Ok(false);
        }
        // branch on the hardest alternative to cover
        let mut pick = None;
        let mut fewest = usize::MAX;
        let mut order: Vec<(usize, usize)> = Vec::new();
        for a in uncovered.ones() {
            let c = self.covered_by[a].intersection_count(allowed);
            if c == 0 {
                return Ok(false);
            }
            order.push((c, a));
            if c < fewest {
                fewest = c;
                pick = Some(a);
            }
        }
        if self.packing_bound(&mut order, allowed) > left {
            return Ok(false);
        }
        let a = pick.expect("uncovered is non-empty");
        let candidates: Vec<usize> = self.covered_by[a].intersection(allowed).collect();
        let mut banned = Vec::new();
        let mut found = false;
        for s in candidates {
            let mut rest = uncovered.clone();
            rest.difference_with(&self.covers[s]);
            allowed.set(s, false);
            banned.push(s);
            if self.search(&rest, allowed, left - 1, budget)? {
                found = true;
                break;
            }
            // `s` stays banned for later siblings: any cover using it was explored
        }
        for s in banned {
            allowed.insert(s);
        }
        Ok(found)
    }

    /// Greedy packing of alternatives with pairwise disjoint candidate sets:
    /// each needs its own member, so the count is a lower bound.
    fn packing_bound(&self, order: &mut [(usize, usize)], allowed: &FixedBitSet) -> usize {
        order.sort_unstable();
        let mut used = FixedBitSet::with_capacity(self.n);
        let mut count = 0;
        for &(_, a) in order.iter() {
            let mut cands = self.covered_by[a].clone();
            cands.intersect_with(allowed);
            if cands.is_disjoint(&used) {
                used.union_with(&cands);
                count += 1;
            }
        }
        count
    }
}

/// Independent sets in the graph joining pairs closer than `τ`.
struct Spread {
    n: usize,
    conflicts: Vec<FixedBitSet>,
}

impl Spread {
    fn new(table: &DistanceTable, tau: i64) -> Spread {
        let n = table.n();
        let mut conflicts = vec![FixedBitSet::with_capacity(n); n];
        for a in 0..n {
            for b in 0..n {
                if a != b && table.get(a, b) < tau {
                    conflicts[a].insert(b);
                }
            }
        }
        Spread { n, conflicts }
    }

    fn feasible(&self, k: usize, forced: &[usize], excluded: &[bool], budget: &mut Budget) -> Result<bool> {
        let mut cands = FixedBitSet::with_capacity(self.n);
        for (v, &x) in excluded.iter().enumerate() {
            if !x {
                cands.insert(v);
            }
        }
        for &f in forced {
            if excluded[f] || forced.iter().any(|&g| self.conflicts[f].contains(g)) {
                return Ok(false);
            }
            cands.set(f, false);
            cands.difference_with(&self.conflicts[f]);
        }
        if forced.len() > k {
            return Ok(false);
        }
        self.search(cands, k - forced.len(), budget)
    }

    fn search(&self, mut cands: FixedBitSet, need: usize, budget: &mut Budget) -> Result<bool> {
        budget.tick()?;
        if need == 0 {
            return Ok(true);
        }
        if cands.count_ones(..) < need || self.clique_bound(&cands) < need {
            return Ok(false);
        }
        // some maximum independent set meets the closed neighbourhood of any vertex
        let v = cands
            .ones()
            .min_by_key(|&v| self.conflicts[v].intersection_count(&cands))
            .expect("non-empty");
        let mut branch: Vec<usize> = vec![v];
        branch.extend(self.conflicts[v].intersection(&cands));
        for u in branch {
            let mut rest = cands.clone();
            rest.set(u, false);
            rest.difference_with(&self.conflicts[u]);
            if self.search(rest, need - 1, budget)? {
                return Ok(true);
            }
            cands.set(u, false);
        }
        Ok(false)
    }

    /// Number of cliques in a greedy clique partition; an independent set
    /// takes at most one vertex per clique.
    fn clique_bound(&self, cands: &FixedBitSet) -> usize {
        // each entry: vertices adjacent to every clique member
        let mut cliques: Vec<FixedBitSet> = Vec::new();
        for v in cands.ones() {
            match cliques.iter_mut().find(|common| common.contains(v)) {
                Some(common) => common.intersect_with(&self.conflicts[v]),
                None => {
                    let mut common = self.conflicts[v].clone();
                    common.intersect_with(cands);
                    cliques.push(common);
                }
            }
        }
        cliques.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::solve_brute;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn coverage_fixture_value_six() {
        let inst = Instance::from_ints("a", &[&[3, -10, 0], &[1, 3, 0], &[2, 2, 1], &[0, 0, 3]]).unwrap();
        let r = solve_exact_general(&inst, 2, Measure::Coverage, &SolveOptions::all_optimal()).unwrap();
        assert_eq!(r.optimal_value, q(6));
        assert_eq!(r.slate.members(), &[0, 2]);
        let b = solve_brute(&inst, 2, Measure::Coverage, &SolveOptions::all_optimal()).unwrap();
        assert_eq!(r.all_optimal, b.all_optimal);
    }

    #[test]
    fn full_selection_is_zero() {
        let inst = Instance::from_ints("a", &[&[3, 0, 0], &[0, 3, 0], &[2, 1, 1]]).unwrap();
        for m in [Measure::Coverage, Measure::DirectedCoverage] {
            assert_eq!(solve_exact_general(&inst, 3, m, &SolveOptions::default()).unwrap().optimal_value, q(0));
        }
    }

    #[test]
    fn ladder_contents() {
        let inst = Instance::from_ints("a", &[&[3, 0, 0], &[0, 3, 0], &[2, 1, 1]]).unwrap();
        let l = ThresholdLadder::for_measure(&inst, Measure::Uniformity);
        assert_eq!(l.values(), vec![q(3), q(5), q(6)]);
        let c = ThresholdLadder::for_measure(&inst, Measure::Coverage);
        assert_eq!(c.values(), vec![q(0), q(3), q(5), q(6)]);
        let d = ThresholdLadder::for_measure(&inst, Measure::DirectedCoverage);
        assert_eq!(d.values(), vec![q(0), q(1), q(2), q(3)]);
    }

    #[test]
    fn extremism_fixture() {
        let inst = Instance::from_ints("a", &[&[3, 0, 0], &[0, 3, 0], &[2, 1, 1]]).unwrap();
        let r = solve_exact_general(&inst, 1, Measure::Coverage, &SolveOptions::default()).unwrap();
        assert_eq!((r.optimal_value, r.slate.members()), (q(5), &[2usize][..]));
        let pushed = Instance::from_ints("b", &[&[3, 0, 0], &[0, 3, 0], &[2, 1, 3]]).unwrap();
        let r = solve_exact_general(&pushed, 1, Measure::Coverage, &SolveOptions::default()).unwrap();
        assert_eq!((r.optimal_value, r.slate.members()), (q(6), &[0usize][..]));
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let inst = Instance::from_ints("a", &[&[3, -10, 0], &[1, 3, 0], &[2, 2, 1], &[0, 0, 3]]).unwrap();
        let mut opts = SolveOptions::default();
        opts.limits.node_budget = 1;
        assert!(matches!(
            solve_exact_general(&inst, 2, Measure::Uniformity, &opts),
            Err(Error::Incomplete(_))
        ));
    }
}
