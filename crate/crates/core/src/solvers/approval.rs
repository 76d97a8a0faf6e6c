//! Enumeration over equivalence classes for approval objectives.
//!
//! With `d` approval objectives there are at most `2^d` distinct coordinate
//! vectors. Any measure value depends only on which classes a slate touches,
//! so it suffices to enumerate sets of at most `min(k, m)` classes.

use crate::error::{Error, Result};
use crate::measures::DistanceTable;
use crate::model::{Instance, Measure, SolverId, SolveResult};

use super::{check_k, finish, Budget, SolveOptions, MAX_APPROVAL_DIM};

/// Groups of identical alternatives, ordered by their smallest index.
fn classes(inst: &Instance) -> (Vec<Vec<usize>>, Vec<usize>) {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut class_of = vec![0; inst.n()];
    for i in 0..inst.n() {
        match groups.iter().position(|g| inst.scaled(g[0]) == inst.scaled(i)) {
            Some(c) => {
                groups[c].push(i);
                class_of[i] = c;
            }
            None => {
                class_of[i] = groups.len();
                groups.push(vec![i]);
            }
        }
    }
    (groups, class_of)
}

/// Exact optimum for instances whose objectives are all approval objectives.
///
/// When `k` exceeds the number of classes, coverage-type values are 0 and
/// uniformity is 0 as well, since two equivalent members must be chosen.
pub fn solve_approval(inst: &Instance, k: usize, measure: Measure, opts: &SolveOptions) -> Result<SolveResult> {
    check_k(inst, measure, k)?;
    if !inst.all_approval() {
        return Err(Error::Input("approval solver needs every objective to be an approval objective".into()));
    }
    if inst.dim() > MAX_APPROVAL_DIM {
        return Err(Error::Input(format!(
            "approval solver supports at most {MAX_APPROVAL_DIM} objectives, got {}",
            inst.dim()
        )));
    }
    let n = inst.n();
    let table = DistanceTable::for_measure(inst, measure);
    let (groups, class_of) = classes(inst);
    let m = groups.len();
    let reps: Vec<usize> = groups.iter().map(|g| g[0]).collect();
    let cover_cost = |a: usize, c: usize| table.get(reps[a], reps[c]);
    let mut budget = Budget::new(&opts.limits);

    if measure == Measure::Uniformity && k > m {
        log::warn!("k = {k} exceeds the {m} distinct alternatives; uniformity is 0");
        let mut oracle = |_: &[usize], excluded: &[bool]| -> Result<bool> {
            Ok(excluded.iter().filter(|&&x| !x).count() >= k)
        };
        return finish(measure, table.to_rational(0), n, k, SolverId::Approval, opts, 0, &mut oracle);
    }

    // every class set of size up to `top` that attains the optimum
    let top = k.min(m);
    let mut sets: Vec<(Vec<usize>, i64)> = Vec::new();
    let mut chosen = Vec::with_capacity(top);
    let mut nearest = vec![vec![i64::MAX; m]; top + 1];
    let mut walk = SetWalk {
        m,
        top,
        measure,
        cost: &cover_cost,
        chosen: &mut chosen,
        nearest: &mut nearest,
        out: &mut sets,
        budget: &mut budget,
    };
    walk.visit(0, i64::MAX)?;
    let best = match measure {
        Measure::Uniformity => sets.iter().map(|s| s.1).max(),
        _ => sets.iter().map(|s| s.1).min(),
    }
    .expect("at least one class set");
    sets.retain(|s| s.1 == best);
    let good: Vec<Vec<usize>> = sets.into_iter().map(|s| s.0).collect();

    let mut oracle = |forced: &[usize], excluded: &[bool]| -> Result<bool> {
        let mut available = vec![0usize; m];
        for i in 0..n {
            if !excluded[i] {
                available[class_of[i]] += 1;
            }
        }
        let mut forced_per_class = vec![0usize; m];
        for &f in forced {
            forced_per_class[class_of[f]] += 1;
        }
        Ok(good.iter().any(|set| {
            let mut inside = vec![false; m];
            for &c in set {
                inside[c] = true;
            }
            if (0..m).any(|c| forced_per_class[c] > 0 && !inside[c]) {
                return false;
            }
            if set.iter().any(|&c| available[c] == 0) {
                return false;
            }
            match measure {
                Measure::Uniformity => set.iter().all(|&c| forced_per_class[c] <= 1),
                // every class of the set needs a member, forced ones included
                _ => {
                    set.iter().map(|&c| forced_per_class[c].max(1)).sum::<usize>() <= k
                        && set.iter().map(|&c| available[c]).sum::<usize>() >= k
                }
            }
        }))
    };
    let nodes = budget.used;
    finish(measure, table.to_rational(best), n, k, SolverId::Approval, opts, nodes, &mut oracle)
}

/// Lists class sets with their scaled value: sizes `1..=top` for coverage
/// measures (a smaller set padded with equivalent members is a valid slate),
/// size exactly `top` for uniformity.
struct SetWalk<'a, F> {
    m: usize,
    top: usize,
    measure: Measure,
    cost: &'a F,
    chosen: &'a mut Vec<usize>,
    nearest: &'a mut Vec<Vec<i64>>,
    out: &'a mut Vec<(Vec<usize>, i64)>,
    budget: &'a mut Budget,
}

impl<F: Fn(usize, usize) -> i64> SetWalk<'_, F> {
    fn visit(&mut self, start: usize, spread: i64) -> Result<()> {
        let depth = self.chosen.len();
        self.budget.tick()?;
        if depth > 0 {
            match self.measure {
                Measure::Uniformity if depth == self.top => self.out.push((self.chosen.clone(), spread)),
                Measure::Uniformity => {}
                _ => {
                    let value = *self.nearest[depth].iter().max().expect("m >= 1");
                    self.out.push((self.chosen.clone(), value));
                }
            }
        }
        if depth == self.top {
            return Ok(());
        }
        for c in start..self.m {
            let next_spread = self.chosen.iter().map(|&s| (self.cost)(s, c)).fold(spread, i64::min);
            let (head, tail) = self.nearest.split_at_mut(depth + 1);
            for (a, slot) in tail[0].iter_mut().enumerate() {
                *slot = head[depth][a].min((self.cost)(a, c));
            }
            self.chosen.push(c);
            self.visit(c + 1, next_spread)?;
            self.chosen.pop();
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Alternative, DuplicatePolicy, ObjectiveKind};
    use crate::number::Rational;
    use crate::solvers::solve_brute;

    fn approval(points: &[&[i64]]) -> Instance {
        let pts = points.iter().map(|p| Alternative::from_ints(p)).collect();
        Instance::builder("a")
            .kinds(vec![ObjectiveKind::Approval; points[0].len()])
            .duplicates(DuplicatePolicy::Keep)
            .build(pts)
            .unwrap()
    }

    #[test]
    fn all_equivalent_covers_at_zero() {
        let inst = approval(&[&[1, 0, 1], &[1, 0, 1], &[1, 0, 1]]);
        let r = solve_approval(&inst, 1, Measure::Coverage, &SolveOptions::all_optimal()).unwrap();
        assert_eq!(r.optimal_value, Rational::from_integer(0));
        assert_eq!(r.all_optimal.unwrap().len(), 3);
    }

    #[test]
    fn two_unit_vectors() {
        let inst = approval(&[&[1, 0], &[0, 1]]);
        for measure in Measure::ALL {
            for k in measure.min_k()..=2 {
                let opts = SolveOptions::all_optimal();
                let r = solve_approval(&inst, k, measure, &opts).unwrap();
                let b = solve_brute(&inst, k, measure, &opts).unwrap();
                assert_eq!((r.optimal_value, r.all_optimal), (b.optimal_value, b.all_optimal));
            }
        }
    }

    #[test]
    fn uniformity_beyond_class_count_is_zero() {
        let inst = approval(&[&[1, 0], &[0, 1], &[0, 1]]);
        let r = solve_approval(&inst, 3, Measure::Uniformity, &SolveOptions::default()).unwrap();
        assert_eq!(r.optimal_value, Rational::from_integer(0));
        assert_eq!(r.slate.members(), &[0, 1, 2]);
    }

    #[test]
    fn duplicates_pad_coverage_slates() {
        // classes {0, 2} and {1}; k = 2 covering set must touch both classes
        let inst = approval(&[&[1, 0], &[0, 1], &[1, 0]]);
        let opts = SolveOptions::all_optimal();
        let r = solve_approval(&inst, 2, Measure::Coverage, &opts).unwrap();
        let b = solve_brute(&inst, 2, Measure::Coverage, &opts).unwrap();
        assert_eq!(r.all_optimal, b.all_optimal);
        assert_eq!(r.slate.members(), &[0, 1]);
    }

    #[test]
    fn forced_duplicates_use_up_slots() {
        // taking both copies of (1,0) leaves no slot for (0,1)
        let inst = approval(&[&[1, 0], &[1, 0], &[0, 1]]);
        let opts = SolveOptions::all_optimal();
        let r = solve_approval(&inst, 2, Measure::Coverage, &opts).unwrap();
        let b = solve_brute(&inst, 2, Measure::Coverage, &opts).unwrap();
        assert_eq!(r.optimal_value, Rational::from_integer(0));
        assert_eq!(r.all_optimal, b.all_optimal);
        assert_eq!(r.slate.members(), &[0, 2]);
    }

    #[test]
    fn rejects_cardinal_objectives() {
        let inst = Instance::from_ints("c", &[&[3, 0], &[0, 3]]).unwrap();
        assert!(matches!(
            solve_approval(&inst, 1, Measure::Coverage, &SolveOptions::default()),
            Err(Error::Input(_))
        ));
    }
}
