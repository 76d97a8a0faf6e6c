//! Exhaustive enumeration of every size-k slate. The testing oracle for all
//! other solvers.

use crate::error::{Error, Result};
use crate::measures::DistanceTable;
use crate::model::{Instance, Measure, Slate, SolveResult, SolveStats, SolverId};

use super::{check_k, SolveOptions};

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k.min(n));
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// Enumerates all `C(n, k)` slates in lexicographic order and returns the
/// optimum, the first optimal slate and (if requested) all optimal slates.
pub fn solve_brute(inst: &Instance, k: usize, measure: Measure, opts: &SolveOptions) -> Result<SolveResult> {
    check_k(inst, measure, k)?;
    let n = inst.n();
    let count = binomial(n, k);
    if count > opts.limits.brute_cap as u128 {
        return Err(Error::Incomplete(format!(
            "C({n}, {k}) = {count} slates exceeds the brute-force cap of {}",
            opts.limits.brute_cap
        )));
    }
    let table = DistanceTable::for_measure(inst, measure);
    let mut walk = Walk {
        table: &table,
        measure,
        n,
        k,
        chosen: Vec::with_capacity(k),
        nearest: vec![vec![i64::MAX; n]; k + 1],
        best: None,
        optimal: Vec::new(),
        keep_all: opts.enumerate_all_optimal,
        cap: opts.limits.enumeration_cap,
        leaves: 0,
    };
    walk.visit(0, i64::MAX)?;
    let best = walk.best.expect("at least one slate exists");
    let mut optimal = walk.optimal;
    let slate = Slate::from_sorted(optimal[0].clone());
    let all_optimal = opts
        .enumerate_all_optimal
        .then(|| optimal.drain(..).map(Slate::from_sorted).collect());
    Ok(SolveResult {
        measure,
        optimal_value: table.to_rational(best),
        slate,
        all_optimal,
        solver: SolverId::Brute,
        stats: SolveStats {
            nodes: walk.leaves,
            feasibility_checks: 0,
        },
    })
}

struct Walk<'a> {
    table: &'a DistanceTable,
    measure: Measure,
    n: usize,
    k: usize,
    chosen: Vec<usize>,
    /// `nearest[depth][a]`: cost of the best chosen member for `a` after
    /// `depth` members (coverage measures only).
    nearest: Vec<Vec<i64>>,
    best: Option<i64>,
    optimal: Vec<Vec<usize>>,
    keep_all: bool,
    cap: usize,
    leaves: u64,
}

impl Walk<'_> {
    fn better(&self, value: i64, than: i64) -> bool {
        if self.measure.maximize() {
            value > than
        } else {
            value < than
        }
    }

    fn visit(&mut self, start: usize, spread: i64) -> Result<()> {
        let depth = self.chosen.len();
        if depth == self.k {
            self.leaves += 1;
            let value = match self.measure {
                Measure::Uniformity => spread,
                _ => *self.nearest[depth].iter().max().expect("n >= 1"),
            };
            match self.best {
                Some(b) if self.better(b, value) => {}
                Some(b) if b == value => {
                    if self.keep_all {
                        if self.optimal.len() == self.cap {
                            return Err(Error::Incomplete(format!("more than {} optimal slates", self.cap)));
                        }
                        self.optimal.push(self.chosen.clone());
                    }
                }
                _ => {
                    self.best = Some(value);
                    self.optimal.clear();
                    self.optimal.push(self.chosen.clone());
                }
            }
            return Ok(());
        }
        let remaining = self.k - depth;
        for s in start..=(self.n - remaining) {
            let next_spread = match self.measure {
                Measure::Uniformity => self
                    .chosen
                    .iter()
                    .map(|&c| self.table.get(c, s))
                    .fold(spread, i64::min),
                _ => {
                    let (head, tail) = self.nearest.split_at_mut(depth + 1);
                    for (a, slot) in tail[0].iter_mut().enumerate() {
                        *slot = head[depth][a].min(self.table.get(a, s));
                    }
                    spread
                }
            };
            self.chosen.push(s);
            self.visit(s + 1, next_spread)?;
            self.chosen.pop();
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Alternative;
    use crate::number::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn cross(split: Option<Rational>) -> Instance {
        let mut pts = vec![
            Alternative::from_ints(&[-1, 1]),
            Alternative::from_ints(&[-1, -1]),
        ];
        match split {
            None => pts.push(Alternative::from_ints(&[0, 0])),
            Some(e) => {
                pts.push(Alternative::new(vec![-e, q(0, 1)]));
                pts.push(Alternative::new(vec![e, q(0, 1)]));
            }
        }
        pts.push(Alternative::from_ints(&[1, -1]));
        pts.push(Alternative::from_ints(&[1, 1]));
        // the planar cross is not a Pareto set; its lift is, with equal ℓ1 distances
        let lifted = crate::embeddings::antisymmetric_lift(&pts).unwrap();
        Instance::new("cross", lifted).unwrap()
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(18, 6), 18564);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(5, 5), 1);
        assert_eq!(binomial(30, 15), 155117520);
    }

    #[test]
    fn cross_coverage_ties_every_pair() {
        let inst = cross(None);
        let r = solve_brute(&inst, 2, Measure::Coverage, &SolveOptions::all_optimal()).unwrap();
        assert_eq!(r.optimal_value, q(2, 1));
        assert_eq!(r.all_optimal.unwrap().len(), 10);
        assert_eq!(r.slate.members(), &[0, 1]);
    }

    #[test]
    fn split_cross_selects_both_halves() {
        let eps = q(1, 4);
        let inst = cross(Some(eps));
        let r = solve_brute(&inst, 2, Measure::Coverage, &SolveOptions::all_optimal()).unwrap();
        assert_eq!(r.optimal_value, q(2, 1) - eps);
        assert_eq!(r.all_optimal.unwrap(), vec![Slate::new(vec![2, 3], 6).unwrap()]);
    }

    #[test]
    fn k_equals_n_has_one_slate() {
        let inst = Instance::from_ints("t", &[&[1, 0], &[0, 1]]).unwrap();
        let r = solve_brute(&inst, 2, Measure::Coverage, &SolveOptions::all_optimal()).unwrap();
        assert_eq!(r.optimal_value, q(0, 1));
        assert_eq!(r.all_optimal.unwrap(), vec![Slate::full(2)]);
    }

    #[test]
    fn cap_exceeded() {
        let pts: Vec<Alternative> = (0..30).map(|i| Alternative::from_ints(&[i, -i])).collect();
        let inst = Instance::new("line", pts).unwrap();
        let mut opts = SolveOptions::default();
        opts.limits.brute_cap = 1000;
        assert!(matches!(
            solve_brute(&inst, 15, Measure::Coverage, &opts),
            Err(Error::Incomplete(_))
        ));
    }
}
