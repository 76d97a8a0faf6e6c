//! Dynamic programs for two objectives.
//!
//! Sorting a two-objective Pareto set by the first objective sorts it by the
//! second objective in reverse. Any slate is then a chain of sorted positions
//! `p_1 < .. < p_k`, and its score decomposes over the chain:
//!
//! * coverage-type measures: `max(head(p_1), link(p_1, p_2), .., tail(p_k))`,
//!   where `link(q, p)` is the worst cost of a point strictly between `q` and
//!   `p` served by the better of the two;
//! * uniformity: `min(gap(p_1, p_2), ..)`, since on a line only neighbours matter.
//!
//! For directed coverage the decomposition uses the directed distance
//! directly. For coverage and uniformity the points are first embedded into
//! the real line by `x - y`, which preserves ℓ1 distances on a 2D front.

use crate::error::{Error, Result};
use crate::model::{Instance, Measure, SolverId};
use crate::number::Rational;
use crate::model::SolveResult;

use super::{check_k, finish, SolveOptions};

const INF: i64 = i64::MAX;
const NEG_INF: i64 = i64::MIN;

/// Sorted positions of a two-objective instance: by first objective
/// ascending, ties by second objective descending.
fn sorted_order(inst: &Instance) -> Vec<usize> {
    let mut order: Vec<usize> = (0..inst.n()).collect();
    order.sort_by(|&a, &b| {
        let (pa, pb) = (inst.scaled(a), inst.scaled(b));
        pa[0].cmp(&pb[0]).then(pb[1].cmp(&pa[1])).then(a.cmp(&b))
    });
    order
}

fn require_two(inst: &Instance) -> Result<()> {
    if inst.dim() != 2 {
        return Err(Error::Input(format!(
            "the two-objective dynamic program needs d = 2, got d = {}",
            inst.dim()
        )));
    }
    Ok(())
}

/// Line coordinates `x - y` (scaled) of every alternative, after checking
/// that they reproduce all pairwise ℓ1 distances.
pub fn line_embedding(inst: &Instance) -> Result<Vec<i64>> {
    require_two(inst)?;
    let phi: Vec<i64> = (0..inst.n()).map(|i| inst.scaled(i)[0] - inst.scaled(i)[1]).collect();
    for i in 0..inst.n() {
        for j in 0..inst.n() {
            let (a, b) = (inst.scaled(i), inst.scaled(j));
            let l1 = (a[0] - b[0]).abs() + (a[1] - b[1]).abs();
            if l1 != (phi[i] - phi[j]).abs() {
                return Err(Error::Internal(format!(
                    "line embedding broke the distance between #{i} and #{j}; input is not a Pareto set"
                )));
            }
        }
    }
    Ok(phi)
}

/// Score decomposition of a chain over sorted positions.
enum ChainCost {
    /// Bottleneck to minimize.
    Cover {
        head: Vec<i64>,
        link: Vec<i64>,
        tail: Vec<i64>,
    },
    /// Smallest gap, to maximize.
    Spread { gap: Vec<i64> },
}

struct Chain {
    n: usize,
    order: Vec<usize>,
    position: Vec<usize>,
    cost: ChainCost,
}

impl Chain {
    fn link(&self, q: usize, p: usize) -> i64 {
        match &self.cost {
            ChainCost::Cover { link, .. } => link[q * self.n + p],
            ChainCost::Spread { gap } => gap[q * self.n + p],
        }
    }

    /// Optimal value for chains of exactly `k` nodes, by the table fill
    /// `T[i][l] = opt_{j < i} combine(T[j][l-1], link(j, i))`. Returns the
    /// value and the number of table cells.
    fn optimum(&self, k: usize) -> (i64, u64) {
        let n = self.n;
        let mut cells = 0u64;
        match &self.cost {
            ChainCost::Cover { head, tail, .. } => {
                let mut prev: Vec<i64> = head.clone();
                for l in 2..=k {
                    let mut cur = vec![INF; n];
                    for i in (l - 1)..n {
                        for j in (l - 2)..i {
                            cells += 1;
                            if prev[j] == INF {
                                continue;
                            }
                            cur[i] = cur[i].min(prev[j].max(self.link(j, i)));
                        }
                    }
                    prev = cur;
                }
                let best = (0..n)
                    .filter(|&i| prev[i] != INF)
                    .map(|i| prev[i].max(tail[i]))
                    .min()
                    .expect("k <= n");
                (best, cells)
            }
            ChainCost::Spread { .. } => {
                let mut prev = vec![INF; n];
                for l in 2..=k {
                    let mut cur = vec![NEG_INF; n];
                    for i in (l - 1)..n {
                        for j in (l - 2)..i {
                            cells += 1;
                            if prev[j] == NEG_INF {
                                continue;
                            }
                            cur[i] = cur[i].max(prev[j].min(self.link(j, i)));
                        }
                    }
                    prev = cur;
                }
                (*prev.iter().max().expect("n >= 1"), cells)
            }
        }
    }

    /// Whether some slate of size `k` scoring `value` (or better) contains all
    /// `forced` and no `excluded` indices.
    fn consistent(&self, value: i64, k: usize, forced: &[usize], excluded: &[bool]) -> bool {
        let n = self.n;
        let mut is_forced = vec![false; n];
        for &f in forced {
            is_forced[self.position[f]] = true;
        }
        let is_excluded = |p: usize| excluded[self.order[p]];
        let available = (0..n).filter(|&p| !is_excluded(p)).count();
        if available < k {
            return false;
        }
        // forced_before[p] = forced positions < p
        let mut forced_before = vec![0usize; n + 1];
        for p in 0..n {
            forced_before[p + 1] = forced_before[p] + is_forced[p] as usize;
        }
        let total_forced = forced_before[n];

        match &self.cost {
            ChainCost::Cover { head, tail, .. } => {
                // fewest chain nodes; supersets of a cover are covers
                let mut fewest = vec![usize::MAX; n];
                let mut best = usize::MAX;
                for p in 0..n {
                    if is_excluded(p) {
                        continue;
                    }
                    if forced_before[p] == 0 && head[p] <= value {
                        fewest[p] = 1;
                    }
                    for q in (0..p).rev() {
                        if forced_before[p] - forced_before[q + 1] > 0 {
                            break;
                        }
                        if fewest[q] != usize::MAX && self.link(q, p) <= value {
                            fewest[p] = fewest[p].min(fewest[q] + 1);
                        }
                    }
                    if fewest[p] != usize::MAX && total_forced - forced_before[p + 1] == 0 && tail[p] <= value {
                        best = best.min(fewest[p]);
                    }
                }
                best <= k
            }
            ChainCost::Spread { .. } => {
                // most chain nodes; subsets of a spread chain keep their gaps
                let mut most = vec![0usize; n];
                let mut best = 0usize;
                for p in 0..n {
                    if is_excluded(p) {
                        continue;
                    }
                    if forced_before[p] == 0 {
                        most[p] = 1;
                    }
                    for q in (0..p).rev() {
                        if forced_before[p] - forced_before[q + 1] > 0 {
                            break;
                        }
                        if most[q] > 0 && self.link(q, p) >= value {
                            most[p] = most[p].max(most[q] + 1);
                        }
                    }
                    if most[p] > 0 && total_forced - forced_before[p + 1] == 0 {
                        best = best.max(most[p]);
                    }
                }
                best >= k
            }
        }
    }
}

fn positions(order: &[usize]) -> Vec<usize> {
    let mut position = vec![0; order.len()];
    for (p, &i) in order.iter().enumerate() {
        position[i] = p;
    }
    position
}

/// `max_{q < t < p} min(cost(t, q), cost(t, p))`, zero when nothing lies between.
fn between_costs(n: usize, cost: impl Fn(usize, usize) -> i64) -> Vec<i64> {
    let mut link = vec![0i64; n * n];
    for q in 0..n {
        for p in q + 1..n {
            let mut worst = 0i64;
            for t in q + 1..p {
                worst = worst.max(cost(t, q).min(cost(t, p)));
            }
            link[q * n + p] = worst;
        }
    }
    link
}

fn solve_chain(
    inst: &Instance,
    k: usize,
    measure: Measure,
    chain: Chain,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    let (value, cells) = chain.optimum(k);
    let mut oracle = |forced: &[usize], excluded: &[bool]| -> Result<bool> {
        Ok(chain.consistent(value, k, forced, excluded))
    };
    finish(
        measure,
        Rational::new(value, inst.denom()),
        inst.n(),
        k,
        SolverId::Dp2d,
        opts,
        cells,
        &mut oracle,
    )
}

/// Directed coverage for two objectives.
///
/// With positions sorted by the first objective, `T[i][1] = ||a_1 - a_i||_+`,
/// `T[i][l] = min_{j<i} max(T[j][l-1], δ_ij)` where
/// `δ_ij = max_{j<t<i} min(||a_t - a_i||_+, ||a_t - a_j||_+)`, and the optimum
/// is `min_i max(T[i][k], x_n - x_i)`. Naive table fill, `O(n³ + n²k)`.
pub fn solve_dp2d_directed(inst: &Instance, k: usize, opts: &SolveOptions) -> Result<SolveResult> {
    require_two(inst)?;
    check_k(inst, Measure::DirectedCoverage, k)?;
    let n = inst.n();
    let order = sorted_order(inst);
    let pt = |p: usize| inst.scaled(order[p]);
    let dir = |a: usize, s: usize| -> i64 {
        let (x, y) = (pt(a), pt(s));
        (x[0] - y[0]).max(0) + (x[1] - y[1]).max(0)
    };
    let head: Vec<i64> = (0..n).map(|p| dir(0, p)).collect();
    let tail: Vec<i64> = (0..n).map(|p| pt(n - 1)[0] - pt(p)[0]).collect();
    let link = between_costs(n, dir);
    let chain = Chain {
        n,
        position: positions(&order),
        order,
        cost: ChainCost::Cover { head, link, tail },
    };
    solve_chain(inst, k, Measure::DirectedCoverage, chain, opts)
}

/// Coverage (1-D discrete k-center) or uniformity (1-D p-dispersion) for two
/// objectives, through the distance-preserving line embedding.
pub fn solve_dp2d_symmetric(inst: &Instance, k: usize, measure: Measure, opts: &SolveOptions) -> Result<SolveResult> {
    require_two(inst)?;
    check_k(inst, measure, k)?;
    if measure == Measure::DirectedCoverage {
        return Err(Error::Input("use solve_dp2d_directed for directed coverage".into()));
    }
    let n = inst.n();
    let phi = line_embedding(inst)?;
    let order = sorted_order(inst);
    let line: Vec<i64> = order.iter().map(|&i| phi[i]).collect();
    if line.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Internal("line coordinates are not sorted".into()));
    }
    let cost = match measure {
        Measure::Coverage => ChainCost::Cover {
            head: (0..n).map(|p| line[p] - line[0]).collect(),
            link: between_costs(n, |t, s| (line[t] - line[s]).abs()),
            tail: (0..n).map(|p| line[n - 1] - line[p]).collect(),
        },
        _ => {
            let mut gap = vec![0i64; n * n];
            for q in 0..n {
                for p in q + 1..n {
                    gap[q * n + p] = line[p] - line[q];
                }
            }
            ChainCost::Spread { gap }
        }
    };
    let chain = Chain {
        n,
        position: positions(&order),
        order,
        cost,
    };
    solve_chain(inst, k, measure, chain, opts)
}
