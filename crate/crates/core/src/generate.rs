//! Seeded random instance generators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::embeddings::{antisymmetric_lift, hyperplane_embed};
use crate::error::Result;
use crate::measures::{dominates, pareto_filter};
use crate::model::{Alternative, DuplicatePolicy, Instance, ObjectiveKind};
use crate::number::Rational;

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Two-objective front of exactly `n` points with integer coordinates in
/// `[0, range]`, `range >= n`: distinct first coordinates ascending paired
/// with distinct second coordinates descending.
pub fn random_front_2d(rng: &mut Rng64, n: usize, range: i64) -> Instance {
    let pool: Vec<i64> = (0..=range.max(n as i64)).collect();
    let mut xs: Vec<i64> = pool.choose_multiple(rng, n).copied().collect();
    let mut ys: Vec<i64> = pool.choose_multiple(rng, n).copied().collect();
    xs.sort_unstable();
    ys.sort_unstable_by(|a, b| b.cmp(a));
    let mut pts: Vec<Alternative> = xs.iter().zip(&ys).map(|(&x, &y)| Alternative::from_ints(&[x, y])).collect();
    pts.shuffle(rng);
    Instance::new("front-2d", pts).expect("strictly anti-sorted points are a Pareto set")
}

/// Pareto set of up to `n` points of `[0, range]^d`: uniform draws are kept
/// when incomparable with every point kept so far.
pub fn random_antichain(rng: &mut Rng64, n: usize, d: usize, range: i64) -> Instance {
    let mut front: Vec<Alternative> = Vec::with_capacity(n);
    for _ in 0..200 * n.max(1) {
        if front.len() == n {
            break;
        }
        let p = Alternative::from_ints(&(0..d).map(|_| rng.gen_range(0..=range)).collect::<Vec<_>>());
        let free = front
            .iter()
            .all(|q| *q != p && !dominates(q, &p).expect("same dimension") && !dominates(&p, q).expect("same dimension"));
        if free {
            front.push(p);
        }
    }
    Instance::new(format!("antichain-{d}d"), front).expect("pairwise incomparable")
}

/// `n` distinct integer points of `[-range, range]²`.
pub fn random_planar(rng: &mut Rng64, n: usize, range: i64) -> Vec<Alternative> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let p = (rng.gen_range(-range..=range), rng.gen_range(-range..=range));
        if seen.insert(p) {
            out.push(Alternative::from_ints(&[p.0, p.1]));
        }
    }
    out
}

/// Four-objective instance: random planar points through the antisymmetric lift.
pub fn random_lifted(rng: &mut Rng64, n: usize, range: i64) -> Result<Instance> {
    let pts = antisymmetric_lift(&random_planar(rng, n, range))?;
    Instance::new("lifted", pts)
}

/// Three-objective instance: random planar points on the tilted plane.
pub fn random_hyperplane(rng: &mut Rng64, n: usize, range: i64, eps: Rational) -> Result<Instance> {
    let pts = hyperplane_embed(&random_planar(rng, n, range), eps)?;
    Instance::new("hyperplane", pts)
}

/// `n` approval alternatives over `d` objectives: a random antichain of
/// distinct vectors in `{0,1}^d`, each used at least once, duplicates kept.
pub fn random_approval(rng: &mut Rng64, n: usize, d: usize) -> Result<Instance> {
    let vectors: Vec<Alternative> = (0..(1u32 << d))
        .map(|bits| Alternative::from_ints(&(0..d).map(|i| ((bits >> i) & 1) as i64).collect::<Vec<_>>()))
        .collect();
    let count = rng.gen_range(1..=vectors.len());
    let mut sample: Vec<Alternative> = vectors.choose_multiple(rng, count).cloned().collect();
    sample.shuffle(rng);
    let classes = pareto_filter(&sample)?;
    let mut pts = classes.clone();
    while pts.len() < n {
        pts.push(classes.choose(rng).expect("non-empty").clone());
    }
    pts.truncate(n.max(1));
    pts.shuffle(rng);
    Instance::builder("approval")
        .kinds(vec![ObjectiveKind::Approval; d])
        .duplicates(DuplicatePolicy::Keep)
        .build(pts)
}

/// Instance with a standout alternative: a small non-negative front plus a
/// point far ahead in the first objective and slightly behind elsewhere.
/// Returns the instance and the standout's index.
pub fn standout_instance(rng: &mut Rng64, n: usize, d: usize) -> (Instance, usize) {
    assert!(n >= 2 && d >= 2);
    loop {
        let cluster = random_antichain(rng, n - 1, d, 4);
        let lag: i64 = rng.gen_range(0..=2);
        // directed(a, x) <= (d - 1) * (5 + lag); the lead must exceed it
        let reach = (d as i64 - 1) * (5 + lag);
        let lead = rng.gen_range(reach + 1..=reach + 6);
        let mut x = vec![Rational::from_integer(4 + lead)];
        x.extend((1..d).map(|_| Rational::from_integer(-lag - rng.gen_range(0..=1))));
        let mut pts = cluster.alternatives().to_vec();
        let at = rng.gen_range(0..=pts.len());
        pts.insert(at, Alternative::new(x));
        if let Ok(inst) = Instance::new("standout", pts) {
            if crate::axioms::find_standout(&inst) == Some(at) {
                return (inst, at);
            }
        }
    }
}

/// Instance with an outlier: a small front plus one far point that trades
/// the first objectives away for a large last objective. Returns the instance
/// and the outlier's index.
pub fn outlier_instance(rng: &mut Rng64, n: usize, d: usize) -> (Instance, usize) {
    assert!(n >= 3 && d >= 2);
    loop {
        let cluster = random_antichain(rng, n - 1, d, 5);
        if cluster.n() < 2 {
            continue;
        }
        let mut x: Vec<Rational> = (0..d - 1).map(|_| Rational::from_integer(-rng.gen_range(1..=10))).collect();
        let diameter = 5 * d as i64;
        x.push(Rational::from_integer(5 + diameter + rng.gen_range(1..=20)));
        let mut pts = cluster.alternatives().to_vec();
        let at = rng.gen_range(0..=pts.len());
        pts.insert(at, Alternative::new(x));
        if let Ok(inst) = Instance::new("outlier", pts) {
            if crate::axioms::find_outlier(&inst) == Some(at) {
                return (inst, at);
            }
        }
    }
}
