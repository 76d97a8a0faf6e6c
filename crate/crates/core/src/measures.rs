//! Dominance, the two norms, the three quality measures, hypervolume and
//! average summed objective.

use num_traits::{CheckedMul, Zero};

use crate::error::{Error, Result};
use crate::model::{Alternative, Instance, Measure, Slate};
use crate::number::{abs_diff, common_denominator, positive_part, Rational, Volume};

/// Returns true iff `a` dominates `b`: `a_i >= b_i` for every objective and
/// `a_j > b_j` for at least one.
pub fn dominates(a: &Alternative, b: &Alternative) -> Result<bool> {
    a.check_same_dim(b)?;
    let mut strict = false;
    for (x, y) in a.coords().iter().zip(b.coords()) {
        if x < y {
            return Ok(false);
        }
        strict |= x > y;
    }
    Ok(strict)
}

/// Returns `a_i >= b_i` for every objective.
pub fn weakly_dominates(a: &Alternative, b: &Alternative) -> Result<bool> {
    a.check_same_dim(b)?;
    Ok(a.coords().iter().zip(b.coords()).all(|(x, y)| x >= y))
}

/// Points not dominated by any other input point, in input order.
/// Identical points do not dominate each other and are all kept.
pub fn pareto_filter(points: &[Alternative]) -> Result<Vec<Alternative>> {
    if let Some(first) = points.first() {
        if let Some(p) = points.iter().find(|p| p.dim() != first.dim()) {
            return Err(Error::DimensionMismatch(first.dim(), p.dim()));
        }
    }
    let mut out = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let mut dominated = false;
        for (j, q) in points.iter().enumerate() {
            if i != j && dominates(q, p)? {
                dominated = true;
                break;
            }
        }
        if !dominated {
            out.push(p.clone());
        }
    }
    Ok(out)
}

/// ℓ1 distance `Σ |x_i - y_i|`.
pub fn manhattan(x: &Alternative, y: &Alternative) -> Result<Rational> {
    x.check_same_dim(y)?;
    Ok(x.coords()
        .iter()
        .zip(y.coords())
        .fold(Rational::zero(), |acc, (a, b)| acc + abs_diff(a, b)))
}

/// Directed distance `Σ max(x_i - y_i, 0)`: how much `x` outperforms `y`.
/// Not symmetric; `directed(x, y) + directed(y, x) == manhattan(x, y)`.
pub fn directed(x: &Alternative, y: &Alternative) -> Result<Rational> {
    x.check_same_dim(y)?;
    Ok(x.coords()
        .iter()
        .zip(y.coords())
        .fold(Rational::zero(), |acc, (a, b)| acc + positive_part(a - b)))
}

fn check_slate(slate: &Slate, inst: &Instance) -> Result<()> {
    if let Some(&bad) = slate.members().iter().find(|&&i| i >= inst.n()) {
        return Err(Error::Input(format!("slate index {bad} out of range for n = {}", inst.n())));
    }
    Ok(())
}

/// Minimum pairwise ℓ1 distance between distinct slate members.
pub fn uniformity(slate: &Slate, inst: &Instance) -> Result<Rational> {
    check_slate(slate, inst)?;
    if slate.k() < 2 {
        return Err(Error::Contract(format!(
            "uniformity is undefined for a slate of size {}",
            slate.k()
        )));
    }
    let table = DistanceTable::manhattan(inst);
    Ok(table.to_rational(table.evaluate(Measure::Uniformity, slate.members())))
}

/// Largest ℓ1 distance from an alternative to its nearest slate member.
pub fn coverage(slate: &Slate, inst: &Instance) -> Result<Rational> {
    check_slate(slate, inst)?;
    if slate.k() == 0 {
        return Err(Error::Contract("coverage is undefined for an empty slate".into()));
    }
    let table = DistanceTable::manhattan(inst);
    Ok(table.to_rational(table.evaluate(Measure::Coverage, slate.members())))
}

/// Largest directed distance `||a - s||_+` from an alternative `a` to its
/// best slate member `s`.
pub fn directed_coverage(slate: &Slate, inst: &Instance) -> Result<Rational> {
    check_slate(slate, inst)?;
    if slate.k() == 0 {
        return Err(Error::Contract("directed coverage is undefined for an empty slate".into()));
    }
    let table = DistanceTable::directed(inst);
    Ok(table.to_rational(table.evaluate(Measure::DirectedCoverage, slate.members())))
}

pub fn evaluate(measure: Measure, slate: &Slate, inst: &Instance) -> Result<Rational> {
    match measure {
        Measure::Uniformity => uniformity(slate, inst),
        Measure::Coverage => coverage(slate, inst),
        Measure::DirectedCoverage => directed_coverage(slate, inst),
    }
}

/// Mean over slate members of the summed objective values.
pub fn avg_sum_objective(slate: &Slate, inst: &Instance) -> Result<Rational> {
    check_slate(slate, inst)?;
    if slate.k() == 0 {
        return Err(Error::Contract("average summed objective of an empty slate".into()));
    }
    let total: i64 = slate
        .members()
        .iter()
        .flat_map(|&i| inst.scaled(i).iter())
        .try_fold(0i64, |acc, &c| acc.checked_add(c))
        .ok_or_else(|| Error::Overflow("objective sum".into()))?;
    Ok(Rational::new(total, inst.denom() * slate.k() as i64))
}

/// Mean over points of the summed objective values, without an instance.
pub fn summed_mean(points: &[Alternative]) -> Result<Rational> {
    let Some(first) = points.first() else {
        return Err(Error::Contract("average summed objective of no points".into()));
    };
    let mut total = Rational::zero();
    for p in points {
        first.check_same_dim(p)?;
        total = p.coords().iter().fold(total, |acc, c| acc + c);
    }
    Ok(total / Rational::from_integer(points.len() as i64))
}

/// Volume of the union of the boxes `[reference, a]` over slate members `a`.
/// Every member must strictly exceed the reference point in every objective.
pub fn hypervolume(slate: &Slate, inst: &Instance, reference: &Alternative) -> Result<Volume> {
    check_slate(slate, inst)?;
    if reference.dim() != inst.dim() {
        return Err(Error::DimensionMismatch(inst.dim(), reference.dim()));
    }
    for p in slate.points(inst) {
        if !p.coords().iter().zip(reference.coords()).all(|(a, r)| a > r) {
            return Err(Error::Input(format!(
                "slate member {p} does not dominate the reference point {reference}"
            )));
        }
    }
    let scale = common_denominator(
        reference
            .coords()
            .iter()
            .chain(slate.points(inst).flat_map(|p| p.coords().iter())),
    )?;
    let to_int = |c: &Rational| -> i128 { (scale / c.denom()) as i128 * *c.numer() as i128 };
    let r: Vec<i128> = reference.coords().iter().map(to_int).collect();
    let mut points: Vec<Vec<i128>> = slate
        .points(inst)
        .map(|p| p.coords().iter().zip(&r).map(|(c, rc)| to_int(c) - rc).collect())
        .collect();
    let volume = box_union_volume(&mut points, inst.dim())?;
    let mut unit: i128 = 1;
    for _ in 0..inst.dim() {
        unit = unit
            .checked_mul(scale as i128)
            .ok_or_else(|| Error::Overflow("hypervolume denominator".into()))?;
    }
    Ok(Volume::new(volume, unit))
}

/// Union volume of boxes `[0, p]` (all coordinates positive), by slicing
/// along the last objective.
fn box_union_volume(points: &mut [Vec<i128>], d: usize) -> Result<i128> {
    if points.is_empty() {
        return Ok(0);
    }
    if d == 1 {
        return Ok(points.iter().map(|p| p[0]).max().unwrap_or(0));
    }
    if d == 2 {
        points.sort_by(|a, b| b[0].cmp(&a[0]));
        let (mut volume, mut height) = (0i128, 0i128);
        for p in points.iter() {
            if p[1] > height {
                let slab = p[0]
                    .checked_mul(p[1] - height)
                    .ok_or_else(|| Error::Overflow("hypervolume".into()))?;
                volume = volume.checked_add(slab).ok_or_else(|| Error::Overflow("hypervolume".into()))?;
                height = p[1];
            }
        }
        return Ok(volume);
    }
    points.sort_by(|a, b| b[d - 1].cmp(&a[d - 1]));
    let mut volume = 0i128;
    let mut active: Vec<Vec<i128>> = Vec::with_capacity(points.len());
    for i in 0..points.len() {
        active.push(points[i][..d - 1].to_vec());
        let level = points[i][d - 1];
        let next = points.get(i + 1).map_or(0, |p| p[d - 1]);
        if level > next {
            let base = box_union_volume(&mut active.clone(), d - 1)?;
            let slab = base
                .checked_mul(level - next)
                .ok_or_else(|| Error::Overflow("hypervolume".into()))?;
            volume = volume.checked_add(slab).ok_or_else(|| Error::Overflow("hypervolume".into()))?;
        }
    }
    Ok(volume)
}

/// Default hypervolume reference point: componentwise minimum over the
/// instance minus one unit per objective.
pub fn default_reference_point(inst: &Instance) -> Alternative {
    let coords = (0..inst.dim())
        .map(|i| {
            inst.alternatives()
                .iter()
                .map(|a| a.coord(i))
                .min()
                .expect("instances are non-empty")
                - Rational::from_integer(1)
        })
        .collect();
    Alternative::new(coords)
}

/// Exact pairwise distances of an instance, in units of `1 / denom`.
///
/// `get(a, s)` is the cost of representing alternative `a` by slate member
/// `s`: `||a - s||` for the symmetric table, `||a - s||_+` for the directed one.
#[derive(Clone, Debug)]
pub struct DistanceTable {
    n: usize,
    denom: i64,
    values: Vec<i64>,
}

impl DistanceTable {
    pub fn manhattan(inst: &Instance) -> Self {
        Self::build(inst, |a, b| (a - b).abs())
    }

    pub fn directed(inst: &Instance) -> Self {
        Self::build(inst, |a, b| (a - b).max(0))
    }

    /// Manhattan table for uniformity and coverage, directed for directed coverage.
    pub fn for_measure(inst: &Instance, measure: Measure) -> Self {
        match measure {
            Measure::DirectedCoverage => Self::directed(inst),
            _ => Self::manhattan(inst),
        }
    }

    fn build(inst: &Instance, term: impl Fn(i64, i64) -> i64) -> Self {
        let n = inst.n();
        let mut values = vec![0i64; n * n];
        for a in 0..n {
            for s in 0..n {
                values[a * n + s] = inst
                    .scaled(a)
                    .iter()
                    .zip(inst.scaled(s))
                    .map(|(&x, &y)| term(x, y))
                    .sum();
            }
        }
        DistanceTable {
            n,
            denom: inst.denom(),
            values,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: usize, s: usize) -> i64 {
        self.values[a * self.n + s]
    }

    pub fn to_rational(&self, scaled: i64) -> Rational {
        Rational::new(scaled, self.denom)
    }

    /// Scaled measure value of a slate given by its members. The caller
    /// guarantees the measure is defined for `members.len()`.
    pub fn evaluate(&self, measure: Measure, members: &[usize]) -> i64 {
        match measure {
            Measure::Uniformity => {
                let mut best = i64::MAX;
                for (i, &x) in members.iter().enumerate() {
                    for &y in &members[i + 1..] {
                        best = best.min(self.get(x, y));
                    }
                }
                best
            }
            Measure::Coverage | Measure::DirectedCoverage => (0..self.n)
                .map(|a| members.iter().map(|&s| self.get(a, s)).min().unwrap_or(i64::MAX))
                .max()
                .unwrap_or(0),
        }
    }
}

/// `value * c` for a rational scale factor, used by linearity checks.
pub fn scale_alternative(a: &Alternative, c: Rational) -> Result<Alternative> {
    let coords = a
        .coords()
        .iter()
        .map(|x| x.checked_mul(&c).ok_or_else(|| Error::Overflow("scaling".into())))
        .collect::<Result<Vec<_>>>()?;
    Ok(Alternative::new(coords))
}
