//! Distance-preserving transformations that turn planar point sets into
//! valid Pareto instances, plus the triangular grid metric they realize.

use crate::error::{Error, Result};
use crate::model::Alternative;
use crate::number::Rational;

/// Vertex of the triangular grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GridPoint {
    pub i: i64,
    pub j: i64,
}

impl GridPoint {
    pub fn new(i: i64, j: i64) -> Self {
        GridPoint { i, j }
    }
}

/// Shortest-path distance on the triangular grid: `|di| + |dj|` when the two
/// differences share a sign (zero matching either), else `max(|di|, |dj|)`.
pub fn trigrid_distance(v: GridPoint, w: GridPoint) -> i64 {
    let (di, dj) = (v.i - w.i, v.j - w.j);
    if di.signum() * dj.signum() >= 0 {
        di.abs() + dj.abs()
    } else {
        di.abs().max(dj.abs())
    }
}

/// `i * (1, 0, -1) + j * (0, 1, -1)`. The directed distance between images
/// equals the grid distance.
pub fn trigrid_embed(v: GridPoint) -> Alternative {
    Alternative::from_ints(&[v.i, v.j, -v.i - v.j])
}

/// Default tilt of [`hyperplane_embed`].
pub fn default_tilt() -> Rational {
    Rational::new(1, 8)
}

/// Maps the plane onto `{z : z_1 + ε z_2 + ε z_3 = 0}` by
/// `(x_1, x_2) -> x_1 (-ε, 0, 1) + x_2 (-ε, 1, 0)`.
///
/// No image dominates another. For integer inputs and `ε = 1/8`, distance
/// at most 4 maps to at most 9/2 and distance at least 5 stays at least 5.
pub fn hyperplane_embed(points: &[Alternative], eps: Rational) -> Result<Vec<Alternative>> {
    if eps <= Rational::from_integer(0) {
        return Err(Error::Input(format!("tilt must be positive, got {eps}")));
    }
    points
        .iter()
        .map(|p| {
            check_planar(p)?;
            let (x1, x2) = (p.coord(0), p.coord(1));
            Ok(Alternative::new(vec![-eps * (x1 + x2), x2, x1]))
        })
        .collect()
}

/// Output of [`shear_map`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShearMap {
    pub points: Vec<Alternative>,
    pub t: i64,
    pub delta_prime: i64,
}

/// `(x_1, x_2) -> (t x_1 + x_2, x_1 + t x_2)` with `t = max(n + 1, 2Δ + 2)`.
///
/// For inputs in `[n]²`, `||x - y|| <= Δ` iff `||f(x) - f(y)|| <= (t + 1) Δ`,
/// and no two distinct images share a coordinate.
pub fn shear_map(points: &[(i64, i64)], n: i64, delta: i64) -> Result<ShearMap> {
    if delta < 1 {
        return Err(Error::Input(format!("threshold must be at least 1, got {delta}")));
    }
    if let Some(&(a, b)) = points.iter().find(|&&(a, b)| !(1..=n).contains(&a) || !(1..=n).contains(&b)) {
        return Err(Error::Input(format!("point ({a}, {b}) lies outside [1, {n}]²")));
    }
    let t = (n + 1).max(2 * delta + 2);
    let mapped = points
        .iter()
        .map(|&(a, b)| Alternative::from_ints(&[t * a + b, a + t * b]))
        .collect();
    Ok(ShearMap {
        points: mapped,
        t,
        delta_prime: (t + 1) * delta,
    })
}

/// `(x_1, x_2) -> (x_1/2, -x_1/2, x_2/2, -x_2/2)`.
///
/// Preserves ℓ1 distances, halves them under the directed norm, and never
/// produces a dominating pair, so any planar point set becomes a Pareto set.
pub fn antisymmetric_lift(points: &[Alternative]) -> Result<Vec<Alternative>> {
    let half = Rational::new(1, 2);
    points
        .iter()
        .map(|p| {
            check_planar(p)?;
            let (a, b) = (p.coord(0) * half, p.coord(1) * half);
            Ok(Alternative::new(vec![a, -a, b, -b]))
        })
        .collect()
}

fn check_planar(p: &Alternative) -> Result<()> {
    if p.dim() != 2 {
        return Err(Error::DimensionMismatch(2, p.dim()));
    }
    Ok(())
}
