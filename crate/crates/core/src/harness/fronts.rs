//! Analytic benchmark fronts, sampled on a grid and rounded to exact decimals.
//! All objectives are maximized and non-negative.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::Result;
use crate::measures::pareto_filter;
use crate::model::{Alternative, Instance};
use crate::number::Rational;

/// Rounds to `places` decimals, exactly.
fn decimal(value: f64, places: u32) -> Rational {
    let unit = 10i64.pow(places);
    Rational::new((value * unit as f64).round() as i64, unit)
}

fn front(name: &str, points: Vec<Alternative>) -> Result<Instance> {
    let mut filtered = pareto_filter(&points)?;
    let mut seen = std::collections::HashSet::new();
    filtered.retain(|p| seen.insert(p.clone()));
    Instance::new(name, filtered)
}

/// Disconnected two-objective front of the ZDT3 problem, flipped to
/// maximization: `(1 - f1, 1 - f2)` with `f2 = 1 - sqrt(f1) - f1 sin(10 pi f1)`.
/// `samples` grid points are taken before dominated ones are removed.
pub fn zdt3(samples: usize) -> Result<Instance> {
    let points = (0..samples)
        .map(|i| {
            let f1 = i as f64 / (samples - 1) as f64;
            let f2 = 1.0 - f1.sqrt() - f1 * (10.0 * PI * f1).sin();
            Alternative::new(vec![decimal(1.0 - f1, 3), decimal(1.0 - f2, 3)])
        })
        .collect();
    front("zdt3", points)
}

/// Concave two-objective front: the positive quarter of the unit circle.
pub fn quarter_circle(samples: usize) -> Result<Instance> {
    let points = (0..samples)
        .map(|i| {
            let t = FRAC_PI_2 * i as f64 / (samples - 1) as f64;
            Alternative::new(vec![decimal(t.cos(), 3), decimal(t.sin(), 3)])
        })
        .collect();
    front("quarter-circle", points)
}

/// Concave three-objective front: the positive octant of the unit sphere on
/// a `steps x steps` angle grid (poles collapse, so fewer points remain).
pub fn sphere_octant(steps: usize) -> Result<Instance> {
    let mut points = Vec::new();
    for i in 0..steps {
        let polar = FRAC_PI_2 * i as f64 / (steps - 1) as f64;
        for j in 0..steps {
            let azimuth = FRAC_PI_2 * j as f64 / (steps - 1) as f64;
            points.push(Alternative::new(vec![
                decimal(polar.sin() * azimuth.cos(), 2),
                decimal(polar.sin() * azimuth.sin(), 2),
                decimal(polar.cos(), 2),
            ]));
        }
    }
    front("sphere-octant", points)
}

/// The bundled benchmark set: `(dataset, instance)` pairs.
pub fn bundled() -> Result<Vec<(String, Instance)>> {
    Ok(vec![
        ("zdt3".to_string(), zdt3(160)?),
        ("concave-2d".to_string(), quarter_circle(120)?),
        ("concave-3d".to_string(), sphere_octant(8)?),
    ])
}
