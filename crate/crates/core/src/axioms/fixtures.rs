//! Concrete cases deciding every (axiom, measure) cell, with the exact optima
//! they are expected to produce.

use crate::embeddings::antisymmetric_lift;
use crate::error::Result;
use crate::model::{Alternative, Instance, Measure};
use crate::number::Rational;

use super::{check, Axiom, AxiomCase, Modification, Push, Witness};

/// Expected outcome of a fixture.
#[derive(Debug, Clone, PartialEq)]
pub struct Expectation {
    pub holds: bool,
    pub before_value: Rational,
    pub after_value: Option<Rational>,
    /// The single optimal slate after the modification, by coordinates.
    pub unique_after: Option<Vec<Alternative>>,
}

#[derive(Debug, Clone)]
pub struct Fixture {
    /// Stable identifier, `<axiom>/<measure>`.
    pub id: String,
    pub case: AxiomCase,
    pub expect: Expectation,
}

#[derive(Debug, Clone)]
pub struct FixtureOutcome {
    pub id: String,
    pub axiom: Axiom,
    pub measure: Measure,
    pub holds: bool,
    pub expect: Expectation,
    /// Verdict, values and slate all agree with the expectation.
    pub matches: bool,
    pub witness: Witness,
}

fn pts(points: &[&[i64]]) -> Vec<Alternative> {
    points.iter().map(|p| Alternative::from_ints(p)).collect()
}

fn inst(name: &str, points: &[&[i64]]) -> Instance {
    Instance::new(name, pts(points)).expect("fixture is a Pareto set")
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n)
}

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn fx(axiom: Axiom, measure: Measure, instance: Instance, k: usize, modification: Modification, expect: Expectation) -> Fixture {
    Fixture {
        id: format!("{}/{}", axiom.id(), measure.id()),
        case: AxiomCase {
            axiom,
            instance,
            k,
            modification,
            measure,
        },
        expect,
    }
}

fn expect(holds: bool, before: Rational, after: Option<Rational>, unique_after: Option<Vec<Alternative>>) -> Expectation {
    Expectation {
        holds,
        before_value: before,
        after_value: after,
        unique_after,
    }
}

/// The planar cross `{(-1,1), (-1,-1), (0,0), (1,-1), (1,1)}` lifted to four
/// objectives, and the lifted split points `(-1/4, 0)`, `(1/4, 0)` of its centre.
fn lifted_cross() -> (Instance, Alternative, Alternative) {
    let planar = pts(&[&[-1, 1], &[-1, -1], &[0, 0], &[1, -1], &[1, 1]]);
    let lifted = antisymmetric_lift(&planar).expect("planar");
    let split = antisymmetric_lift(&[
        Alternative::new(vec![r(-1, 4), q(0)]),
        Alternative::new(vec![r(1, 4), q(0)]),
    ])
    .expect("planar");
    (
        Instance::new("cross", lifted).expect("lift is a Pareto set"),
        split[0].clone(),
        split[1].clone(),
    )
}

/// All fifteen fixtures, ordered by axiom then measure.
pub fn catalog() -> Vec<Fixture> {
    use Axiom::*;
    use Measure::*;
    let mut out = Vec::new();

    // improving (0,-2,1) to (0,0,1) pushes it out of the only optimal slate
    let a = inst("monotonicity-a", &[&[2, 0, 0], &[0, 2, 0], &[0, -2, 1]]);
    out.push(fx(
        Monotonicity,
        Uniformity,
        a,
        2,
        Modification::Replace {
            index: 2,
            with: Alternative::from_ints(&[0, 0, 1]),
        },
        expect(false, q(5), Some(q(4)), Some(pts(&[&[2, 0, 0], &[0, 2, 0]]))),
    ));

    let b = inst("monotonicity-b", &[&[3, -10, 0], &[1, 3, 0], &[2, 2, 1], &[0, 0, 3]]);
    out.push(fx(
        Monotonicity,
        Coverage,
        b.clone(),
        2,
        Modification::Replace {
            index: 0,
            with: Alternative::from_ints(&[3, 1, 0]),
        },
        expect(false, q(6), Some(q(3)), Some(pts(&[&[2, 2, 1], &[0, 0, 3]]))),
    ));
    out.push(fx(
        Monotonicity,
        DirectedCoverage,
        b,
        2,
        Modification::Replace {
            index: 2,
            with: Alternative::from_ints(&[2, 2, 2]),
        },
        expect(true, q(1), Some(q(1)), None),
    ));

    let (cross, y, z) = lifted_cross();
    let split = |eps: Rational| Modification::Split {
        index: 2,
        y: y.clone(),
        z: z.clone(),
        eps,
    };
    out.push(fx(
        EpsSplit,
        Uniformity,
        cross.clone(),
        2,
        split(r(999_999, 1_000_000)),
        expect(true, q(4), Some(q(4)), None),
    ));
    out.push(fx(
        EpsSplit,
        Coverage,
        cross.clone(),
        2,
        split(r(1, 2)),
        expect(false, q(2), Some(r(7, 4)), Some(vec![y.clone(), z.clone()])),
    ));
    out.push(fx(
        EpsSplit,
        DirectedCoverage,
        cross,
        2,
        split(r(1, 2)),
        expect(false, q(1), Some(r(7, 8)), Some(vec![y.clone(), z.clone()])),
    ));

    let c = inst("extremism-a", &[&[3, 0, 0], &[0, 3, 0], &[2, 1, 1]]);
    out.push(fx(
        Extremism,
        Uniformity,
        c.clone(),
        2,
        Modification::Push {
            index: 0,
            objective: 0,
            t: q(2),
            direction: Push::Up,
        },
        expect(true, q(6), Some(q(8)), Some(pts(&[&[5, 0, 0], &[0, 3, 0]]))),
    ));
    out.push(fx(
        Extremism,
        Coverage,
        c,
        1,
        Modification::Push {
            index: 2,
            objective: 2,
            t: q(2),
            direction: Push::Up,
        },
        expect(false, q(5), Some(q(6)), Some(pts(&[&[3, 0, 0]]))),
    ));
    out.push(fx(
        Extremism,
        DirectedCoverage,
        inst("extremism-b", &[&[2, 0], &[0, 1]]),
        1,
        Modification::Push {
            index: 0,
            objective: 1,
            t: q(3),
            direction: Push::Down,
        },
        expect(false, q(1), Some(q(2)), Some(pts(&[&[0, 1]]))),
    ));

    // uniformity needs two members; the standout sits between two far points
    out.push(fx(
        Standout,
        Uniformity,
        inst("standout-a", &[&[5, 0, 0], &[0, 1, -20], &[0, -20, 1]]),
        2,
        Modification::None,
        expect(false, q(42), None, None),
    ));
    let d = inst("standout-b", &[&[0, 1], &[2, 0]]);
    out.push(fx(Standout, Coverage, d.clone(), 1, Modification::None, expect(false, q(3), None, None)));
    out.push(fx(Standout, DirectedCoverage, d, 1, Modification::None, expect(true, q(1), None, None)));

    let e = inst("outlier-a", &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 20]]);
    out.push(fx(Outlier, Uniformity, e.clone(), 3, Modification::None, expect(false, q(2), None, None)));
    out.push(fx(Outlier, Coverage, e, 3, Modification::None, expect(true, q(2), None, None)));
    out.push(fx(
        Outlier,
        DirectedCoverage,
        inst("outlier-b", &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, -10]]),
        2,
        Modification::None,
        expect(false, q(1), None, None),
    ));
    out
}

/// Looks up a fixture by id.
pub fn fixture(id: &str) -> Option<Fixture> {
    catalog().into_iter().find(|f| f.id == id)
}

/// The named base instances used by the fixtures, each listed once.
pub fn fixture_instances() -> Vec<Instance> {
    let mut out: Vec<Instance> = Vec::new();
    for f in catalog() {
        if out.iter().all(|i| i.name() != f.case.instance.name()) {
            out.push(f.case.instance);
        }
    }
    out
}

/// Looks up a fixture instance by its name or by the id of a fixture using it.
pub fn fixture_instance(name: &str) -> Option<Instance> {
    fixture(name)
        .map(|f| f.case.instance)
        .or_else(|| fixture_instances().into_iter().find(|i| i.name() == name))
}

/// Runs a fixture and compares verdict, optima and (where given) the unique
/// optimal slate after the modification.
pub fn run_fixture(f: &Fixture) -> Result<FixtureOutcome> {
    let verdict = check(&f.case)?;
    let w = &verdict.witness;
    let slate_ok = match (&f.expect.unique_after, &w.modified) {
        (Some(expected), Some(modified)) => {
            let mut expected = expected.clone();
            expected.sort();
            w.after.len() == 1 && {
                let mut got: Vec<Alternative> = w.after[0].points(modified).cloned().collect();
                got.sort();
                got == expected
            }
        }
        (Some(_), None) => false,
        (None, _) => true,
    };
    let matches = verdict.holds == f.expect.holds
        && w.before_value == f.expect.before_value
        && w.after_value == f.expect.after_value
        && slate_ok;
    Ok(FixtureOutcome {
        id: f.id.clone(),
        axiom: f.case.axiom,
        measure: f.case.measure,
        holds: verdict.holds,
        expect: f.expect.clone(),
        matches,
        witness: verdict.witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_matches() {
        for f in catalog() {
            let o = run_fixture(&f).unwrap();
            assert!(
                o.matches,
                "{}: holds {} before {} after {:?} slates {:?}",
                o.id, o.holds, o.witness.before_value, o.witness.after_value, o.witness.after
            );
        }
    }

    #[test]
    fn ids_are_unique_and_cover_the_grid() {
        let ids: std::collections::BTreeSet<String> = catalog().into_iter().map(|f| f.id).collect();
        assert_eq!(ids.len(), 15);
        assert!(fixture("extremism/coverage").is_some());
        assert!(fixture("nope").is_none());
        assert_eq!(fixture_instance("monotonicity-b").unwrap().n(), 4);
        assert_eq!(fixture_instance("eps-split/coverage").unwrap().name(), "cross");
        assert_eq!(fixture_instances().len(), 9);
    }
}
