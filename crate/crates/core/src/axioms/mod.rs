//! Executable checkers for the five axioms on concrete cases.
//!
//! A checker either returns a verdict or fails with
//! [`Error::NotApplicable`] when the case does not meet the axiom's
//! precondition. Optimal slates are always enumerated by brute force, so a
//! violated verdict can be replayed independently.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{directed, dominates, manhattan};
use crate::model::{Alternative, Instance, Measure, Slate};
use crate::number::Rational;
use crate::solvers::{solve_brute, SolveOptions};

mod fixtures;
mod trials;

pub use fixtures::{catalog, fixture, fixture_instance, fixture_instances, run_fixture, Expectation, Fixture, FixtureOutcome};
pub use trials::{random_case, random_trials, TrialSummary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    Monotonicity,
    EpsSplit,
    Extremism,
    Standout,
    Outlier,
}

impl Axiom {
    pub const ALL: [Axiom; 5] = [
        Axiom::Monotonicity,
        Axiom::EpsSplit,
        Axiom::Extremism,
        Axiom::Standout,
        Axiom::Outlier,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Axiom::Monotonicity => "monotonicity",
            Axiom::EpsSplit => "eps-split",
            Axiom::Extremism => "extremism",
            Axiom::Standout => "standout",
            Axiom::Outlier => "outlier",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "monotonicity" | "monotonic" => Ok(Axiom::Monotonicity),
            "eps-split" | "epsilon-split" | "split" => Ok(Axiom::EpsSplit),
            "extremism" | "extreme" => Ok(Axiom::Extremism),
            "standout" => Ok(Axiom::Standout),
            "outlier" => Ok(Axiom::Outlier),
            other => Err(Error::Input(format!("unknown axiom '{other}'"))),
        }
    }
}

/// Direction of an extremism push.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Push {
    /// The coordinate is the largest in the instance and grows by `t`.
    Up,
    /// The coordinate is the smallest in the instance and shrinks by `t`.
    Down,
}

/// How a case modifies its instance.
#[derive(Debug, Clone, PartialEq)]
pub enum Modification {
    /// Replace alternative `index` by `with`, which must dominate it.
    Replace { index: usize, with: Alternative },
    /// Replace alternative `index` by two points within `eps` of it.
    Split {
        index: usize,
        y: Alternative,
        z: Alternative,
        eps: Rational,
    },
    /// Move objective `objective` of alternative `index` outward by `t`.
    Push {
        index: usize,
        objective: usize,
        t: Rational,
        direction: Push,
    },
    None,
}

#[derive(Debug, Clone)]
pub struct AxiomCase {
    pub axiom: Axiom,
    pub instance: Instance,
    pub k: usize,
    pub modification: Modification,
    pub measure: Measure,
}

/// Evidence for a verdict. Values are the optima before and after the
/// modification (only `before` for consistency axioms).
#[derive(Debug, Clone)]
pub struct Witness {
    /// The alternative the axiom is about (after modification where relevant).
    pub alternative: Alternative,
    pub before_value: Rational,
    pub after_value: Option<Rational>,
    /// Optimal slates of the original instance.
    pub before: Vec<Slate>,
    /// Optimal slates of the modified instance.
    pub after: Vec<Slate>,
    /// The modified instance, if any.
    pub modified: Option<Instance>,
}

#[derive(Debug, Clone)]
pub struct AxiomVerdict {
    pub holds: bool,
    pub witness: Witness,
}

/// Optimal value and all optimal slates by exhaustive enumeration.
pub fn optimal_slates(inst: &Instance, k: usize, measure: Measure) -> Result<(Rational, Vec<Slate>)> {
    let r = solve_brute(inst, k, measure, &SolveOptions::all_optimal())?;
    Ok((r.optimal_value, r.all_optimal.expect("requested")))
}

/// Dispatches on the case's axiom.
pub fn check(case: &AxiomCase) -> Result<AxiomVerdict> {
    match case.axiom {
        Axiom::Monotonicity => check_monotonicity(case),
        Axiom::EpsSplit => check_eps_split(case),
        Axiom::Extremism => check_extremism(case),
        Axiom::Standout | Axiom::Outlier => check_consistency(&case.instance, case.k, case.measure, case.axiom),
    }
}

fn not_applicable(msg: impl Into<String>) -> Error {
    Error::NotApplicable(msg.into())
}

fn index_in(inst: &Instance, index: usize) -> Result<&Alternative> {
    if index >= inst.n() {
        return Err(Error::Input(format!("alternative #{index} does not exist (n = {})", inst.n())));
    }
    Ok(inst.alternative(index))
}

/// Copy of `inst` with `index` replaced by `points`. The modified set must
/// still be a Pareto set.
fn replaced(inst: &Instance, index: usize, points: &[Alternative]) -> Result<Instance> {
    let mut pts = inst.alternatives().to_vec();
    pts.splice(index..=index, points.iter().cloned());
    Instance::new(format!("{}'", inst.name()), pts)
        .map_err(|e| not_applicable(format!("modified set is not a Pareto set: {e}")))
}

/// `x` lies in an optimal slate of the original instance; returns the optimum.
fn require_selected(inst: &Instance, k: usize, measure: Measure, index: usize) -> Result<(Rational, Vec<Slate>)> {
    let (value, slates) = optimal_slates(inst, k, measure)?;
    if !slates.iter().any(|s| s.contains(index)) {
        return Err(not_applicable(format!(
            "{} is in no optimal {measure} slate",
            inst.alternative(index)
        )));
    }
    Ok((value, slates))
}

/// Improving a selected alternative keeps it selectable: some optimal slate
/// of the modified instance contains the improved alternative.
pub fn check_monotonicity(case: &AxiomCase) -> Result<AxiomVerdict> {
    let Modification::Replace { index, with } = &case.modification else {
        return Err(Error::Input("monotonicity needs a replacement".into()));
    };
    let (inst, k, measure) = (&case.instance, case.k, case.measure);
    let x = index_in(inst, *index)?;
    if !dominates(with, x)? {
        return Err(not_applicable(format!("{with} does not dominate {x}")));
    }
    let (before_value, before) = require_selected(inst, k, measure, *index)?;
    let modified = replaced(inst, *index, std::slice::from_ref(with))?;
    let (after_value, after) = optimal_slates(&modified, k, measure)?;
    Ok(AxiomVerdict {
        holds: after.iter().any(|s| s.contains(*index)),
        witness: Witness {
            alternative: with.clone(),
            before_value,
            after_value: Some(after_value),
            before,
            after,
            modified: Some(modified),
        },
    })
}

/// Splitting an alternative into two close points changes nothing: every
/// optimal slate of the split instance is optimal in the original, or becomes
/// optimal once the split points it uses are merged back.
///
/// Slates are compared by coordinates, so a split point that coincides with
/// an existing alternative is treated as that alternative.
pub fn check_eps_split(case: &AxiomCase) -> Result<AxiomVerdict> {
    let Modification::Split { index, y, z, eps } = &case.modification else {
        return Err(Error::Input("eps-split needs a split".into()));
    };
    let (inst, k, measure) = (&case.instance, case.k, case.measure);
    let x = index_in(inst, *index)?;
    if *eps <= Rational::from_integer(0) {
        return Err(Error::Input(format!("split radius must be positive, got {eps}")));
    }
    for p in [y, z] {
        if manhattan(x, p)? >= *eps {
            return Err(Error::Input(format!("split point {p} is not within {eps} of {x}")));
        }
    }
    let (before_value, before) = optimal_slates(inst, k, measure)?;
    let modified = replaced(inst, *index, &[y.clone(), z.clone()])?;
    if k > modified.n() {
        return Err(not_applicable("k exceeds the split instance"));
    }
    let (after_value, after) = optimal_slates(&modified, k, measure)?;

    let optimal_in_original = |points: &[Alternative]| -> bool {
        let idx: Option<Vec<usize>> = points.iter().map(|p| inst.position(p)).collect();
        match idx {
            Some(mut idx) => {
                idx.sort_unstable();
                idx.dedup();
                idx.len() == k && before.iter().any(|s| s.members() == idx.as_slice())
            }
            None => false,
        }
    };
    let holds = after.iter().all(|s| {
        let points: Vec<Alternative> = s.points(&modified).cloned().collect();
        if optimal_in_original(&points) {
            return true;
        }
        let mut merged: Vec<Alternative> = points.into_iter().filter(|p| p != y && p != z).collect();
        merged.push(x.clone());
        optimal_in_original(&merged)
    });
    Ok(AxiomVerdict {
        holds,
        witness: Witness {
            alternative: x.clone(),
            before_value,
            after_value: Some(after_value),
            before,
            after,
            modified: Some(modified),
        },
    })
}

/// Pushing a selected alternative further out along an objective in which it
/// is already extreme keeps it selectable.
pub fn check_extremism(case: &AxiomCase) -> Result<AxiomVerdict> {
    let Modification::Push {
        index,
        objective,
        t,
        direction,
    } = &case.modification
    else {
        return Err(Error::Input("extremism needs a push".into()));
    };
    let (inst, k, measure) = (&case.instance, case.k, case.measure);
    let x = index_in(inst, *index)?;
    if *objective >= inst.dim() {
        return Err(Error::Input(format!("objective {} does not exist", objective + 1)));
    }
    if *t <= Rational::from_integer(0) {
        return Err(Error::Input(format!("push must be positive, got {t}")));
    }
    let column = inst.alternatives().iter().map(|a| a.coord(*objective));
    let extreme = match direction {
        Push::Up => column.max(),
        Push::Down => column.min(),
    }
    .expect("non-empty");
    if x.coord(*objective) != extreme {
        return Err(not_applicable(format!(
            "{x} is not extreme in objective {}",
            objective + 1
        )));
    }
    let (before_value, before) = require_selected(inst, k, measure, *index)?;
    let mut coords = x.coords().to_vec();
    match direction {
        Push::Up => coords[*objective] += *t,
        Push::Down => coords[*objective] -= *t,
    }
    let pushed = Alternative::new(coords);
    let modified = replaced(inst, *index, std::slice::from_ref(&pushed))?;
    let (after_value, after) = optimal_slates(&modified, k, measure)?;
    Ok(AxiomVerdict {
        holds: after.iter().any(|s| s.contains(*index)),
        witness: Witness {
            alternative: pushed,
            before_value,
            after_value: Some(after_value),
            before,
            after,
            modified: Some(modified),
        },
    })
}

/// Index of the standout alternative: its smallest lead over any other
/// alternative exceeds the largest lead of any other alternative over it.
pub fn find_standout(inst: &Instance) -> Option<usize> {
    let n = inst.n();
    if n < 2 {
        return None;
    }
    let lead = |a: usize, b: usize| directed(inst.alternative(a), inst.alternative(b)).expect("same dimension");
    let found: Vec<usize> = (0..n)
        .filter(|&x| {
            let weakest = (0..n).filter(|&a| a != x).map(|a| lead(x, a)).min().expect("n >= 2");
            let strongest = (0..n).filter(|&a| a != x).map(|a| lead(a, x)).max().expect("n >= 2");
            weakest > strongest
        })
        .collect();
    assert!(found.len() <= 1, "two standout alternatives {found:?}");
    found.first().copied()
}

/// Index of the outlier: farther from every other alternative than any two
/// other alternatives are from each other.
pub fn find_outlier(inst: &Instance) -> Option<usize> {
    let n = inst.n();
    if n < 3 {
        return None;
    }
    let dist = |a: usize, b: usize| manhattan(inst.alternative(a), inst.alternative(b)).expect("same dimension");
    (0..n).find(|&x| {
        let nearest = (0..n).filter(|&a| a != x).map(|a| dist(x, a)).min().expect("n >= 3");
        let spread = (0..n)
            .filter(|&a| a != x)
            .flat_map(|a| (0..n).filter(move |&b| b != x && b != a).map(move |b| (a, b)))
            .map(|(a, b)| dist(a, b))
            .max()
            .expect("n >= 3");
        nearest > spread
    })
}

/// Whether every optimal slate contains the standout (or outlier)
/// alternative. Outlier consistency only speaks about `k >= 2`.
pub fn check_consistency(inst: &Instance, k: usize, measure: Measure, kind: Axiom) -> Result<AxiomVerdict> {
    let special = match kind {
        Axiom::Standout => find_standout(inst),
        Axiom::Outlier => {
            if k < 2 {
                return Err(not_applicable("outlier consistency needs k >= 2"));
            }
            find_outlier(inst)
        }
        other => return Err(Error::Input(format!("{other} is not a consistency axiom"))),
    };
    let Some(x) = special else {
        return Err(not_applicable(format!("instance has no {kind} alternative")));
    };
    let (before_value, before) = optimal_slates(inst, k, measure)?;
    Ok(AxiomVerdict {
        holds: before.iter().all(|s| s.contains(x)),
        witness: Witness {
            alternative: inst.alternative(x).clone(),
            before_value,
            after_value: None,
            before,
            after: Vec::new(),
            modified: None,
        },
    })
}

/// A split radius under which uniformity provably cannot be gamed:
/// `min(U / 3, g / 2) * (1 - 10^-6)`, where `U` is the optimal uniformity and
/// `g` the smallest gap between two distinct pairwise distances.
pub fn uniformity_split_radius(inst: &Instance, k: usize) -> Result<Rational> {
    let (best, _) = optimal_slates(inst, k, Measure::Uniformity)?;
    let mut distances: Vec<Rational> = Vec::new();
    for i in 0..inst.n() {
        for j in i + 1..inst.n() {
            distances.push(manhattan(inst.alternative(i), inst.alternative(j))?);
        }
    }
    distances.sort();
    distances.dedup();
    let mut bound = best / 3;
    if let Some(gap) = distances.windows(2).map(|w| w[1] - w[0]).min() {
        bound = bound.min(gap / 2);
    }
    Ok(bound * Rational::new(999_999, 1_000_000))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn inst(points: &[&[i64]]) -> Instance {
        Instance::from_ints("t", points).unwrap()
    }

    #[test]
    fn standout_examples() {
        assert_eq!(find_standout(&inst(&[&[0, 1], &[2, 0]])), Some(1));
        assert_eq!(find_standout(&inst(&[&[1, 0], &[0, 1]])), None);
        assert_eq!(find_standout(&inst(&[&[1, 0]])), None);
    }

    #[test]
    fn outlier_examples() {
        let a = inst(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 20]]);
        assert_eq!(find_outlier(&a), Some(3));
        let tri = inst(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(find_outlier(&tri), None);
    }

    #[test]
    fn identity_replacement_is_not_applicable() {
        let a = inst(&[&[2, 0], &[0, 1]]);
        let case = AxiomCase {
            axiom: Axiom::Monotonicity,
            instance: a.clone(),
            k: 1,
            modification: Modification::Replace {
                index: 0,
                with: a.alternative(0).clone(),
            },
            measure: Measure::DirectedCoverage,
        };
        assert!(matches!(check(&case), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn trivial_split_holds() {
        let a = inst(&[&[3, 0, 0], &[0, 3, 0], &[2, 1, 1]]);
        let x = a.alternative(2).clone();
        let case = AxiomCase {
            axiom: Axiom::EpsSplit,
            instance: a,
            k: 2,
            modification: Modification::Split {
                index: 2,
                y: x.clone(),
                z: x,
                eps: Rational::new(1, 10),
            },
            measure: Measure::Coverage,
        };
        assert!(check(&case).unwrap().holds);
    }

    #[test]
    fn push_needs_extreme_coordinate() {
        let a = inst(&[&[3, 0, 0], &[0, 3, 0], &[2, 1, 1]]);
        let case = AxiomCase {
            axiom: Axiom::Extremism,
            instance: a,
            k: 1,
            modification: Modification::Push {
                index: 2,
                objective: 0,
                t: q(1),
                direction: Push::Up,
            },
            measure: Measure::Coverage,
        };
        assert!(matches!(check(&case), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn split_radius_on_small_set() {
        // distances 3, 5, 6 -> smallest gap 1; U(k=2) = 6 -> min(2, 1/2)
        let a = inst(&[&[3, 0, 0], &[0, 3, 0], &[2, 1, 1]]);
        let r = uniformity_split_radius(&a, 2).unwrap();
        assert_eq!(r, Rational::new(999_999, 2_000_000));
    }

    #[test]
    fn axiom_names_round_trip() {
        for a in Axiom::ALL {
            assert_eq!(a.id().parse::<Axiom>().unwrap(), a);
        }
    }
}
