//! Seeded randomized search for axiom violations.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generate::{outlier_instance, random_antichain, rng, standout_instance, Rng64};
use crate::measures::manhattan;
use crate::model::{Alternative, Instance, Measure};
use crate::number::Rational;

use super::{check, optimal_slates, uniformity_split_radius, Axiom, AxiomCase, Modification, Push};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TrialSummary {
    pub trials: usize,
    pub holds: usize,
    pub violated: usize,
    pub not_applicable: usize,
    /// Seed replaying the first violation through [`random_case`].
    pub first_violation: Option<u64>,
}

fn trial_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64)
}

/// Runs `trials` random cases. Each case is built from its own seed, so any
/// violation can be replayed alone.
pub fn random_trials(axiom: Axiom, measure: Measure, trials: usize, seed: u64) -> Result<TrialSummary> {
    let mut summary = TrialSummary {
        trials,
        ..Default::default()
    };
    for i in 0..trials {
        let s = trial_seed(seed, i);
        let verdict = random_case(axiom, measure, s).and_then(|case| check(&case));
        match verdict {
            Ok(v) if v.holds => summary.holds += 1,
            Ok(_) => {
                summary.violated += 1;
                summary.first_violation.get_or_insert(s);
            }
            Err(Error::NotApplicable(_)) => summary.not_applicable += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(summary)
}

fn random_k(rng: &mut Rng64, measure: Measure, n: usize) -> Result<usize> {
    let lo = measure.min_k();
    if n < lo {
        return Err(Error::NotApplicable(format!("{n} alternatives are too few for {measure}")));
    }
    Ok(rng.gen_range(lo..=n))
}

fn small_instance(rng: &mut Rng64) -> Instance {
    let n = rng.gen_range(3..=7);
    let d = rng.gen_range(2..=3);
    random_antichain(rng, n, d, 10)
}

/// A random case for the axiom built deterministically from `seed`.
pub fn random_case(axiom: Axiom, measure: Measure, seed: u64) -> Result<AxiomCase> {
    let mut rng = rng(seed);
    let rng = &mut rng;
    let case = |instance: Instance, k: usize, modification: Modification| AxiomCase {
        axiom,
        instance,
        k,
        modification,
        measure,
    };
    match axiom {
        Axiom::Standout => {
            let (n, d) = (rng.gen_range(3..=8), rng.gen_range(2..=3));
            let (inst, _) = standout_instance(rng, n, d);
            let k = random_k(rng, measure, inst.n())?;
            Ok(case(inst, k, Modification::None))
        }
        Axiom::Outlier => {
            let (n, d) = (rng.gen_range(3..=8), rng.gen_range(2..=4));
            let (inst, _) = outlier_instance(rng, n, d);
            let k = rng.gen_range(2..=inst.n());
            Ok(case(inst, k, Modification::None))
        }
        Axiom::Monotonicity => {
            let inst = small_instance(rng);
            let k = random_k(rng, measure, inst.n())?;
            let (_, slates) = optimal_slates(&inst, k, measure)?;
            let index = *slates[0].members().choose(rng).expect("k >= 1");
            let x = inst.alternative(index);
            let d = inst.dim();
            let lifted = rng.gen_range(0..d);
            let coords = (0..d)
                .map(|i| {
                    let bump = if i == lifted { rng.gen_range(1..=3) } else { rng.gen_range(0..=2) };
                    x.coord(i) + Rational::from_integer(bump)
                })
                .collect();
            Ok(case(inst, k, Modification::Replace { index, with: Alternative::new(coords) }))
        }
        Axiom::Extremism => {
            let inst = small_instance(rng);
            let k = random_k(rng, measure, inst.n())?;
            let (_, slates) = optimal_slates(&inst, k, measure)?;
            let mut options = Vec::new();
            for &m in slates[0].members() {
                for obj in 0..inst.dim() {
                    let column: Vec<Rational> = inst.alternatives().iter().map(|a| a.coord(obj)).collect();
                    let v = inst.alternative(m).coord(obj);
                    if Some(&v) == column.iter().max() {
                        options.push((m, obj, Push::Up));
                    }
                    if Some(&v) == column.iter().min() {
                        options.push((m, obj, Push::Down));
                    }
                }
            }
            let Some(&(index, objective, direction)) = options.choose(rng) else {
                return Err(Error::NotApplicable("no selected alternative is extreme".into()));
            };
            let t = Rational::new(rng.gen_range(1..=10), 2);
            Ok(case(
                inst,
                k,
                Modification::Push {
                    index,
                    objective,
                    t,
                    direction,
                },
            ))
        }
        Axiom::EpsSplit => {
            let inst = small_instance(rng);
            if inst.n() < 2 {
                return Err(Error::NotApplicable("a split needs a second alternative to stay apart from".into()));
            }
            let k = random_k(rng, measure, inst.n())?;
            let eps = match measure {
                Measure::Uniformity => uniformity_split_radius(&inst, k)?,
                _ => {
                    let mut nearest: Option<Rational> = None;
                    for i in 0..inst.n() {
                        for j in i + 1..inst.n() {
                            let dist = manhattan(inst.alternative(i), inst.alternative(j))?;
                            nearest = Some(nearest.map_or(dist, |m| m.min(dist)));
                        }
                    }
                    nearest.expect("n >= 2") / 4
                }
            };
            let index = rng.gen_range(0..inst.n());
            let x = inst.alternative(index).clone();
            // offset with mixed signs so the two split points do not dominate each other
            let d = inst.dim();
            let mut signs: Vec<i64> = (0..d).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
            signs.shuffle(rng);
            let step = eps / Rational::from_integer(2 * d as i64);
            let y = Alternative::new((0..d).map(|i| x.coord(i) + step * signs[i]).collect());
            let z = Alternative::new((0..d).map(|i| x.coord(i) - step * signs[i]).collect());
            Ok(case(inst, k, Modification::Split { index, y, z, eps }))
        }
    }
}
