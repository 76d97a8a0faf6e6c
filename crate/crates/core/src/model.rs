//! Domain types: alternatives, validated instances, slates and solve results.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::number::{common_denominator, format_rational, scale_to_integer, Rational};

/// A point in objective space. Every objective is maximized.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alternative {
    coords: Vec<Rational>,
}

impl Alternative {
    pub fn new(coords: Vec<Rational>) -> Self {
        Alternative { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Alternative {
            coords: coords.iter().map(|&c| Rational::from_integer(c)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> Rational {
        self.coords[i]
    }

    pub(crate) fn check_same_dim(&self, other: &Alternative) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }
}

impl From<Vec<Rational>> for Alternative {
    fn from(coords: Vec<Rational>) -> Self {
        Alternative::new(coords)
    }
}

impl fmt::Debug for Alternative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Alternative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rational(c))?;
        }
        write!(f, ")")
    }
}

/// Kind of information an objective carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveKind {
    Cardinal,
    Ordinal,
    /// Values in {0, 1}.
    Approval,
}

/// What to do with input points dominated by another input point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DominatedPolicy {
    #[default]
    Reject,
    Filter,
}

/// What to do with identical input points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DuplicatePolicy {
    #[default]
    Remove,
    /// Keep identical copies. Only meaningful for approval objectives, where
    /// equivalent alternatives are the norm.
    Keep,
}

/// A validated set of mutually non-dominating alternatives.
///
/// Coordinates are also cached as integers over a common denominator so that
/// distance tables and measure values are computed in exact integer arithmetic.
#[derive(Clone, Debug)]
pub struct Instance {
    name: String,
    alternatives: Vec<Alternative>,
    kinds: Vec<ObjectiveKind>,
    denom: i64,
    scaled: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Default)]
pub struct InstanceBuilder {
    name: String,
    kinds: Option<Vec<ObjectiveKind>>,
    dominated: DominatedPolicy,
    duplicates: DuplicatePolicy,
}

impl InstanceBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        InstanceBuilder {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn kinds(mut self, kinds: Vec<ObjectiveKind>) -> Self {
        self.kinds = Some(kinds);
        self
    }

    pub fn dominated(mut self, policy: DominatedPolicy) -> Self {
        self.dominated = policy;
        self
    }

    pub fn duplicates(mut self, policy: DuplicatePolicy) -> Self {
        self.duplicates = policy;
        self
    }

    pub fn build(self, points: Vec<Alternative>) -> Result<Instance> {
        let Some(first) = points.first() else {
            return Err(Error::Input(format!("instance '{}' has no alternatives", self.name)));
        };
        let d = first.dim();
        if d == 0 {
            return Err(Error::Input("alternatives need at least one objective".into()));
        }
        if let Some(p) = points.iter().find(|p| p.dim() != d) {
            return Err(Error::DimensionMismatch(d, p.dim()));
        }

        let mut points = points;
        if self.duplicates == DuplicatePolicy::Remove {
            let before = points.len();
            let mut seen = std::collections::HashSet::new();
            points.retain(|p| seen.insert(p.clone()));
            if points.len() < before {
                log::warn!(
                    "instance '{}': removed {} duplicate alternative(s)",
                    self.name,
                    before - points.len()
                );
            }
        }

        let mut keep = vec![true; points.len()];
        for i in 0..points.len() {
            for j in 0..points.len() {
                if i != j && dominates_unchecked(&points[j], &points[i]) {
                    match self.dominated {
                        DominatedPolicy::Reject => {
                            return Err(Error::Input(format!(
                                "alternative #{i} {} is dominated by alternative #{j} {}",
                                points[i], points[j]
                            )))
                        }
                        DominatedPolicy::Filter => {
                            keep[i] = false;
                            break;
                        }
                    }
                }
            }
        }
        if keep.iter().any(|k| !k) {
            log::warn!(
                "instance '{}': filtered {} dominated alternative(s)",
                self.name,
                keep.iter().filter(|k| !**k).count()
            );
            let mut it = keep.iter();
            points.retain(|_| *it.next().unwrap());
        }

        let kinds = match self.kinds {
            Some(kinds) => {
                if kinds.len() != d {
                    return Err(Error::Input(format!(
                        "{} objective kinds given for {d} objectives",
                        kinds.len()
                    )));
                }
                for (i, kind) in kinds.iter().enumerate() {
                    if !kind_matches(&points, i, *kind) {
                        return Err(Error::Input(format!(
                            "objective {} values are not valid for kind {kind:?}",
                            i + 1
                        )));
                    }
                }
                kinds
            }
            None => (0..d).map(|i| infer_kind(&points, i)).collect(),
        };

        Instance::from_parts(self.name, points, kinds)
    }
}

fn dominates_unchecked(a: &Alternative, b: &Alternative) -> bool {
    let mut strict = false;
    for (x, y) in a.coords.iter().zip(&b.coords) {
        if x < y {
            return false;
        }
        if x > y {
            strict = true;
        }
    }
    strict
}

fn kind_matches(points: &[Alternative], i: usize, kind: ObjectiveKind) -> bool {
    match kind {
        ObjectiveKind::Cardinal => true,
        ObjectiveKind::Approval => points.iter().all(|p| {
            let c = p.coord(i);
            c == Rational::from_integer(0) || c == Rational::from_integer(1)
        }),
        ObjectiveKind::Ordinal => {
            let n = points.len() as i64;
            let mut values: Vec<Rational> = points.iter().map(|p| p.coord(i)).collect();
            values.sort();
            values
                .iter()
                .zip(1..=n)
                .all(|(v, expect)| *v == Rational::from_integer(expect))
        }
    }
}

fn infer_kind(points: &[Alternative], i: usize) -> ObjectiveKind {
    if kind_matches(points, i, ObjectiveKind::Approval) {
        ObjectiveKind::Approval
    } else if kind_matches(points, i, ObjectiveKind::Ordinal) {
        ObjectiveKind::Ordinal
    } else {
        ObjectiveKind::Cardinal
    }
}

impl Instance {
    /// Builds an instance with the default policies: duplicates removed,
    /// dominated points rejected, objective kinds inferred.
    pub fn new(name: impl Into<String>, points: Vec<Alternative>) -> Result<Instance> {
        InstanceBuilder::new(name).build(points)
    }

    pub fn builder(name: impl Into<String>) -> InstanceBuilder {
        InstanceBuilder::new(name)
    }

    pub fn from_ints(name: impl Into<String>, points: &[&[i64]]) -> Result<Instance> {
        Instance::new(name, points.iter().map(|p| Alternative::from_ints(p)).collect())
    }

    fn from_parts(name: String, alternatives: Vec<Alternative>, kinds: Vec<ObjectiveKind>) -> Result<Instance> {
        let denom = common_denominator(alternatives.iter().flat_map(|a| a.coords.iter()))?;
        let scaled = alternatives
            .iter()
            .map(|a| a.coords.iter().map(|c| scale_to_integer(c, denom)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Instance {
            name,
            alternatives,
            kinds,
            denom,
            scaled,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.alternatives.len()
    }

    pub fn dim(&self) -> usize {
        self.kinds.len()
    }

    pub fn alternatives(&self) -> &[Alternative] {
        &self.alternatives
    }

    pub fn alternative(&self, i: usize) -> &Alternative {
        &self.alternatives[i]
    }

    pub fn kinds(&self) -> &[ObjectiveKind] {
        &self.kinds
    }

    pub fn all_approval(&self) -> bool {
        self.kinds.iter().all(|k| *k == ObjectiveKind::Approval)
    }

    /// Common denominator of all coordinates.
    pub fn denom(&self) -> i64 {
        self.denom
    }

    /// Coordinates of alternative `i` multiplied by [`Instance::denom`].
    pub fn scaled(&self, i: usize) -> &[i64] {
        &self.scaled[i]
    }

    pub fn has_duplicates(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        !self.alternatives.iter().all(|a| seen.insert(a))
    }

    /// Index of the first alternative with exactly these coordinates.
    pub fn position(&self, point: &Alternative) -> Option<usize> {
        self.alternatives.iter().position(|a| a == point)
    }

    /// Sub-instance with the given members, in the given order. A subset of a
    /// Pareto set is a Pareto set, so no re-validation is needed beyond kinds.
    pub fn subset(&self, indices: &[usize], name: impl Into<String>) -> Result<Instance> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.n()) {
            return Err(Error::Input(format!("index {bad} out of range for n = {}", self.n())));
        }
        if indices.is_empty() {
            return Err(Error::Input("empty subset".into()));
        }
        let points: Vec<Alternative> = indices.iter().map(|&i| self.alternatives[i].clone()).collect();
        let kinds = (0..self.dim())
            .map(|i| match self.kinds[i] {
                ObjectiveKind::Ordinal if !kind_matches(&points, i, ObjectiveKind::Ordinal) => {
                    ObjectiveKind::Cardinal
                }
                k => k,
            })
            .collect();
        Instance::from_parts(name.into(), points, kinds)
    }
}

/// A set of distinct alternative indices, kept sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slate {
    members: Vec<usize>,
}

impl Slate {
    /// Validates that the indices are distinct and below `n`.
    pub fn new(mut members: Vec<usize>, n: usize) -> Result<Slate> {
        members.sort_unstable();
        if let Some(&bad) = members.iter().find(|&&i| i >= n) {
            return Err(Error::Input(format!("slate index {bad} out of range for n = {n}")));
        }
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Input("slate indices must be distinct".into()));
        }
        Ok(Slate { members })
    }

    /// The full set `{0, .., n-1}`.
    pub fn full(n: usize) -> Slate {
        Slate {
            members: (0..n).collect(),
        }
    }

    pub(crate) fn from_sorted(members: Vec<usize>) -> Slate {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Slate { members }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn k(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn points<'a>(&'a self, inst: &'a Instance) -> impl Iterator<Item = &'a Alternative> + 'a {
        self.members.iter().map(move |&i| inst.alternative(i))
    }
}

/// The three quality measures that can be optimized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Uniformity,
    Coverage,
    #[serde(rename = "dcoverage")]
    DirectedCoverage,
}

impl Measure {
    pub const ALL: [Measure; 3] = [Measure::Uniformity, Measure::Coverage, Measure::DirectedCoverage];

    /// Whether larger values are better.
    pub fn maximize(self) -> bool {
        matches!(self, Measure::Uniformity)
    }

    pub fn id(self) -> &'static str {
        match self {
            Measure::Uniformity => "uniformity",
            Measure::Coverage => "coverage",
            Measure::DirectedCoverage => "dcoverage",
        }
    }

    /// Smallest slate size for which the measure is defined.
    pub fn min_k(self) -> usize {
        match self {
            Measure::Uniformity => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl std::str::FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Measure> {
        match s.to_ascii_lowercase().replace(['-', '_', ' '], "").as_str() {
            "uniformity" | "u" => Ok(Measure::Uniformity),
            "coverage" | "c" => Ok(Measure::Coverage),
            "dcoverage" | "directedcoverage" | "dc" => Ok(Measure::DirectedCoverage),
            _ => Err(Error::Input(format!("unknown measure '{s}'"))),
        }
    }
}

/// Which algorithm produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverId {
    Dp2d,
    Approval,
    Exact,
    Brute,
}

impl fmt::Display for SolverId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverId::Dp2d => "dp2d",
            SolverId::Approval => "approval",
            SolverId::Exact => "exact",
            SolverId::Brute => "brute",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveStats {
    /// Branch-and-bound nodes, DP cells or enumerated slates.
    pub nodes: u64,
    /// Threshold feasibility problems / consistency queries answered.
    pub feasibility_checks: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub measure: Measure,
    pub optimal_value: Rational,
    /// The lexicographically smallest optimal index set.
    pub slate: Slate,
    /// Every optimal slate, in lexicographic order, when requested.
    pub all_optimal: Option<Vec<Slate>>,
    pub solver: SolverId,
    pub stats: SolveStats,
}
