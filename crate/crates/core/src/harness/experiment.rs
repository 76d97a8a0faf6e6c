//! Batch comparison of the three pruning methods.
//!
//! For every instance, budget and method the optimal slate is computed
//! exactly and scored on five measures. Scores are normalized per instance
//! and budget against the best method: `value / best` for every measure, so
//! maximized measures land at or below 100% and minimized ones at or above.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{avg_sum_objective, default_reference_point, evaluate, hypervolume};
use crate::model::{Instance, Measure, Slate, SolverId};
use crate::number::{format_volume, volume_to_f64, widen, Volume};
use crate::solvers::{solve, SolveLimits, SolveRequest, SolverChoice};

use super::csvio::write_points;

/// Uniformly samples `cap` alternatives without replacement when the
/// instance is larger; the kept alternatives stay in their original order.
pub fn subsample(inst: &Instance, cap: usize, seed: u64) -> Result<Instance> {
    if cap < 2 {
        return Err(Error::Input(format!("subsample cap must be at least 2, got {cap}")));
    }
    if inst.n() <= cap {
        return Ok(inst.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keep = sample(&mut rng, inst.n(), cap).into_vec();
    keep.sort_unstable();
    inst.subset(&keep, inst.name())
}

/// Slate size for a percentage budget: `round(pct * n / 100)`, at least 1
/// and at most `n`.
pub fn k_for_percent(pct: f64, n: usize) -> usize {
    ((pct * n as f64 / 100.0).round() as usize).clamp(1, n)
}

/// Hypervolume reference point rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReferenceRule {
    /// Componentwise minimum over the instance minus one unit.
    #[default]
    MinMinusOne,
}

#[derive(Debug, Clone)]
pub struct Dataset {
    pub name: String,
    pub instances: Vec<Instance>,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub datasets: Vec<Dataset>,
    pub k_percents: Vec<f64>,
    pub methods: Vec<Measure>,
    pub cap: usize,
    pub seed: u64,
    pub reference: ReferenceRule,
    pub output_dir: Option<PathBuf>,
    pub solver: SolverChoice,
    pub limits: SolveLimits,
}

impl ExperimentConfig {
    pub fn new(datasets: Vec<Dataset>) -> Self {
        ExperimentConfig {
            datasets,
            k_percents: vec![5.0, 10.0, 25.0],
            methods: Measure::ALL.to_vec(),
            cap: 200,
            seed: 0,
            reference: ReferenceRule::default(),
            output_dir: None,
            solver: SolverChoice::Auto,
            limits: SolveLimits::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(p) = self.k_percents.iter().find(|p| !(**p > 0.0 && **p <= 100.0)) {
            return Err(Error::Input(format!("k percentage {p} is outside (0, 100]")));
        }
        if self.cap < 2 {
            return Err(Error::Input(format!("subsample cap must be at least 2, got {}", self.cap)));
        }
        if self.methods.is_empty() || self.k_percents.is_empty() {
            return Err(Error::Input("nothing to run: no methods or no budgets".into()));
        }
        Ok(())
    }
}

/// The five reported measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    Uniformity,
    Coverage,
    DirectedCoverage,
    Hypervolume,
    AvgSum,
}

impl Column {
    pub const ALL: [Column; 5] = [
        Column::Uniformity,
        Column::Coverage,
        Column::DirectedCoverage,
        Column::Hypervolume,
        Column::AvgSum,
    ];

    pub fn maximize(self) -> bool {
        !matches!(self, Column::Coverage | Column::DirectedCoverage)
    }

    pub fn id(self) -> &'static str {
        match self {
            Column::Uniformity => "uniformity",
            Column::Coverage => "coverage",
            Column::DirectedCoverage => "dcoverage",
            Column::Hypervolume => "hypervolume",
            Column::AvgSum => "avg_sum",
        }
    }

    fn of(measure: Measure) -> Column {
        match measure {
            Measure::Uniformity => Column::Uniformity,
            Measure::Coverage => Column::Coverage,
            Measure::DirectedCoverage => Column::DirectedCoverage,
        }
    }
}

/// One value per column; uniformity is absent for single-member slates.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Scores<T> {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uniformity: Option<T>,
    pub coverage: Option<T>,
    pub dcoverage: Option<T>,
    pub hypervolume: Option<T>,
    pub avg_sum: Option<T>,
}

impl<T: Clone> Scores<T> {
    pub fn get(&self, c: Column) -> Option<T> {
        match c {
            Column::Uniformity => self.uniformity.clone(),
            Column::Coverage => self.coverage.clone(),
            Column::DirectedCoverage => self.dcoverage.clone(),
            Column::Hypervolume => self.hypervolume.clone(),
            Column::AvgSum => self.avg_sum.clone(),
        }
    }

    fn set(&mut self, c: Column, v: Option<T>) {
        match c {
            Column::Uniformity => self.uniformity = v,
            Column::Coverage => self.coverage = v,
            Column::DirectedCoverage => self.dcoverage = v,
            Column::Hypervolume => self.hypervolume = v,
            Column::AvgSum => self.avg_sum = v,
        }
    }

    fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Scores<U> {
        let mut out = Scores {
            uniformity: None,
            coverage: None,
            dcoverage: None,
            hypervolume: None,
            avg_sum: None,
        };
        for c in Column::ALL {
            out.set(c, self.get(c).as_ref().map(&f));
        }
        out
    }
}

/// One solved (instance, budget, method) cell.
#[derive(Debug, Clone, Serialize)]
pub struct Cell {
    pub dataset: String,
    pub instance: String,
    pub method: Measure,
    pub k_pct: f64,
    pub k_abs: usize,
    pub raw: Scores<f64>,
    /// Exact raw values (decimal or `p/q`).
    pub raw_exact: Scores<String>,
    /// Percent of the best method's value on the same instance and budget.
    pub normalized: Scores<f64>,
    pub slate: Vec<usize>,
    pub solver: SolverId,
    #[serde(skip)]
    exact: Scores<Volume>,
}

/// A cell that could not be completed within the solver budget.
#[derive(Debug, Clone, Serialize)]
pub struct MissingCell {
    pub dataset: String,
    pub instance: String,
    pub method: Measure,
    pub k_pct: f64,
    pub k_abs: usize,
    pub reason: String,
}

/// Mean normalized scores over the instances of a dataset.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryRow {
    pub dataset: String,
    pub method: Measure,
    pub k_pct: f64,
    pub instances: usize,
    pub normalized: Scores<f64>,
}

/// Coordinates of a prepared instance with per-cell selection flags.
#[derive(Debug, Clone)]
pub struct PlotData {
    pub dataset: String,
    pub instance: Instance,
    /// `(label, selected indices)`, label like `coverage@10%`.
    pub selections: Vec<(String, Vec<usize>)>,
}

impl PlotData {
    pub fn to_csv(&self) -> String {
        let mut coords = Vec::new();
        write_points(&mut coords, self.instance.dim(), self.instance.alternatives()).expect("memory");
        let coords = String::from_utf8(coords).expect("utf-8");
        let mut out = String::new();
        for (row, line) in coords.lines().enumerate() {
            out.push_str(line);
            for (label, members) in &self.selections {
                out.push(',');
                if row == 0 {
                    out.push_str(label);
                } else {
                    out.push_str(if members.binary_search(&(row - 1)).is_ok() { "1" } else { "0" });
                }
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportTable {
    pub cells: Vec<Cell>,
    pub summary: Vec<SummaryRow>,
    pub missing: Vec<MissingCell>,
    #[serde(skip)]
    pub plots: Vec<PlotData>,
}

struct Job<'a> {
    dataset: &'a str,
    instance: &'a Instance,
    instance_index: usize,
    k_pct: f64,
    k: usize,
    method: Measure,
}

/// Solves and scores every cell, normalizes, aggregates, and writes the
/// report files when an output directory is configured.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ReportTable> {
    cfg.validate()?;
    // one sample per instance, shared by all methods and budgets
    let mut prepared: Vec<(String, Instance)> = Vec::new();
    for (d, ds) in cfg.datasets.iter().enumerate() {
        for (i, inst) in ds.instances.iter().enumerate() {
            let seed = cfg.seed ^ ((d as u64) << 32 | i as u64);
            prepared.push((ds.name.clone(), subsample(inst, cfg.cap, seed)?));
        }
    }
    let mut jobs = Vec::new();
    for (idx, (dataset, inst)) in prepared.iter().enumerate() {
        for &pct in &cfg.k_percents {
            let k = k_for_percent(pct, inst.n());
            for &method in &cfg.methods {
                if k < method.min_k() {
                    continue;
                }
                jobs.push(Job {
                    dataset,
                    instance: inst,
                    instance_index: idx,
                    k_pct: pct,
                    k,
                    method,
                });
            }
        }
    }

    let outcomes: Vec<Result<std::result::Result<Cell, MissingCell>>> =
        jobs.par_iter().map(|job| run_cell(job, cfg)).collect();
    let mut cells = Vec::new();
    let mut missing = Vec::new();
    let mut cell_jobs = Vec::new();
    for (job, outcome) in jobs.iter().zip(outcomes) {
        match outcome? {
            Ok(cell) => {
                cells.push(cell);
                cell_jobs.push(job);
            }
            Err(m) => missing.push(m),
        }
    }
    normalize(&mut cells, &cell_jobs);
    let summary = summarize(&cells, cfg);

    let mut plots: Vec<PlotData> = prepared
        .iter()
        .map(|(dataset, inst)| PlotData {
            dataset: dataset.clone(),
            instance: inst.clone(),
            selections: Vec::new(),
        })
        .collect();
    for (cell, job) in cells.iter().zip(&cell_jobs) {
        plots[job.instance_index]
            .selections
            .push((format!("{}@{}%", cell.method.id(), cell.k_pct), cell.slate.clone()));
    }

    let report = ReportTable {
        cells,
        summary,
        missing,
        plots,
    };
    if let Some(dir) = &cfg.output_dir {
        report.write_to(dir)?;
    }
    Ok(report)
}

fn run_cell(job: &Job<'_>, cfg: &ExperimentConfig) -> Result<std::result::Result<Cell, MissingCell>> {
    let inst = job.instance;
    let request = SolveRequest::new(inst, job.method, job.k)
        .solver(cfg.solver)
        .limits(cfg.limits);
    let result = match solve(&request) {
        Ok(r) => r,
        Err(Error::Incomplete(reason)) => {
            log::warn!(
                "{}/{} {}@{}%: {reason}",
                job.dataset,
                inst.name(),
                job.method,
                job.k_pct
            );
            return Ok(Err(MissingCell {
                dataset: job.dataset.to_string(),
                instance: inst.name().to_string(),
                method: job.method,
                k_pct: job.k_pct,
                k_abs: job.k,
                reason,
            }));
        }
        Err(e) => return Err(e),
    };
    let exact = score(&result.slate, inst, cfg.reference)?;
    Ok(Ok(Cell {
        dataset: job.dataset.to_string(),
        instance: inst.name().to_string(),
        method: job.method,
        k_pct: job.k_pct,
        k_abs: job.k,
        raw: exact.map(volume_to_f64),
        raw_exact: exact.map(format_volume),
        normalized: Scores::default(),
        slate: result.slate.members().to_vec(),
        solver: result.solver,
        exact,
    }))
}

/// Exact values of the five measures for a slate.
pub fn score(slate: &Slate, inst: &Instance, reference: ReferenceRule) -> Result<Scores<Volume>> {
    let reference = match reference {
        ReferenceRule::MinMinusOne => default_reference_point(inst),
    };
    let uniformity = if slate.k() >= 2 {
        Some(widen(&evaluate(Measure::Uniformity, slate, inst)?))
    } else {
        None
    };
    Ok(Scores {
        uniformity,
        coverage: Some(widen(&evaluate(Measure::Coverage, slate, inst)?)),
        dcoverage: Some(widen(&evaluate(Measure::DirectedCoverage, slate, inst)?)),
        hypervolume: Some(hypervolume(slate, inst, &reference)?),
        avg_sum: Some(widen(&avg_sum_objective(slate, inst)?)),
    })
}

/// `100 * value / best`, where best is the max (maximized) or min
/// (minimized) over the methods of the same instance and budget. A cell equal
/// to the best is exactly 100; a ratio against a zero or negative best is
/// undefined and left absent.
fn normalize(cells: &mut [Cell], jobs: &[&Job<'_>]) {
    let zero = Volume::from_integer(0);
    let mut start = 0;
    while start < cells.len() {
        let key = (jobs[start].instance_index, jobs[start].k_pct.to_bits());
        let mut end = start;
        while end < cells.len() && (jobs[end].instance_index, jobs[end].k_pct.to_bits()) == key {
            end += 1;
        }
        for c in Column::ALL {
            let values: Vec<Volume> = cells[start..end].iter().filter_map(|cell| cell.exact.get(c)).collect();
            let best = if c.maximize() { values.iter().max() } else { values.iter().min() }.copied();
            for cell in &mut cells[start..end] {
                let ratio = match (cell.exact.get(c), best) {
                    (Some(v), Some(b)) if v == b => Some(100.0),
                    (Some(v), Some(b)) if b > zero => Some(volume_to_f64(&(v * Volume::from_integer(100) / b))),
                    _ => None,
                };
                cell.normalized.set(c, ratio);
            }
        }
        start = end;
    }
}

fn summarize(cells: &[Cell], cfg: &ExperimentConfig) -> Vec<SummaryRow> {
    let mut out = Vec::new();
    for ds in &cfg.datasets {
        for &pct in &cfg.k_percents {
            for &method in &cfg.methods {
                let group: Vec<&Cell> = cells
                    .iter()
                    .filter(|c| c.dataset == ds.name && c.method == method && c.k_pct == pct)
                    .collect();
                if group.is_empty() {
                    continue;
                }
                let mut means = Scores::default();
                for col in Column::ALL {
                    let vals: Vec<f64> = group.iter().filter_map(|c| c.normalized.get(col)).collect();
                    if !vals.is_empty() {
                        means.set(col, Some(vals.iter().sum::<f64>() / vals.len() as f64));
                    }
                }
                out.push(SummaryRow {
                    dataset: ds.name.clone(),
                    method,
                    k_pct: pct,
                    instances: group.len(),
                    normalized: means,
                });
            }
        }
    }
    out
}

impl ReportTable {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Mean normalized scores, one row per dataset, budget and method.
    pub fn summary_csv(&self) -> String {
        let mut out = String::from("dataset,k_pct,method,instances");
        for c in Column::ALL {
            write!(out, ",{}", c.id()).unwrap();
        }
        out.push('\n');
        for row in &self.summary {
            write!(out, "{},{},{},{}", row.dataset, row.k_pct, row.method.id(), row.instances).unwrap();
            for c in Column::ALL {
                match row.normalized.get(c) {
                    Some(v) => write!(out, ",{v:.4}").unwrap(),
                    None => out.push(','),
                }
            }
            out.push('\n');
        }
        out
    }

    /// Raw exact values per cell.
    pub fn cells_csv(&self) -> String {
        let mut out = String::from("dataset,instance,k_pct,k,method,solver");
        for c in Column::ALL {
            write!(out, ",{}", c.id()).unwrap();
        }
        out.push('\n');
        for cell in &self.cells {
            write!(
                out,
                "{},{},{},{},{},{}",
                cell.dataset,
                cell.instance,
                cell.k_pct,
                cell.k_abs,
                cell.method.id(),
                cell.solver
            )
            .unwrap();
            for c in Column::ALL {
                write!(out, ",{}", cell.raw_exact.get(c).unwrap_or_default()).unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Aligned text table of mean normalized scores.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "{:<14} {:>5} {:<11} {:>9} {:>9} {:>9} {:>9} {:>9}",
            "dataset", "k%", "method", "U", "C", "DC", "HV", "Avg"
        )
        .unwrap();
        for row in &self.summary {
            write!(out, "{:<14} {:>5} {:<11}", row.dataset, row.k_pct, row.method.id()).unwrap();
            for c in Column::ALL {
                match row.normalized.get(c) {
                    Some(v) => write!(out, " {:>8.1}%", v).unwrap(),
                    None => write!(out, " {:>9}", "-").unwrap(),
                }
            }
            out.push('\n');
        }
        for m in &self.missing {
            writeln!(out, "incomplete: {}/{} {}@{}%: {}", m.dataset, m.instance, m.method, m.k_pct, m.reason).unwrap();
        }
        out
    }

    /// Writes `report.json`, `summary.csv`, `cells.csv` and one plot CSV per instance.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir.join("plots"))?;
        fs::write(dir.join("report.json"), self.to_json()?)?;
        fs::write(dir.join("summary.csv"), self.summary_csv())?;
        fs::write(dir.join("cells.csv"), self.cells_csv())?;
        for p in &self.plots {
            let file = format!("{}__{}.csv", p.dataset, p.instance.name());
            fs::write(dir.join("plots").join(file), p.to_csv())?;
        }
        Ok(())
    }

    /// Violations of the report invariants: each method is exactly 100% on
    /// its own measure, maximized columns stay at or below 100% and minimized
    /// ones at or above, and each method's own optimum does not improve when
    /// the slate shrinks.
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut bad = Vec::new();
        for cell in &self.cells {
            let tag = format!("{}/{} {}@{}%", cell.dataset, cell.instance, cell.method.id(), cell.k_pct);
            if cell.normalized.get(Column::of(cell.method)) != Some(100.0) {
                bad.push(format!("{tag}: own measure is {:?}", cell.normalized.get(Column::of(cell.method))));
            }
            for c in Column::ALL {
                if let Some(v) = cell.normalized.get(c) {
                    if (c.maximize() && v > 100.0) || (!c.maximize() && v < 100.0) {
                        bad.push(format!("{tag}: {} normalized to {v}", c.id()));
                    }
                }
            }
        }
        for a in &self.cells {
            for b in &self.cells {
                if a.dataset == b.dataset && a.instance == b.instance && a.method == b.method && a.k_abs < b.k_abs {
                    let col = Column::of(a.method);
                    let (va, vb) = (a.exact.get(col), b.exact.get(col));
                    // coverage-type optima fall and uniformity optima fall as k grows
                    if let (Some(va), Some(vb)) = (va, vb) {
                        if vb > va {
                            bad.push(format!(
                                "{}/{} {}: optimum rises from {} (k={}) to {} (k={})",
                                a.dataset, a.instance, a.method, format_volume(&va), a.k_abs, format_volume(&vb), b.k_abs
                            ));
                        }
                    }
                }
            }
        }
        bad
    }
}
