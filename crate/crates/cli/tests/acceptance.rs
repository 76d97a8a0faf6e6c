//! Acceptance criteria. Each test prints one `ACCEPTANCE <n> PASS|FAIL` line;
//! run with `--nocapture` to see them.

use std::collections::{HashMap, VecDeque};
use std::process::Command;
use std::time::{Duration, Instant};

use itertools::Itertools;
use num_traits::{Signed, Zero};
use rand::Rng;
use serde_json::Value;

use prune_core::embeddings::{hyperplane_embed, shear_map, trigrid_embed, GridPoint};
use prune_core::generate::{
    outlier_instance, random_antichain, random_approval, random_front_2d, random_hyperplane, random_lifted, rng,
    standout_instance,
};
use prune_core::{parse_rational, solve, Alternative, Instance, Measure, Rational, SolveRequest, SolverChoice};

const FIXTURE_TIME: Duration = Duration::from_secs(5);
const DP2D_TIME: Duration = Duration::from_secs(60);
const EXACT_TIME: Duration = Duration::from_secs(300);
const APPROVAL_TIME: Duration = Duration::from_secs(30);
const EMBED_TIME: Duration = Duration::from_secs(30);

fn verdict(n: u32, title: &str, failures: &[String], detail: &str) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("ACCEPTANCE {n} {status}: {title} ({detail})");
    assert!(failures.is_empty(), "criterion {n}: {} failures, first: {}", failures.len(), failures[0]);
}

fn within(n: u32, elapsed: Duration, limit: Duration, failures: &mut Vec<String>) {
    if elapsed > limit {
        failures.push(format!("criterion {n} took {elapsed:?}, limit {limit:?}"));
    }
}

// independent oracle: plain enumeration over index sets with its own measure code

type Point = Vec<Rational>;

fn points(inst: &Instance) -> Vec<Point> {
    inst.alternatives().iter().map(|a| a.coords().to_vec()).collect()
}

fn l1(a: &Point, b: &Point) -> Rational {
    a.iter().zip(b).map(|(x, y)| (*x - *y).abs()).fold(Rational::zero(), |s, v| s + v)
}

/// Efficiency lost by showing `s` in place of `a`.
fn lead(a: &Point, s: &Point) -> Rational {
    a.iter()
        .zip(s)
        .map(|(x, y)| (*x - *y).max(Rational::zero()))
        .fold(Rational::zero(), |acc, v| acc + v)
}

struct Oracle {
    sym: Vec<Vec<Rational>>,
    dir: Vec<Vec<Rational>>,
}

impl Oracle {
    fn new(pts: &[Point]) -> Self {
        let sym = pts.iter().map(|a| pts.iter().map(|b| l1(a, b)).collect()).collect();
        let dir = pts.iter().map(|a| pts.iter().map(|s| lead(a, s)).collect()).collect();
        Oracle { sym, dir }
    }

    fn value(&self, measure: Measure, slate: &[usize]) -> Rational {
        let n = self.sym.len();
        match measure {
            Measure::Uniformity => slate
                .iter()
                .tuple_combinations()
                .map(|(&a, &b)| self.sym[a][b])
                .min()
                .expect("two members"),
            Measure::Coverage => (0..n)
                .map(|a| slate.iter().map(|&s| self.sym[a][s]).min().unwrap())
                .max()
                .unwrap(),
            Measure::DirectedCoverage => (0..n)
                .map(|a| slate.iter().map(|&s| self.dir[a][s]).min().unwrap())
                .max()
                .unwrap(),
        }
    }

    /// Optimal value and every optimal slate in lexicographic order.
    fn optimum(&self, measure: Measure, k: usize) -> (Rational, Vec<Vec<usize>>) {
        let mut best: Option<Rational> = None;
        let mut slates = Vec::new();
        for c in (0..self.sym.len()).combinations(k) {
            let v = self.value(measure, &c);
            let better = match best {
                None => true,
                Some(b) if measure == Measure::Uniformity => v > b,
                Some(b) => v < b,
            };
            if better {
                best = Some(v);
                slates.clear();
            }
            if best == Some(v) {
                slates.push(c);
            }
        }
        (best.expect("k <= n"), slates)
    }
}

fn solve_with(inst: &Instance, measure: Measure, k: usize, solver: SolverChoice) -> prune_core::SolveResult {
    solve(&SolveRequest::new(inst, measure, k).solver(solver))
        .unwrap_or_else(|e| panic!("{} n={} k={k} {measure}: {e}", inst.name(), inst.n()))
}

fn compare_with_oracle(
    inst: &Instance,
    k: usize,
    solver: SolverChoice,
    tag: &str,
    failures: &mut Vec<String>,
) -> usize {
    let oracle = Oracle::new(&points(inst));
    let mut checked = 0;
    for measure in Measure::ALL {
        if k < measure.min_k() {
            continue;
        }
        let got = solve_with(inst, measure, k, solver);
        let (value, slates) = oracle.optimum(measure, k);
        if got.optimal_value != value {
            failures.push(format!("{tag} {measure} k={k}: solver {} oracle {value}", got.optimal_value));
        } else if got.slate.members() != slates[0].as_slice() {
            failures.push(format!("{tag} {measure} k={k}: slate {:?}, lex-first optimum {:?}", got.slate, slates[0]));
        }
        checked += 1;
    }
    checked
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_prune"))
}

fn run(args: &[&str]) -> (i32, Vec<u8>) {
    let out = binary().args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

#[test]
fn criterion_1_fixture_matrix() {
    let start = Instant::now();
    let (code, stdout) = run(&["axioms", "--fixture", "all", "--format", "json"]);
    let elapsed = start.elapsed();
    let mut failures = Vec::new();
    if code != 0 {
        failures.push(format!("exit code {code}"));
    }
    let rows: Vec<Value> = serde_json::from_slice(&stdout).expect("json");
    // rows: monotonicity, eps-split, extremism, standout, outlier
    // columns: uniformity, coverage, dcoverage
    let expected = [
        ("monotonicity", [false, false, true]),
        ("eps-split", [true, false, false]),
        ("extremism", [true, false, false]),
        ("standout", [false, false, true]),
        ("outlier", [false, true, false]),
    ];
    let measures = ["uniformity", "coverage", "dcoverage"];
    let mut seen = 0;
    for (axiom, marks) in expected {
        for (m, holds) in measures.iter().zip(marks) {
            let Some(row) = rows.iter().find(|r| r["axiom"] == axiom && r["measure"] == *m) else {
                failures.push(format!("{axiom}/{m} missing"));
                continue;
            };
            seen += 1;
            if row["holds"] != holds {
                failures.push(format!("{axiom}/{m}: holds {} expected {holds}", row["holds"]));
            }
            if row["matches"] != true {
                failures.push(format!("{axiom}/{m}: fixture expectation mismatch"));
            }
        }
    }
    let values = |id: &str| {
        let row = rows.iter().find(|r| r["id"] == id).expect("row");
        let parse = |v: &Value| v.as_str().map(|s| parse_rational(s).unwrap());
        (parse(&row["before"]), parse(&row["after"]))
    };
    let r = |n, d| Some(Rational::new(n, d));
    for (id, want) in [
        ("monotonicity/coverage", (r(6, 1), r(3, 1))),
        ("extremism/coverage", (r(5, 1), r(6, 1))),
        // the centre splits into two points 1/4 away: 2 drops to 2 - 1/4
        ("eps-split/coverage", (r(2, 1), r(7, 4))),
    ] {
        if values(id) != want {
            failures.push(format!("{id}: values {:?}, expected {want:?}", values(id)));
        }
    }
    within(1, elapsed, FIXTURE_TIME, &mut failures);
    verdict(1, "axiom fixture matrix", &failures, &format!("{seen}/15 cells, {elapsed:.2?}"));
}

#[test]
fn criterion_2_dp2d_matches_brute_force() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0;
    for seed in 0..200u64 {
        let mut g = rng(1000 + seed);
        let n = g.gen_range(2..=18);
        let inst = random_front_2d(&mut g, n, 60);
        let k = g.gen_range(1..=6.min(n));
        checked += compare_with_oracle(&inst, k, SolverChoice::Dp2d, &format!("seed {seed}"), &mut failures);
    }
    let elapsed = start.elapsed();
    within(2, elapsed, DP2D_TIME, &mut failures);
    verdict(2, "two-objective DP vs brute force", &failures, &format!("{checked} solves, {elapsed:.2?}"));
}

#[test]
fn criterion_3_exact_matches_brute_force() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0;
    for seed in 0..100u64 {
        let mut g = rng(2000 + seed);
        let n = g.gen_range(3..=16);
        let inst = if seed % 2 == 0 {
            random_hyperplane(&mut g, n, 6, Rational::new(1, 8)).unwrap()
        } else {
            random_lifted(&mut g, n, 6).unwrap()
        };
        let k = g.gen_range(1..=5.min(n));
        checked += compare_with_oracle(&inst, k, SolverChoice::Exact, &format!("seed {seed}"), &mut failures);
    }
    let elapsed = start.elapsed();
    within(3, elapsed, EXACT_TIME, &mut failures);
    verdict(3, "general exact solver vs brute force", &failures, &format!("{checked} solves, {elapsed:.2?}"));
}

#[test]
fn criterion_4_approval_matches_brute_force() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0;
    for seed in 0..100u64 {
        let mut g = rng(3000 + seed);
        let d = g.gen_range(1..=4);
        let n = g.gen_range(2..=30);
        let inst = random_approval(&mut g, n, d).unwrap();
        // keep the oracle's enumeration small
        let k = loop {
            let k = g.gen_range(1..=inst.n());
            if binomial(inst.n(), k) <= 30_000 {
                break k;
            }
        };
        let oracle = Oracle::new(&points(&inst));
        for measure in Measure::ALL {
            if k < measure.min_k() {
                continue;
            }
            let got = solve_with(&inst, measure, k, SolverChoice::Approval);
            let (value, _) = oracle.optimum(measure, k);
            if got.optimal_value != value {
                failures.push(format!("seed {seed} {measure} k={k}: solver {} oracle {value}", got.optimal_value));
            }
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    within(4, elapsed, APPROVAL_TIME, &mut failures);
    verdict(4, "approval solver vs brute force", &failures, &format!("{checked} solves, {elapsed:.2?}"));
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Hop distances on the triangular grid inside the window `|i|, |j| <= r`.
fn grid_bfs(r: i64, from: (i64, i64)) -> HashMap<(i64, i64), i64> {
    let steps = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)];
    let mut dist = HashMap::from([(from, 0)]);
    let mut queue = VecDeque::from([from]);
    while let Some((i, j)) = queue.pop_front() {
        let here = dist[&(i, j)];
        for (di, dj) in steps {
            let next = (i + di, j + dj);
            if next.0.abs() <= r && next.1.abs() <= r && !dist.contains_key(&next) {
                dist.insert(next, here + 1);
                queue.push_back(next);
            }
        }
    }
    dist
}

fn dominates(a: &Alternative, b: &Alternative) -> bool {
    a.coords().iter().zip(b.coords()).all(|(x, y)| x >= y) && a != b
}

#[test]
fn criterion_5_embedding_invariants() {
    let start = Instant::now();
    let mut failures = Vec::new();

    // grid metric against breadth-first search
    let window: Vec<(i64, i64)> = (-6..=6).cartesian_product(-6..=6).collect();
    let mut grid_pairs = 0;
    for &v in &window {
        let hops = grid_bfs(6, v);
        let ev = points_of(&trigrid_embed(GridPoint::new(v.0, v.1)));
        for &w in &window {
            let ew = points_of(&trigrid_embed(GridPoint::new(w.0, w.1)));
            if lead(&ew, &ev) != Rational::from_integer(hops[&w]) {
                failures.push(format!("grid {v:?} -> {w:?}: lead {} hops {}", lead(&ew, &ev), hops[&w]));
            }
            grid_pairs += 1;
        }
    }

    // shear threshold equivalence over all pairs of [12]²
    let grid: Vec<(i64, i64)> = (1..=12).cartesian_product(1..=12).collect();
    let m = shear_map(&grid, 12, 4).unwrap();
    if (m.t, m.delta_prime) != (13, 56) {
        failures.push(format!("shear parameters {} {}", m.t, m.delta_prime));
    }
    let images: Vec<Point> = m.points.iter().map(points_of).collect();
    for a in 0..grid.len() {
        for b in 0..grid.len() {
            let near = (grid[a].0 - grid[b].0).abs() + (grid[a].1 - grid[b].1).abs() <= 4;
            let near_image = l1(&images[a], &images[b]) <= Rational::from_integer(56);
            if near != near_image {
                failures.push(format!("shear {:?} {:?}", grid[a], grid[b]));
            }
            if a != b && (images[a][0] == images[b][0] || images[a][1] == images[b][1]) {
                failures.push(format!("shear images of {:?} and {:?} share a coordinate", grid[a], grid[b]));
            }
        }
    }

    // tilted plane on random integer pairs
    let eps = Rational::new(1, 8);
    let mut g = rng(5);
    let (mut near, mut far) = (0, 0);
    for _ in 0..10_000 {
        let x: Vec<i64> = (0..2).map(|_| g.gen_range(-8..=8)).collect();
        let y: Vec<i64> = (0..2).map(|_| g.gen_range(-8..=8)).collect();
        let img = hyperplane_embed(&[Alternative::from_ints(&x), Alternative::from_ints(&y)], eps).unwrap();
        let (fx, fy) = (points_of(&img[0]), points_of(&img[1]));
        let plane = |p: &Point| p[0] + eps * p[1] + eps * p[2];
        if !plane(&fx).is_zero() || !plane(&fy).is_zero() {
            failures.push(format!("{x:?} leaves the plane"));
        }
        if x != y && (dominates(&img[0], &img[1]) || dominates(&img[1], &img[0])) {
            failures.push(format!("{x:?} and {y:?} map to a dominating pair"));
        }
        let dist = (x[0] - y[0]).abs() + (x[1] - y[1]).abs();
        let mapped = l1(&fx, &fy);
        if dist <= 4 {
            near += 1;
            if mapped > Rational::new(9, 2) {
                failures.push(format!("{x:?} {y:?}: distance {dist} maps to {mapped}"));
            }
        } else {
            far += 1;
            if mapped < Rational::from_integer(5) {
                failures.push(format!("{x:?} {y:?}: distance {dist} maps to {mapped}"));
            }
        }
    }
    let elapsed = start.elapsed();
    within(5, elapsed, EMBED_TIME, &mut failures);
    verdict(
        5,
        "embedding invariants",
        &failures,
        &format!(
            "{grid_pairs} grid pairs, {} shear pairs, {near} near / {far} far plane pairs, {elapsed:.2?}",
            grid.len() * grid.len()
        ),
    );
}

fn points_of(a: &Alternative) -> Point {
    a.coords().to_vec()
}

#[test]
fn criterion_6_coverage_uniformity_sandwich() {
    let mut failures = Vec::new();
    let mut ratios = Vec::new();
    for seed in 0..100u64 {
        let mut g = rng(6000 + seed);
        let n = g.gen_range(3..=14);
        let inst = match seed % 3 {
            0 => random_front_2d(&mut g, n, 40),
            1 => random_antichain(&mut g, n, 3, 12),
            _ => random_lifted(&mut g, n, 6).unwrap(),
        };
        if inst.n() < 3 {
            continue;
        }
        let k = g.gen_range(1..=5.min(inst.n() - 1));
        let cover = solve_with(&inst, Measure::Coverage, k, SolverChoice::Auto).optimal_value;
        let spread = solve_with(&inst, Measure::Uniformity, k + 1, SolverChoice::Auto).optimal_value;
        if !(cover <= spread && spread <= cover * 2) {
            failures.push(format!("seed {seed} k={k}: K = {cover}, M = {spread}"));
        }
        if !cover.is_zero() {
            ratios.push(spread / cover);
        }
    }
    let detail = format!(
        "{} instances, M/K in [{}, {}]",
        ratios.len(),
        ratios.iter().min().unwrap(),
        ratios.iter().max().unwrap()
    );
    verdict(6, "K_k <= M_k+1 <= 2 K_k", &failures, &detail);
}

fn is_standout(pts: &[Point], x: usize) -> bool {
    let others = (0..pts.len()).filter(|&y| y != x);
    let weakest_lead = others.clone().map(|y| lead(&pts[x], &pts[y])).min().unwrap();
    let strongest_against = others.map(|y| lead(&pts[y], &pts[x])).max().unwrap();
    weakest_lead > strongest_against
}

fn is_outlier(pts: &[Point], x: usize) -> bool {
    let others: Vec<usize> = (0..pts.len()).filter(|&y| y != x).collect();
    let nearest = others.iter().map(|&y| l1(&pts[x], &pts[y])).min().unwrap();
    let diameter = others
        .iter()
        .tuple_combinations()
        .map(|(&a, &b)| l1(&pts[a], &pts[b]))
        .max()
        .unwrap_or_else(Rational::zero);
    nearest > diameter
}

#[test]
fn criterion_7_consistency() {
    let mut failures = Vec::new();
    let mut slates = 0;
    for seed in 0..1000u64 {
        let mut g = rng(7000 + seed);
        let n = g.gen_range(3..=8);
        let d = g.gen_range(2..=3);
        let (inst, x) = standout_instance(&mut g, n, d);
        let pts = points(&inst);
        if !is_standout(&pts, x) {
            failures.push(format!("standout seed {seed}: alternative {x} is not a standout"));
            continue;
        }
        let k = g.gen_range(1..=inst.n());
        let (_, optimal) = Oracle::new(&pts).optimum(Measure::DirectedCoverage, k);
        slates += optimal.len();
        if let Some(s) = optimal.iter().find(|s| !s.contains(&x)) {
            failures.push(format!("standout seed {seed} k={k}: optimal {s:?} misses {x}"));
        }
    }
    for seed in 0..1000u64 {
        let mut g = rng(8000 + seed);
        let n = g.gen_range(3..=8);
        let d = g.gen_range(2..=4);
        let (inst, x) = outlier_instance(&mut g, n, d);
        let pts = points(&inst);
        if !is_outlier(&pts, x) {
            failures.push(format!("outlier seed {seed}: alternative {x} is not an outlier"));
            continue;
        }
        let k = g.gen_range(2..=inst.n());
        let (_, optimal) = Oracle::new(&pts).optimum(Measure::Coverage, k);
        slates += optimal.len();
        if let Some(s) = optimal.iter().find(|s| !s.contains(&x)) {
            failures.push(format!("outlier seed {seed} k={k}: optimal {s:?} misses {x}"));
        }
    }
    verdict(7, "standout and outlier consistency", &failures, &format!("2000 instances, {slates} optimal slates"));
}

#[test]
fn criterion_8_bench_report() {
    let (code, stdout) = run(&["bench", "--format", "json", "--seed", "11"]);
    let mut failures = Vec::new();
    if code != 0 {
        failures.push(format!("exit code {code}"));
    }
    let report: Value = serde_json::from_slice(&stdout).expect("json");
    let cells = report["cells"].as_array().expect("cells");
    let own = |m: &str| match m {
        "uniformity" => "uniformity",
        "coverage" => "coverage",
        _ => "dcoverage",
    };
    let maximized = ["uniformity", "hypervolume", "avg_sum"];
    for c in cells {
        let tag = format!("{}/{} {}@{}", c["dataset"], c["instance"], c["method"], c["k_pct"]);
        let method = c["method"].as_str().unwrap();
        if c["normalized"][own(method)].as_f64() != Some(100.0) {
            failures.push(format!("{tag}: own measure at {}", c["normalized"][own(method)]));
        }
        for (col, v) in c["normalized"].as_object().unwrap() {
            let Some(v) = v.as_f64() else { continue };
            let ok = if maximized.contains(&col.as_str()) { v <= 100.0 } else { v >= 100.0 };
            if !ok {
                failures.push(format!("{tag}: {col} normalized to {v}"));
            }
        }
    }
    // own optimum never improves as k grows
    let mut by_key: HashMap<(String, String, String), Vec<(u64, Rational)>> = HashMap::new();
    for c in cells {
        let method = c["method"].as_str().unwrap().to_string();
        let raw = parse_rational(c["raw_exact"][own(&method)].as_str().unwrap()).unwrap();
        by_key
            .entry((c["dataset"].to_string(), c["instance"].to_string(), method))
            .or_default()
            .push((c["k_abs"].as_u64().unwrap(), raw));
    }
    for (key, mut series) in by_key {
        series.sort();
        for w in series.windows(2) {
            if w[0].0 < w[1].0 && w[1].1 > w[0].1 {
                failures.push(format!("{key:?}: {} at k={} rises to {} at k={}", w[0].1, w[0].0, w[1].1, w[1].0));
            }
        }
    }
    let datasets: std::collections::BTreeSet<&str> = cells.iter().map(|c| c["dataset"].as_str().unwrap()).collect();
    if datasets.len() < 3 {
        failures.push(format!("datasets {datasets:?}"));
    }
    if !report["missing"].as_array().unwrap().is_empty() {
        failures.push("incomplete cells".into());
    }
    verdict(
        8,
        "bench report on bundled fronts",
        &failures,
        &format!("{} cells over {:?}", cells.len(), datasets),
    );
}

#[test]
fn criterion_9_determinism() {
    let commands: [&[&str]; 6] = [
        &["axioms", "--fixture", "all", "--format", "json"],
        &["axioms", "--random", "--axiom", "standout", "--measure", "dcoverage", "--trials", "200", "--seed", "9", "--format", "json"],
        &["axioms", "--random", "--axiom", "eps-split", "--measure", "coverage", "--trials", "100", "--seed", "9", "--format", "json"],
        &["prune", "--fixture", "monotonicity-b", "--measure", "coverage", "--k", "2", "--all-optimal", "--format", "json"],
        &["bench", "--format", "json", "--seed", "9"],
        &["bench", "--format", "json", "--seed", "9", "--cap", "40", "--k-pcts", "10,50"],
    ];
    let mut failures = Vec::new();
    for args in commands {
        let (c1, a) = run(args);
        let (c2, b) = run(args);
        if c1 != c2 || a != b {
            failures.push(format!("{}: outputs differ", args.join(" ")));
        }
        if a.is_empty() {
            failures.push(format!("{}: no output", args.join(" ")));
        }
    }
    verdict(9, "byte-identical JSON across runs", &failures, &format!("{} commands", commands.len()));
}
