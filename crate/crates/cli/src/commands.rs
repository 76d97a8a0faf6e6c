use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use prune_core::axioms::{self, random_trials, run_fixture, Axiom, FixtureOutcome};
use prune_core::embeddings::{antisymmetric_lift, hyperplane_embed, shear_map, trigrid_embed, GridPoint};
use prune_core::harness::csvio::{read_instance, read_points, write_points};
use prune_core::harness::{
    fronts, k_for_percent, run_experiment, Dataset, ExperimentConfig, ReadOptions, Strictness,
};
use prune_core::measures::{default_reference_point, evaluate as measure_value};
use prune_core::solvers::SolveLimits;
use prune_core::{
    avg_sum_objective, format_rational, format_volume, hypervolume, parse_rational, solve, Alternative, Error,
    Instance, Measure, Rational, Slate, SolveRequest, SolverChoice,
};

use crate::{AxiomsArgs, BenchArgs, EmbedArgs, EmbedKind, EvaluateArgs, Format, Global, InputArgs, LimitArgs, PruneArgs};

/// A failure with a fixed process exit code.
#[derive(Debug)]
struct Exit(u8, String);

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.1)
    }
}

impl std::error::Error for Exit {}

pub fn exit_code(e: &anyhow::Error) -> u8 {
    if let Some(Exit(code, _)) = e.downcast_ref::<Exit>() {
        return *code;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::Incomplete(_)) => 3,
        Some(Error::Internal(_) | Error::Overflow(_)) => 1,
        Some(_) => 2,
        None if e.downcast_ref::<io::Error>().is_some() => 2,
        None => 1,
    }
}

fn input_error(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(Error::Input(msg.into()))
}

fn read_source(path: &Path) -> Result<Vec<u8>> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf)?;
        Ok(buf)
    } else {
        fs::read(path).map_err(|e| anyhow!(Error::Io(e)).context(format!("reading {}", path.display())))
    }
}

fn read_options(g: &Global) -> ReadOptions {
    ReadOptions {
        strictness: if g.lenient { Strictness::Lenient } else { Strictness::Strict },
        ..Default::default()
    }
}

fn load(g: &Global, args: &InputArgs) -> Result<Instance> {
    if let Some(name) = &args.fixture {
        return axioms::fixture_instance(name).ok_or_else(|| {
            let known: Vec<String> = axioms::fixture_instances().iter().map(|i| i.name().to_string()).collect();
            input_error(format!("unknown fixture instance '{name}' (known: {})", known.join(", ")))
        });
    }
    let path = args.input.as_ref().expect("clap requires input or fixture");
    let name = path
        .file_stem()
        .map_or_else(|| "stdin".to_string(), |s| s.to_string_lossy().into_owned());
    Ok(read_instance(read_source(path)?.as_slice(), &name, read_options(g))?)
}

fn limits(args: &LimitArgs) -> Result<SolveLimits> {
    let mut l = SolveLimits::default();
    if let Some(n) = args.node_budget {
        l.node_budget = n;
    }
    if let Some(t) = args.time_limit {
        if !(t > 0.0 && t.is_finite()) {
            return Err(input_error(format!("time limit must be positive, got {t}")));
        }
        l.time_budget = Some(Duration::from_secs_f64(t));
    }
    Ok(l)
}

/// Parses `k` as an absolute size or a percentage of `n` with a trailing `%`.
fn parse_k(text: &str, n: usize) -> Result<usize> {
    let t = text.trim();
    if let Some(pct) = t.strip_suffix('%') {
        let p: f64 = pct.trim().parse().map_err(|_| input_error(format!("bad percentage '{t}'")))?;
        if !(p > 0.0 && p <= 100.0) {
            return Err(input_error(format!("percentage {p} is outside (0, 100]")));
        }
        Ok(k_for_percent(p, n))
    } else {
        t.parse().map_err(|_| input_error(format!("bad slate size '{t}'")))
    }
}

fn parse_measure(s: &str) -> Result<Measure> {
    Ok(s.parse::<Measure>()?)
}

fn coords(a: &Alternative) -> Vec<String> {
    a.coords().iter().map(format_rational).collect()
}

fn print_json(v: &Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn join(members: &[usize]) -> String {
    members.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

pub fn prune(g: &Global, a: &PruneArgs) -> Result<()> {
    let inst = load(g, &a.input)?;
    let measure = parse_measure(&a.measure)?;
    let k = parse_k(&a.k, inst.n())?;
    let solver: SolverChoice = a.solver.parse()?;
    let req = SolveRequest::new(&inst, measure, k)
        .solver(solver)
        .all_optimal(a.all_optimal)
        .limits(limits(&a.limits)?);
    let r = solve(&req)?;
    let value = format_rational(&r.optimal_value);
    match g.format {
        Format::Json => {
            let mut out = json!({
                "instance": inst.name(),
                "measure": measure,
                "k": k,
                "value": value,
                "solver": r.solver,
                "slate": r.slate.members(),
                "points": r.slate.points(&inst).map(coords).collect::<Vec<_>>(),
                "stats": r.stats,
            });
            if let Some(all) = &r.all_optimal {
                out["all_optimal"] = json!(all.iter().map(Slate::members).collect::<Vec<_>>());
            }
            print_json(&out)
        }
        Format::Csv => {
            println!("measure,k,value,slate");
            let slates = r.all_optimal.clone().unwrap_or_else(|| vec![r.slate.clone()]);
            for s in &slates {
                println!("{},{k},{value},{}", measure.id(), join(s.members()));
            }
            Ok(())
        }
        Format::Text => {
            println!("{measure} = {value} (k = {k}, n = {}, solver {})", inst.n(), r.solver);
            println!("slate: {}", join(r.slate.members()));
            for i in r.slate.members() {
                println!("  #{i}: ({})", coords(inst.alternative(*i)).join(", "));
            }
            if let Some(all) = &r.all_optimal {
                println!("optimal slates: {}", all.len());
                for s in all {
                    println!("  {}", join(s.members()));
                }
            }
            Ok(())
        }
    }
}

fn parse_indices(text: &str) -> Result<Vec<usize>> {
    text.lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .flat_map(|l| l.split(|c: char| c == ',' || c.is_whitespace()))
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| input_error(format!("bad slate index '{t}'"))))
        .collect()
}

const SCORE_NAMES: [&str; 5] = ["uniformity", "coverage", "dcoverage", "hypervolume", "avg_sum"];

pub fn evaluate(g: &Global, a: &EvaluateArgs) -> Result<()> {
    let inst = load(g, &a.input)?;
    let members = match (&a.slate, &a.members) {
        (Some(path), _) => parse_indices(&String::from_utf8_lossy(&read_source(path)?))?,
        (None, Some(m)) => m.clone(),
        (None, None) => return Err(input_error("give the slate with --slate <file> or --members i,j,..")),
    };
    let slate = Slate::new(members, inst.n())?;
    let requested: Vec<String> = match &a.measures {
        Some(m) => m.iter().map(|s| s.trim().to_ascii_lowercase()).collect(),
        None => SCORE_NAMES
            .iter()
            .filter(|m| slate.k() >= 2 || **m != "uniformity")
            .map(|m| m.to_string())
            .collect(),
    };
    let mut scores = Vec::new();
    for name in &requested {
        let value = match name.as_str() {
            "hypervolume" | "hv" => format_volume(&hypervolume(&slate, &inst, &default_reference_point(&inst))?),
            "avg_sum" | "avg" | "avgsum" => format_rational(&avg_sum_objective(&slate, &inst)?),
            other => format_rational(&measure_value(parse_measure(other)?, &slate, &inst)?),
        };
        scores.push((name.clone(), value));
    }
    match g.format {
        Format::Json => {
            let mut obj = serde_json::Map::new();
            for (name, value) in &scores {
                obj.insert(name.clone(), json!(value));
            }
            print_json(&json!({"instance": inst.name(), "slate": slate.members(), "scores": obj}))
        }
        Format::Csv => {
            println!("{}", scores.iter().map(|s| s.0.as_str()).collect::<Vec<_>>().join(","));
            println!("{}", scores.iter().map(|s| s.1.as_str()).collect::<Vec<_>>().join(","));
            Ok(())
        }
        Format::Text => {
            for (name, value) in &scores {
                println!("{name:<12} {value}");
            }
            Ok(())
        }
    }
}

fn mark(holds: bool) -> &'static str {
    if holds {
        "✓"
    } else {
        "✗"
    }
}

fn outcome_json(o: &FixtureOutcome) -> Value {
    json!({
        "id": o.id,
        "axiom": o.axiom,
        "measure": o.measure,
        "holds": o.holds,
        "expected_holds": o.expect.holds,
        "before": format_rational(&o.witness.before_value),
        "after": o.witness.after_value.as_ref().map(format_rational),
        "alternative": coords(&o.witness.alternative),
        "matches": o.matches,
    })
}

fn matrix_text(outcomes: &[FixtureOutcome]) -> String {
    let mut out = String::new();
    write!(out, "{:<14}", "axiom").unwrap();
    for m in Measure::ALL {
        write!(out, " {:>11}", m.id()).unwrap();
    }
    out.push('\n');
    for ax in Axiom::ALL {
        write!(out, "{:<14}", ax.id()).unwrap();
        for m in Measure::ALL {
            let cell = outcomes
                .iter()
                .find(|o| o.axiom == ax && o.measure == m)
                .map_or("?", |o| mark(o.holds));
            write!(out, " {cell:>11}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn axioms(g: &Global, a: &AxiomsArgs) -> Result<()> {
    if a.random {
        let axiom: Axiom = a.axiom.as_deref().expect("clap requires --axiom").parse()?;
        let measure = parse_measure(a.measure.as_deref().expect("clap requires --measure"))?;
        let s = random_trials(axiom, measure, a.trials, g.seed)?;
        match g.format {
            Format::Json => print_json(&json!({"axiom": axiom, "measure": measure, "seed": g.seed, "summary": s}))?,
            Format::Csv => {
                println!("axiom,measure,trials,holds,violated,not_applicable,first_violation");
                println!(
                    "{axiom},{measure},{},{},{},{},{}",
                    s.trials,
                    s.holds,
                    s.violated,
                    s.not_applicable,
                    s.first_violation.map_or(String::new(), |v| v.to_string())
                );
            }
            Format::Text => {
                println!(
                    "{axiom}/{measure}: {} trials, {} hold, {} violated, {} not applicable",
                    s.trials, s.holds, s.violated, s.not_applicable
                );
                if let Some(seed) = s.first_violation {
                    println!("first violation: case seed {seed}");
                }
            }
        }
        return Ok(());
    }

    let id = a.fixture.as_deref().expect("clap requires --fixture");
    let fixtures = if id == "all" {
        axioms::catalog()
    } else {
        vec![axioms::fixture(id).ok_or_else(|| {
            input_error(format!("unknown fixture '{id}'; ids are <axiom>/<measure>, or 'all'"))
        })?]
    };
    let outcomes = fixtures.iter().map(run_fixture).collect::<std::result::Result<Vec<_>, _>>()?;
    match g.format {
        Format::Json => print_json(&Value::Array(outcomes.iter().map(outcome_json).collect()))?,
        Format::Csv => {
            println!("id,holds,expected_holds,before,after,matches");
            for o in &outcomes {
                println!(
                    "{},{},{},{},{},{}",
                    o.id,
                    o.holds,
                    o.expect.holds,
                    format_rational(&o.witness.before_value),
                    o.witness.after_value.as_ref().map_or(String::new(), format_rational),
                    o.matches
                );
            }
        }
        Format::Text => {
            if id == "all" {
                print!("{}", matrix_text(&outcomes));
                println!();
            }
            for o in &outcomes {
                let after = o
                    .witness
                    .after_value
                    .as_ref()
                    .map_or(String::new(), |v| format!(" -> {}", format_rational(v)));
                println!(
                    "{:<26} {} {}{after} {}",
                    o.id,
                    mark(o.holds),
                    format_rational(&o.witness.before_value),
                    if o.matches { "ok" } else { "MISMATCH" }
                );
            }
        }
    }
    let bad: Vec<&str> = outcomes.iter().filter(|o| !o.matches).map(|o| o.id.as_str()).collect();
    if !bad.is_empty() {
        bail!(Exit(4, format!("fixture mismatch: {}", bad.join(", "))));
    }
    Ok(())
}

fn integer_pairs(points: &[Alternative]) -> Result<Vec<(i64, i64)>> {
    points
        .iter()
        .map(|p| {
            if p.dim() != 2 || p.coords().iter().any(|c| !c.is_integer()) {
                return Err(input_error("grid input needs two integer columns"));
            }
            Ok((p.coord(0).to_integer(), p.coord(1).to_integer()))
        })
        .collect()
}

pub fn embed(g: &Global, a: &EmbedArgs) -> Result<()> {
    let points = read_points(read_source(&a.input)?.as_slice())?;
    let mut extra = serde_json::Map::new();
    let out: Vec<Alternative> = match a.kind {
        EmbedKind::Lift => antisymmetric_lift(&points)?,
        EmbedKind::Hyperplane => {
            let eps: Rational = parse_rational(&a.eps)?;
            extra.insert("eps".into(), json!(format_rational(&eps)));
            hyperplane_embed(&points, eps)?
        }
        EmbedKind::Trigrid => integer_pairs(&points)?
            .into_iter()
            .map(|(i, j)| trigrid_embed(GridPoint::new(i, j)))
            .collect(),
        EmbedKind::Shear => {
            let (Some(n), Some(delta)) = (a.n, a.delta) else {
                return Err(input_error("shear needs --n and --delta"));
            };
            let m = shear_map(&integer_pairs(&points)?, n, delta)?;
            extra.insert("t".into(), json!(m.t));
            extra.insert("delta_prime".into(), json!(m.delta_prime));
            log::info!("shear: t = {}, threshold {}", m.t, m.delta_prime);
            m.points
        }
    };
    let d = out.first().map_or(0, Alternative::dim);
    match g.format {
        Format::Json => {
            extra.insert("points".into(), json!(out.iter().map(coords).collect::<Vec<_>>()));
            print_json(&Value::Object(extra))
        }
        Format::Csv | Format::Text => {
            write_points(io::stdout().lock(), d, &out)?;
            Ok(())
        }
    }
}

fn dataset_from(path: &PathBuf, opts: ReadOptions) -> Result<Dataset> {
    let name = path
        .file_stem()
        .map_or_else(|| "dataset".to_string(), |s| s.to_string_lossy().into_owned());
    let mut files = Vec::new();
    if path.is_dir() {
        for entry in fs::read_dir(path).with_context(|| format!("listing {}", path.display()))? {
            let p = entry?.path();
            if p.extension().is_some_and(|e| e == "csv") {
                files.push(p);
            }
        }
        files.sort();
        if files.is_empty() {
            return Err(input_error(format!("no .csv files in {}", path.display())));
        }
    } else {
        files.push(path.clone());
    }
    let instances = files
        .iter()
        .map(|f| prune_core::harness::ingest_csv(f, opts).map_err(|e| anyhow!(e).context(f.display().to_string())))
        .collect::<Result<Vec<_>>>()?;
    Ok(Dataset { name, instances })
}

pub fn bench(g: &Global, a: &BenchArgs) -> Result<()> {
    let datasets = if a.inputs.is_empty() {
        fronts::bundled()?
            .into_iter()
            .map(|(name, inst)| Dataset {
                name,
                instances: vec![inst],
            })
            .collect()
    } else {
        a.inputs
            .iter()
            .map(|p| dataset_from(p, read_options(g)))
            .collect::<Result<Vec<_>>>()?
    };
    let mut cfg = ExperimentConfig::new(datasets);
    cfg.k_percents = a.k_pcts.clone();
    if let Some(m) = &a.methods {
        cfg.methods = m.iter().map(|s| parse_measure(s)).collect::<Result<_>>()?;
    }
    cfg.cap = a.cap;
    cfg.seed = g.seed;
    cfg.output_dir = a.output.clone();
    cfg.limits = limits(&a.limits)?;
    let report = run_experiment(&cfg)?;
    match g.format {
        Format::Json => println!("{}", report.to_json()?),
        Format::Csv => print!("{}", report.summary_csv()),
        Format::Text => print!("{}", report.to_text()),
    }
    let violations = report.invariant_violations();
    for v in &violations {
        log::error!("{v}");
    }
    if !violations.is_empty() {
        bail!(Exit(1, format!("{} report invariant violations", violations.len())));
    }
    if !report.missing.is_empty() {
        bail!(Exit(3, format!("{} cells incomplete", report.missing.len())));
    }
    Ok(())
}
