use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "prune", version, about = "Exact Pareto front pruning")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Reject input files containing dominated rows (default).
    #[arg(long, global = true, overrides_with = "lenient")]
    strict: bool,

    /// Drop dominated rows with a warning.
    #[arg(long, global = true, overrides_with = "strict")]
    lenient: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute an optimal slate.
    Prune(PruneArgs),
    /// Score a given slate.
    Evaluate(EvaluateArgs),
    /// Check axioms on compiled fixtures or random cases.
    Axioms(AxiomsArgs),
    /// Transform a point set with one of the distance-preserving maps.
    Embed(EmbedArgs),
    /// Compare the three methods on a set of fronts.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
pub struct InputArgs {
    /// Instance CSV file (`-` for stdin).
    #[arg(required_unless_present = "fixture")]
    pub input: Option<PathBuf>,

    /// Use a compiled fixture instance instead of a file.
    #[arg(long, conflicts_with = "input")]
    pub fixture: Option<String>,
}

#[derive(Args, Debug)]
pub struct LimitArgs {
    /// Search nodes before giving up.
    #[arg(long)]
    pub node_budget: Option<u64>,

    /// Wall-clock seconds before giving up.
    #[arg(long)]
    pub time_limit: Option<f64>,
}

#[derive(Args, Debug)]
pub struct PruneArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[arg(long, short)]
    pub measure: String,

    /// Slate size, absolute or with a trailing `%`.
    #[arg(long, short)]
    pub k: String,

    /// auto, dp2d, approval, exact or brute.
    #[arg(long, default_value = "auto")]
    pub solver: String,

    /// Also list every optimal slate.
    #[arg(long)]
    pub all_optimal: bool,

    #[command(flatten)]
    pub limits: LimitArgs,
}

#[derive(Args, Debug)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// File of 0-based indices separated by commas or whitespace.
    #[arg(long, conflicts_with = "members")]
    pub slate: Option<PathBuf>,

    /// Inline 0-based indices, e.g. `0,2,5`.
    #[arg(long, value_delimiter = ',')]
    pub members: Option<Vec<usize>>,

    /// Measures to report: uniformity, coverage, dcoverage, hypervolume, avg_sum.
    #[arg(long, value_delimiter = ',')]
    pub measures: Option<Vec<String>>,
}

#[derive(Args, Debug)]
pub struct AxiomsArgs {
    /// Fixture id (`<axiom>/<measure>`) or `all`.
    #[arg(long, conflicts_with = "random", required_unless_present = "random")]
    pub fixture: Option<String>,

    /// Search random cases instead.
    #[arg(long, requires_all = ["axiom", "measure"])]
    pub random: bool,

    #[arg(long)]
    pub axiom: Option<String>,

    #[arg(long)]
    pub measure: Option<String>,

    #[arg(long, default_value_t = 100)]
    pub trials: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum EmbedKind {
    /// Planar points to four objectives.
    Lift,
    /// Planar points to three objectives on a tilted plane.
    Hyperplane,
    /// Integer grid points `(i, j)` to `(i, j, -i-j)`.
    Trigrid,
    /// Integer grid points to the sheared planar set.
    Shear,
}

#[derive(Args, Debug)]
pub struct EmbedArgs {
    #[arg(value_enum)]
    pub kind: EmbedKind,

    /// CSV of planar points (`-` for stdin).
    pub input: PathBuf,

    /// Plane tilt for `hyperplane`.
    #[arg(long, default_value = "1/8")]
    pub eps: String,

    /// Grid side for `shear`.
    #[arg(long)]
    pub n: Option<i64>,

    /// Grid threshold for `shear`.
    #[arg(long)]
    pub delta: Option<i64>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Instance files or directories of them; the bundled fronts when omitted.
    pub inputs: Vec<PathBuf>,

    #[arg(long, value_delimiter = ',', default_value = "5,10,25")]
    pub k_pcts: Vec<f64>,

    #[arg(long, value_delimiter = ',')]
    pub methods: Option<Vec<String>>,

    #[arg(long, default_value_t = 200)]
    pub cap: usize,

    /// Directory for report.json, summary.csv, cells.csv and plot data.
    #[arg(long)]
    pub output: Option<PathBuf>,

    #[command(flatten)]
    pub limits: LimitArgs,
}

pub struct Global {
    pub seed: u64,
    pub lenient: bool,
    pub format: Format,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let global = Global {
        seed: cli.seed,
        lenient: cli.lenient && !cli.strict,
        format: cli.format,
    };
    let outcome = match &cli.command {
        Command::Prune(a) => commands::prune(&global, a),
        Command::Evaluate(a) => commands::evaluate(&global, a),
        Command::Axioms(a) => commands::axioms(&global, a),
        Command::Embed(a) => commands::embed(&global, a),
        Command::Bench(a) => commands::bench(&global, a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
