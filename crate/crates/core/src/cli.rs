//! The `kbest` command line.
//!
//! Exit codes: 0 success, 1 usage, 2 unreadable or invalid instance,
//! 3 instance above an oracle limit, 4 pool/oracle mismatch in `compare`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::bench::{run_bench, write_csv, BenchConfig};
use crate::engine::{run_engine, EngineKind};
use crate::error::Error;
use crate::held_karp::HELD_KARP_LIMIT;
use crate::instance::{embed_complete_for, parse_instance, random_instance, RandomSpec, WeightedInstance};
use crate::report::{compare_engines, counterexamples, ComparisonJson, ResultJson};
use crate::system::{
    ExchangeSystem, HamiltonSystem, Shaped, TreeSystem, BRUTE_FORCE_TOUR_LIMIT, BRUTE_FORCE_TREE_LIMIT,
};
use crate::weight::{Objective, Weight};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "kbest",
    version,
    about = "K best Hamilton cycles and spanning trees by exchange enumeration"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rank the K best solutions of an instance.
    Solve(SolveArgs),
    /// Rank the K best solutions by exhaustive enumeration.
    Oracle(SolveArgs),
    /// Run pool, greedy and oracle and report where they disagree.
    Compare(CompareArgs),
    /// Write a seeded random instance to stdout.
    Gen(GenArgs),
    /// Time the engines for growing K and print CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum ObjectiveArg {
    Min,
    Max,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Objective {
        match o {
            ObjectiveArg::Min => Objective::Min,
            ObjectiveArg::Max => Objective::Max,
        }
    }
}

#[derive(Debug, Args)]
struct LimitArgs {
    /// Largest n for the exact tour solver.
    #[arg(long, default_value_t = HELD_KARP_LIMIT)]
    max_n_solver: usize,
    /// Largest n for exhaustive tour enumeration.
    #[arg(long, default_value_t = BRUTE_FORCE_TOUR_LIMIT)]
    max_n_tours: usize,
    /// Largest n for exhaustive spanning-tree enumeration.
    #[arg(long, default_value_t = BRUTE_FORCE_TREE_LIMIT)]
    max_n_trees: usize,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, value_enum, default_value_t = EngineKind::Pool)]
    engine: EngineKind,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Min)]
    objective: ObjectiveArg,
    /// Complete missing edges with a big-M penalty instead of failing.
    #[arg(long)]
    allow_incomplete: bool,
    /// Write the result here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Rank spanning trees instead of tours.
    #[arg(long)]
    trees: bool,
    /// Write elapsed times as 0.
    #[arg(long)]
    no_timing: bool,
    #[command(flatten)]
    limits: LimitArgs,
}

#[derive(Debug, Args)]
struct CompareArgs {
    /// Compare on this instance; without it a seeded suite is generated.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Min)]
    objective: ObjectiveArg,
    #[arg(long)]
    allow_incomplete: bool,
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    trees: bool,
    #[arg(long)]
    no_timing: bool,
    /// Vertex counts of the generated suite, used round-robin.
    #[arg(long = "n", default_values_t = [5usize, 6, 7, 8])]
    ns: Vec<usize>,
    /// Number of generated instances.
    #[arg(long, default_value_t = 50)]
    count: usize,
    /// Seed of the first generated instance; instance i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    weight_min: String,
    #[arg(long, default_value = "100", allow_hyphen_values = true)]
    weight_max: String,
    #[arg(long, default_value_t = 1.0)]
    density: f64,
    /// Where witnesses of disagreements are written.
    #[arg(long, default_value = "counterexamples")]
    counterexample_dir: PathBuf,
    #[command(flatten)]
    limits: LimitArgs,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    weight_min: String,
    #[arg(long, default_value = "100", allow_hyphen_values = true)]
    weight_max: String,
    #[arg(long, default_value_t = 1.0)]
    density: f64,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k_max: usize,
    #[arg(long, default_value_t = 1)]
    step: usize,
    #[arg(long, value_enum, default_value_t = EngineKind::Pool)]
    engine: EngineKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    no_timing: bool,
}

/// Resolved settings of one `solve`/`oracle`/`compare` run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub k: usize,
    pub engine: EngineKind,
    pub objective: Objective,
    pub allow_incomplete: bool,
    pub json: Option<PathBuf>,
    pub seed: u64,
    pub trees: bool,
    pub timing: bool,
    pub limits: Limits,
}

#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub solver: usize,
    pub brute_force_tours: usize,
    pub brute_force_trees: usize,
}

impl From<&LimitArgs> for Limits {
    fn from(a: &LimitArgs) -> Limits {
        Limits {
            solver: a.max_n_solver,
            brute_force_tours: a.max_n_tours,
            brute_force_trees: a.max_n_trees,
        }
    }
}

impl RunConfig {
    fn validate(&self) -> Result<(), Error> {
        if self.k == 0 {
            return Err(Error::InvalidParameter("--k must be at least 1".into()));
        }
        Ok(())
    }
}

fn exit_code(err: &Error) -> i32 {
    match err.root() {
        Error::InstanceTooLarge { .. } => EXIT_LIMIT,
        Error::InvalidParameter(_) => EXIT_USAGE,
        Error::Parse(_)
        | Error::DuplicateEdge { .. }
        | Error::SelfLoop { .. }
        | Error::VertexOutOfRange { .. }
        | Error::WeightOverflow(_)
        | Error::IncompleteInstance { .. }
        | Error::DisconnectedGraph
        | Error::Io(_) => EXIT_PARSE,
        _ => EXIT_USAGE,
    }
}

/// Runs the CLI with explicit arguments and streams; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    let outcome = match cli.command {
        Command::Solve(a) => cmd_solve(&solve_config(&a, a.engine), stdout),
        Command::Oracle(a) => cmd_solve(&solve_config(&a, EngineKind::Oracle), stdout),
        Command::Compare(a) => cmd_compare(&a, stdout, stderr),
        Command::Gen(a) => cmd_gen(&a, stdout),
        Command::Bench(a) => cmd_bench(&a, stdout),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn solve_config(a: &SolveArgs, engine: EngineKind) -> RunConfig {
    RunConfig {
        input: Some(a.input.clone()),
        k: a.k,
        engine,
        objective: a.objective.into(),
        allow_incomplete: a.allow_incomplete,
        json: a.json.clone(),
        seed: 0,
        trees: a.trees,
        timing: !a.no_timing,
        limits: (&a.limits).into(),
    }
}

fn parse_weight_arg(s: &str) -> Result<Weight, Error> {
    s.parse().map_err(|e: Error| Error::InvalidParameter(e.to_string()))
}

fn read_instance(path: &Path) -> Result<WeightedInstance, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_instance(&text)
}

/// Completes the instance when allowed; tours need `K_n`.
fn prepare_tours(inst: WeightedInstance, cfg: &RunConfig) -> Result<WeightedInstance, Error> {
    if inst.is_complete() || !cfg.allow_incomplete {
        return Ok(inst);
    }
    Ok(embed_complete_for(&inst, cfg.objective)?.0)
}

fn emit<T: Serialize>(value: &T, path: Option<&Path>, stdout: &mut dyn Write) -> Result<(), Error> {
    let body = serde_json::to_string_pretty(value).expect("serializable") + "\n";
    match path {
        Some(p) => fs::write(p, body).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => stdout.write_all(body.as_bytes()).map_err(|e| Error::Io(e.to_string())),
    }
}

fn solve_with<Sys: ExchangeSystem>(sys: &Sys, cfg: &RunConfig) -> Result<ResultJson, Error>
where
    Sys::Solution: Shaped,
{
    let (list, stats) = run_engine(sys, cfg.engine, cfg.k, cfg.objective)?;
    Ok(ResultJson::new(cfg.engine.as_str(), &list, &stats, cfg.timing))
}

/// `solve` and `oracle`.
pub fn cmd_solve(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<i32, Error> {
    cfg.validate()?;
    let path = cfg
        .input
        .as_deref()
        .ok_or_else(|| Error::InvalidParameter("--input is required".into()))?;
    let inst = read_instance(path)?;
    let result = if cfg.trees {
        let sys = TreeSystem::new(&inst)?.with_limit(cfg.limits.brute_force_trees);
        solve_with(&sys, cfg)?
    } else {
        let inst = prepare_tours(inst, cfg)?;
        let sys = HamiltonSystem::new(&inst)?.with_limits(cfg.limits.solver, cfg.limits.brute_force_tours);
        solve_with(&sys, cfg)?
    };
    emit(&result, cfg.json.as_deref(), stdout)?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct SuiteJson {
    instances_compared: usize,
    pool_mismatches: usize,
    greedy_matches: usize,
    greedy_match_fraction: f64,
    counterexamples: Vec<String>,
    reports: Vec<ComparisonJson>,
}

fn compare_one(inst: &WeightedInstance, cfg: &RunConfig, dir: &Path, suite: &mut SuiteJson) -> Result<(), Error> {
    let (json, witnesses) = if cfg.trees {
        let sys = TreeSystem::new(inst)?.with_limit(cfg.limits.brute_force_trees);
        let report = compare_engines(&sys, cfg.k, cfg.objective)?;
        (
            ComparisonJson::new("tree", &report, cfg.timing),
            counterexamples("tree", inst, &report),
        )
    } else {
        let sys = HamiltonSystem::new(inst)?.with_limits(cfg.limits.solver, cfg.limits.brute_force_tours);
        let report = compare_engines(&sys, cfg.k, cfg.objective)?;
        (
            ComparisonJson::new("tour", &report, cfg.timing),
            counterexamples("tour", inst, &report),
        )
    };
    suite.instances_compared += 1;
    suite.pool_mismatches += usize::from(!json.pool_matches_oracle);
    suite.greedy_matches += usize::from(json.greedy_matches_oracle);
    for w in witnesses {
        let path = w.write_to(dir)?;
        suite.counterexamples.push(path.display().to_string());
    }
    suite.reports.push(json);
    Ok(())
}

fn cmd_compare(a: &CompareArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Error> {
    let cfg = RunConfig {
        input: a.input.clone(),
        k: a.k,
        engine: EngineKind::Pool,
        objective: a.objective.into(),
        allow_incomplete: a.allow_incomplete,
        json: a.json.clone(),
        seed: a.seed,
        trees: a.trees,
        timing: !a.no_timing,
        limits: (&a.limits).into(),
    };
    cfg.validate()?;
    let mut suite = SuiteJson {
        instances_compared: 0,
        pool_mismatches: 0,
        greedy_matches: 0,
        greedy_match_fraction: 0.0,
        counterexamples: Vec::new(),
        reports: Vec::new(),
    };
    if let Some(path) = &cfg.input {
        let inst = read_instance(path)?;
        let inst = if cfg.trees { inst } else { prepare_tours(inst, &cfg)? };
        compare_one(&inst, &cfg, &a.counterexample_dir, &mut suite)?;
    } else {
        if a.ns.is_empty() || a.count == 0 {
            return Err(Error::InvalidParameter("--n and --count must be non-empty".into()));
        }
        let weight_min = parse_weight_arg(&a.weight_min)?;
        let weight_max = parse_weight_arg(&a.weight_max)?;
        for i in 0..a.count {
            let spec = RandomSpec {
                n: a.ns[i % a.ns.len()],
                weight_min,
                weight_max,
                seed: a.seed + i as u64,
                density: a.density,
            };
            let inst = random_instance(&spec)?;
            let inst = if cfg.trees {
                if !inst.is_connected() {
                    continue;
                }
                inst
            } else {
                embed_complete_for(&inst, cfg.objective)?.0
            };
            compare_one(&inst, &cfg, &a.counterexample_dir, &mut suite)?;
        }
    }
    if suite.instances_compared > 0 {
        suite.greedy_match_fraction = suite.greedy_matches as f64 / suite.instances_compared as f64;
    }
    emit(&suite, cfg.json.as_deref(), stdout)?;
    if suite.pool_mismatches > 0 {
        let _ = writeln!(
            stderr,
            "pool/oracle mismatch on {} instance(s); witnesses in {}",
            suite.pool_mismatches,
            a.counterexample_dir.display()
        );
        return Ok(EXIT_MISMATCH);
    }
    Ok(EXIT_OK)
}

fn cmd_gen(a: &GenArgs, stdout: &mut dyn Write) -> Result<i32, Error> {
    let spec = RandomSpec {
        n: a.n,
        weight_min: parse_weight_arg(&a.weight_min)?,
        weight_max: parse_weight_arg(&a.weight_max)?,
        seed: a.seed,
        density: a.density,
    };
    let inst = random_instance(&spec)?;
    stdout
        .write_all(inst.to_text().as_bytes())
        .map_err(|e| Error::Io(e.to_string()))?;
    Ok(EXIT_OK)
}

fn cmd_bench(a: &BenchArgs, stdout: &mut dyn Write) -> Result<i32, Error> {
    let records = run_bench(&BenchConfig {
        n: a.n,
        k_max: a.k_max,
        step: a.step,
        engine: a.engine,
        seed: a.seed,
    })?;
    write_csv(&records, !a.no_timing, stdout)?;
    Ok(EXIT_OK)
}
