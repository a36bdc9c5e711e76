//! The `amalg` command line: argument parsing, input files, and reports.
//!
//! Every command builds a JSON report. `--json` prints it as is; otherwise
//! it is rendered as indented text. Exit codes: 0 when every check passed,
//! 1 when a check failed (the report carries the certificate), 2 on errors,
//! inconclusive enumerations and bound-limited results.

mod harness;
mod text;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::costlaws::{
    check_free_join_cost, finite_group_cost, ten_to_minus, thompson_bound, thompson_conclusion,
    triangle_cost_bound,
};
use crate::diagram::{brown_triangle, DiagramFile, ReportOptions, TriangleDiagram};
use crate::error::{Error, Result};
use crate::fpgroup::angle::{shortest_kernel_word, AngleN, DEFAULT_MAX_N};
use crate::fpgroup::coset::{enumerate_cosets, Strategy, TableStatus};
use crate::fpgroup::presentation::PresentationFile;
use crate::joins::{
    check_freejoin_theorem, check_reduction_theorem, default_loop_bound, find_reduced_loop,
    is_free_amalgamated_join, is_triangle_join, uniqueness_check, validate_reduced_loop,
    validate_triangle_loop, JoinWitness, RelationTriple, SearchStatus, SystemFile, TriangleSystem, TripleFile,
};
use crate::mesrel::{
    generate_relation, graphing_cost, is_treeing, relation_cost_by_measure, relation_min_cost, FiniteMeasuredSpace,
    FiniteRelation, Graphing, RelationFile, SpaceFile,
};
use crate::perm::{intersect, PermGroup, Permutation, DEFAULT_CLOSURE_CAP};
use crate::rational;

pub use harness::{check_system, check_triple, partition_shapes, random_harness, HarnessConfig, HarnessSummary, SystemCounts, TripleCounts};

pub const DEFAULT_COSET_CAP: usize = 1_000_000;
pub const COSET_CAP_ENV: &str = "AMALG_CAP_COSETS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    CheckTriangle,
    Brown,
    Angle,
    Coset,
    Cost,
    JoinCheck,
    ThompsonCost,
    RandomCheck,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Output {
    Text,
    Json,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub input_path: Option<PathBuf>,
    pub brown: Option<u64>,
    pub p_max: Option<u64>,
    pub cap_cosets: usize,
    pub cap_closure: usize,
    pub loop_bound: Option<usize>,
    pub max_n: usize,
    pub seed: u64,
    pub instances: usize,
    pub points: usize,
    pub systems: usize,
    pub exhaustive: bool,
    pub angles: bool,
    pub retri: bool,
    pub failure_dir: PathBuf,
    pub output: Output,
}

impl RunConfig {
    pub fn new(command: Command) -> RunConfig {
        RunConfig {
            command,
            input_path: None,
            brown: None,
            p_max: None,
            cap_cosets: DEFAULT_COSET_CAP,
            cap_closure: DEFAULT_CLOSURE_CAP,
            loop_bound: None,
            max_n: DEFAULT_MAX_N,
            seed: 0,
            instances: 1000,
            points: 10,
            systems: 200,
            exhaustive: false,
            angles: false,
            retri: false,
            failure_dir: PathBuf::from("amalg-failures"),
            output: Output::Text,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "amalg", version, about = "Triangle amalgams, coset enumeration and cost checks")]
pub struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Subcommand, Debug)]
enum CliCommand {
    /// Check a triangle of finite groups: embeddings, fillability, minimality, angles.
    CheckTriangle(TriangleArgs),
    /// Brown's triangles of symmetric groups for a range of p.
    Brown(BrownArgs),
    /// Gersten–Stallings angle of two subgroups of a finite group.
    Angle(AngleArgs),
    /// Todd–Coxeter coset enumeration for a presentation file.
    Coset(CosetArgs),
    /// Costs of graphings, relations, triples or triangles of groups.
    Cost(CostArgs),
    /// Decide free amalgamated joins or triangle joins.
    JoinCheck(JoinArgs),
    /// Exact bound chain for the cost of Thompson's group G_{2,1}.
    ThompsonCost(ThompsonArgs),
    /// Seeded property harness over random relation triples and systems.
    RandomCheck(RandomArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Print the JSON report instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct TriangleArgs {
    #[arg(long, value_name = "PATH", conflicts_with = "brown")]
    file: Option<PathBuf>,
    #[arg(long, value_name = "P")]
    brown: Option<u64>,
    /// Compute the three vertex angles.
    #[arg(long)]
    angles: bool,
    /// Evaluate the two sufficient realizability conditions.
    #[arg(long)]
    retri: bool,
    #[arg(long, value_name = "N")]
    max_n: Option<usize>,
    /// Cap on enumerated group elements.
    #[arg(long, value_name = "N")]
    cap: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct BrownArgs {
    #[arg(long, value_name = "P", conflicts_with = "p_max")]
    brown: Option<u64>,
    #[arg(long, value_name = "N")]
    p_max: Option<u64>,
    #[arg(long)]
    angles: bool,
    #[arg(long, value_name = "N")]
    max_n: Option<usize>,
    #[arg(long, value_name = "N")]
    cap: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct AngleArgs {
    #[arg(long, value_name = "PATH", conflicts_with = "brown")]
    file: Option<PathBuf>,
    #[arg(long, value_name = "P")]
    brown: Option<u64>,
    #[arg(long, value_name = "N")]
    max_n: Option<usize>,
    #[arg(long, value_name = "N")]
    cap: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct CosetArgs {
    #[arg(long, value_name = "PATH")]
    file: PathBuf,
    /// Cap on stored cosets (default: $AMALG_CAP_COSETS, else 1000000).
    #[arg(long, value_name = "N")]
    cap: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct CostArgs {
    #[arg(long, value_name = "PATH")]
    file: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct JoinArgs {
    #[arg(long, value_name = "PATH")]
    file: PathBuf,
    /// Step bound for loop searches (default 2·|X|+2).
    #[arg(long, value_name = "N")]
    loop_bound: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct ThompsonArgs {
    #[arg(long, value_name = "N", default_value_t = 20)]
    p_max: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct RandomArgs {
    #[arg(long, value_name = "N", default_value_t = 0)]
    seed: u64,
    /// Number of random relation triples.
    #[arg(long, value_name = "N", default_value_t = 1000)]
    instances: usize,
    /// Largest space size.
    #[arg(long, value_name = "N", default_value_t = 10)]
    points: usize,
    /// Number of random triangle systems.
    #[arg(long, value_name = "N", default_value_t = 200)]
    systems: usize,
    /// Enumerate every triple (and, up to 6 points, every system up to
    /// relabeling) on exactly
    /// `--points` points instead of sampling.
    #[arg(long)]
    exhaustive: bool,
    #[arg(long, value_name = "N")]
    loop_bound: Option<usize>,
    /// Directory for replay files of failing instances.
    #[arg(long, value_name = "DIR", default_value = "amalg-failures")]
    failure_dir: PathBuf,
    #[command(flatten)]
    common: Common,
}

fn output(c: &Common) -> Output {
    if c.json {
        Output::Json
    } else {
        Output::Text
    }
}

/// Coset cap: the flag wins, then the environment variable, then the default.
pub fn resolve_coset_cap(flag: Option<usize>, env: Option<&str>) -> Result<usize> {
    let cap = match (flag, env) {
        (Some(c), _) => c,
        (None, Some(v)) => v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("{COSET_CAP_ENV}={v} is not a positive integer")))?,
        (None, None) => DEFAULT_COSET_CAP,
    };
    if cap == 0 {
        return Err(Error::Parse("caps must be positive".into()));
    }
    Ok(cap)
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig> {
        let positive = |v: Option<usize>, name: &str| -> Result<()> {
            if v == Some(0) {
                Err(Error::Parse(format!("--{name} must be positive")))
            } else {
                Ok(())
            }
        };
        let c = match self.command {
            CliCommand::CheckTriangle(a) => {
                positive(a.cap, "cap")?;
                positive(a.max_n, "max-n")?;
                if a.file.is_none() && a.brown.is_none() {
                    return Err(Error::Parse("check-triangle needs --file or --brown".into()));
                }
                RunConfig {
                    input_path: a.file,
                    brown: a.brown,
                    angles: a.angles,
                    retri: a.retri,
                    max_n: a.max_n.unwrap_or(DEFAULT_MAX_N),
                    cap_closure: a.cap.unwrap_or(DEFAULT_CLOSURE_CAP),
                    output: output(&a.common),
                    ..RunConfig::new(Command::CheckTriangle)
                }
            }
            CliCommand::Brown(a) => {
                positive(a.cap, "cap")?;
                positive(a.max_n, "max-n")?;
                RunConfig {
                    brown: a.brown,
                    p_max: a.p_max,
                    angles: a.angles,
                    max_n: a.max_n.unwrap_or(DEFAULT_MAX_N),
                    cap_closure: a.cap.unwrap_or(DEFAULT_CLOSURE_CAP),
                    output: output(&a.common),
                    ..RunConfig::new(Command::Brown)
                }
            }
            CliCommand::Angle(a) => {
                positive(a.cap, "cap")?;
                positive(a.max_n, "max-n")?;
                if a.file.is_none() && a.brown.is_none() {
                    return Err(Error::Parse("angle needs --file or --brown".into()));
                }
                RunConfig {
                    input_path: a.file,
                    brown: a.brown,
                    max_n: a.max_n.unwrap_or(DEFAULT_MAX_N),
                    cap_closure: a.cap.unwrap_or(DEFAULT_CLOSURE_CAP),
                    output: output(&a.common),
                    ..RunConfig::new(Command::Angle)
                }
            }
            CliCommand::Coset(a) => RunConfig {
                input_path: Some(a.file),
                cap_cosets: resolve_coset_cap(a.cap, std::env::var(COSET_CAP_ENV).ok().as_deref())?,
                output: output(&a.common),
                ..RunConfig::new(Command::Coset)
            },
            CliCommand::Cost(a) => RunConfig {
                input_path: Some(a.file),
                output: output(&a.common),
                ..RunConfig::new(Command::Cost)
            },
            CliCommand::JoinCheck(a) => {
                positive(a.loop_bound, "loop-bound")?;
                RunConfig {
                    input_path: Some(a.file),
                    loop_bound: a.loop_bound,
                    output: output(&a.common),
                    ..RunConfig::new(Command::JoinCheck)
                }
            }
            CliCommand::ThompsonCost(a) => RunConfig {
                p_max: Some(a.p_max),
                output: output(&a.common),
                ..RunConfig::new(Command::ThompsonCost)
            },
            CliCommand::RandomCheck(a) => {
                positive(a.loop_bound, "loop-bound")?;
                if a.points == 0 || a.points > 64 {
                    return Err(Error::Parse("--points must be between 1 and 64".into()));
                }
                RunConfig {
                    seed: a.seed,
                    instances: a.instances,
                    points: a.points,
                    systems: a.systems,
                    exhaustive: a.exhaustive,
                    loop_bound: a.loop_bound,
                    failure_dir: a.failure_dir,
                    output: output(&a.common),
                    ..RunConfig::new(Command::RandomCheck)
                }
            }
        };
        Ok(c)
    }
}

/// Parses arguments, runs the command, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    match cli.into_config() {
        Ok(config) => run(&config, &mut stdout.lock(), &mut stderr.lock()),
        Err(e) => {
            let _ = writeln!(stderr.lock(), "error: {e}");
            EXIT_ERROR
        }
    }
}

/// A finished command: its report and exit code.
pub struct Outcome {
    pub report: Value,
    pub exit: i32,
}

/// Runs one command, writing the report to `out` and errors to `err`.
pub fn run(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(config) {
        Ok(o) => {
            let text = match config.output {
                Output::Json => serde_json::to_string_pretty(&o.report).expect("reports serialize"),
                Output::Text => text::render(&o.report),
            };
            if writeln!(out, "{text}").is_err() {
                return EXIT_ERROR;
            }
            o.exit
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

/// Runs one command and returns its report without printing.
pub fn execute(config: &RunConfig) -> Result<Outcome> {
    match config.command {
        Command::CheckTriangle => check_triangle(config),
        Command::Brown => brown(config),
        Command::Angle => angle(config),
        Command::Coset => coset(config),
        Command::Cost => cost(config),
        Command::JoinCheck => join_check(config),
        Command::ThompsonCost => thompson(config),
        Command::RandomCheck => {
            let summary = random_harness(&HarnessConfig::from_run(config))?;
            let exit = if summary.failures() == 0 { EXIT_OK } else { EXIT_FAILED };
            Ok(Outcome {
                report: to_value(&summary),
                exit,
            })
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn input_path(config: &RunConfig) -> Result<&Path> {
    config
        .input_path
        .as_deref()
        .ok_or_else(|| Error::Parse("this command needs --file".into()))
}

fn input_error(path: &Path, field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Input {
        path: path.display().to_string(),
        field: field.into(),
        message: message.into(),
    }
}

/// Attaches the file path to errors raised while interpreting its content.
fn in_file(path: &Path, e: Error) -> Error {
    match e {
        Error::Input { field, message, .. } => input_error(path, field, message),
        other => input_error(path, "content", other.to_string()),
    }
}

pub fn read_value(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| input_error(path, "file", e.to_string()))?;
    serde_json::from_str(&text).map_err(|e| input_error(path, "json", e.to_string()))
}

/// Deserializes with the JSON path of the first offending field in errors.
pub fn from_value<T: DeserializeOwned>(path: &Path, v: Value) -> Result<T> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let field = e.path().to_string();
        input_error(path, field, e.into_inner().to_string())
    })
}

fn read_file<T: DeserializeOwned>(path: &Path) -> Result<T> {
    from_value(path, read_value(path)?)
}

const BROWN_EDGE_NOTE: &str =
    "edge S_p maps into S_r (r = p+1, p+2) on the points {1, ..., p-2, r-1, r}, 1-based";

/// Angles at S_5, S_6, S_7 for p = 5.
const BROWN_P5_ANGLES: [usize; 3] = [3, 2, 3];

fn load_diagram(config: &RunConfig) -> Result<(TriangleDiagram, String)> {
    if let Some(p) = config.brown {
        return Ok((brown_triangle(p as usize, config.cap_closure)?, format!("brown p={p}")));
    }
    let path = input_path(config)?;
    let file: DiagramFile = read_file(path)?;
    let d = file.to_diagram(config.cap_closure).map_err(|e| in_file(path, e))?;
    Ok((d, path.display().to_string()))
}

fn check_triangle(config: &RunConfig) -> Result<Outcome> {
    let (d, source) = load_diagram(config)?;
    let report = d.report(ReportOptions {
        angles: config.angles,
        retri: config.retri,
        max_n: config.max_n,
    })?;
    let fill = d.fillability()?;
    let mut failed = !report.embeddings_ok.as_ref().is_some_and(|v| v.iter().all(|&b| b))
        || report.fillable != Some(true)
        || report.minimal != Some(true);
    let mut bounded = false;
    let mut reference_match = None;
    if let Some(angles) = &report.angles {
        bounded = angles.iter().any(|a| matches!(a.n, AngleN::LowerBound(_)));
        if config.brown == Some(5) {
            let ok = angles
                .iter()
                .zip(BROWN_P5_ANGLES)
                .all(|(a, n)| a.n == AngleN::Exact(n));
            failed |= !ok;
            reference_match = Some(ok);
        }
    }
    let mut value = to_value(&report);
    let obj = value.as_object_mut().expect("report is an object");
    obj.insert("source".into(), json!(source));
    obj.insert("inconsistent_edges".into(), json!(fill.inconsistent_edges));
    if let Some(m) = fill.declared_core_matches {
        obj.insert("declared_core_matches".into(), json!(m));
    }
    if let Some(ok) = reference_match {
        obj.insert("expected_angles".into(), json!(BROWN_P5_ANGLES));
        obj.insert("angles_match_expected".into(), json!(ok));
    }
    if config.brown.is_some() {
        obj.insert("edge_embedding".into(), json!(BROWN_EDGE_NOTE));
    }
    Ok(Outcome {
        report: value,
        exit: exit_code(failed, bounded),
    })
}

fn exit_code(failed: bool, limited: bool) -> i32 {
    if failed {
        EXIT_FAILED
    } else if limited {
        EXIT_ERROR
    } else {
        EXIT_OK
    }
}

fn brown(config: &RunConfig) -> Result<Outcome> {
    let range = match (config.brown, config.p_max) {
        (Some(p), _) => p..=p,
        (None, p_max) => 5..=p_max.unwrap_or(7),
    };
    let mut rows = Vec::new();
    let (mut failed, mut limited) = (false, false);
    for p in range {
        match brown_row(p, config) {
            Ok((row, ok, bounded)) => {
                failed |= !ok;
                limited |= bounded;
                rows.push(row);
            }
            Err(e) => {
                limited = true;
                rows.push(json!({ "p": p, "error": e.to_string() }));
            }
        }
    }
    Ok(Outcome {
        report: json!({ "edge_embedding": BROWN_EDGE_NOTE, "triangles": rows }),
        exit: exit_code(failed, limited),
    })
}

fn brown_row(p: u64, config: &RunConfig) -> Result<(Value, bool, bool)> {
    let d = brown_triangle(p as usize, config.cap_closure)?;
    let fill = d.fillability()?;
    let minimal = d.minimality()?.iter().all(|&m| m);
    let embeddings = d.embedding_checks().iter().all(|&b| b);
    let vertex_orders = d.vertices.each_ref().map(|v| v.group.order() as u64);
    let edge_orders = d.edges.each_ref().map(|e| e.group.order() as u64);
    let bound = triangle_cost_bound(vertex_orders, edge_orders)?;
    let factorial_bound = thompson_bound(p)?;
    let bound_agrees = bound.min == factorial_bound.min;
    let mut row = json!({
        "p": p,
        "vertex_orders": vertex_orders,
        "edge_orders": edge_orders,
        "embeddings_ok": embeddings,
        "fillable": fill.fillable,
        "core_orders": fill.core_orders,
        "minimal": minimal,
        "cost_bound": rational::format(&bound.min),
        "cost_bound_matches_factorials": bound_agrees,
    });
    let mut bounded = false;
    if config.angles {
        let mut angles = Vec::new();
        for v in 0..3 {
            let a = d.angle(v, config.max_n)?;
            bounded |= matches!(a.n, AngleN::LowerBound(_));
            angles.push(json!({ "vertex": d.vertices[v].name, "n": a.n, "theta": a.theta() }));
        }
        row["angles"] = json!(angles);
    }
    let ok = embeddings && fill.fillable && minimal && bound_agrees;
    Ok((row, ok, bounded))
}

/// Angle input: a finite group and two subgroups, with an optional common
/// subgroup (default: their intersection). Generators are image arrays.
#[derive(serde::Deserialize)]
struct AngleFile {
    degree: usize,
    group: Vec<Vec<u32>>,
    a: Vec<Vec<u32>>,
    b: Vec<Vec<u32>>,
    #[serde(default)]
    core: Option<Vec<Vec<u32>>>,
}

fn group_from(path: &Path, field: &str, degree: usize, gens: &[Vec<u32>], cap: usize) -> Result<PermGroup> {
    let perms = gens
        .iter()
        .enumerate()
        .map(|(k, g)| {
            Permutation::new(g.clone())
                .and_then(|p| p.pad(degree))
                .map_err(|e| input_error(path, format!("{field}[{k}]"), e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    PermGroup::closure(degree, &perms, cap).map_err(|e| input_error(path, field, e.to_string()))
}

fn angle(config: &RunConfig) -> Result<Outcome> {
    if config.brown.is_some() {
        let (d, source) = load_diagram(config)?;
        let mut rows = Vec::new();
        let mut bounded = false;
        for v in 0..3 {
            let a = d.angle(v, config.max_n)?;
            bounded |= matches!(a.n, AngleN::LowerBound(_));
            rows.push(json!({
                "vertex": d.vertices[v].name,
                "n": a.n,
                "theta": a.theta(),
                "witness": a.witness,
            }));
        }
        return Ok(Outcome {
            report: json!({ "source": source, "angles": rows }),
            exit: exit_code(false, bounded),
        });
    }
    let path = input_path(config)?;
    let f: AngleFile = read_file(path)?;
    let cap = config.cap_closure;
    let g = group_from(path, "group", f.degree, &f.group, cap)?;
    let a = group_from(path, "a", f.degree, &f.a, cap)?;
    let b = group_from(path, "b", f.degree, &f.b, cap)?;
    let k = match &f.core {
        Some(gens) => group_from(path, "core", f.degree, gens, cap)?,
        None => intersect(&a, &b)?,
    };
    let r = shortest_kernel_word(&g, &a, &b, &k, config.max_n).map_err(|e| in_file(path, e))?;
    let bounded = matches!(r.n, AngleN::LowerBound(_));
    Ok(Outcome {
        report: json!({
            "orders": { "group": g.order(), "a": a.order(), "b": b.order(), "core": k.order() },
            "n": r.n,
            "theta": r.theta(),
            "witness_length": r.witness.len(),
            "witness": r.witness,
        }),
        exit: exit_code(false, bounded),
    })
}

fn coset(config: &RunConfig) -> Result<Outcome> {
    let path = input_path(config)?;
    let f: PresentationFile = read_file(path)?;
    let (p, subgroup) = f.to_presentation().map_err(|e| in_file(path, e))?;
    let t = enumerate_cosets(&p, &subgroup, config.cap_cosets, Strategy::Hlt);
    let stats = t.stats();
    let complete = t.status() == TableStatus::Complete;
    Ok(Outcome {
        report: json!({
            "generators": p.generator_names(),
            "relators": p.relators().iter().map(|r| p.render(r)).collect::<Vec<_>>(),
            "subgroup": subgroup.iter().map(|w| p.render(w)).collect::<Vec<_>>(),
            "cap": config.cap_cosets,
            "status": if complete { "complete" } else { "inconclusive" },
            "index": complete.then(|| t.live_count()),
            "cosets_defined": stats.defined,
            "max_rows": stats.max_rows,
        }),
        exit: if complete { EXIT_OK } else { EXIT_ERROR },
    })
}

#[derive(serde::Deserialize)]
struct GraphingInput {
    space: SpaceFile,
    graphing: Graphing,
}

#[derive(serde::Deserialize)]
struct RelationInput {
    space: SpaceFile,
    relation: RelationFile,
}

#[derive(serde::Deserialize)]
struct OrdersInput {
    vertex_orders: [u64; 3],
    edge_orders: [u64; 3],
}

#[derive(serde::Deserialize)]
struct GroupOrderInput {
    group_order: u64,
}

fn at<'a>(path: &'a Path, field: &str) -> impl Fn(Error) -> Error + 'a {
    let field = field.to_string();
    move |e| input_error(path, field.clone(), e.to_string())
}

fn relations_from(
    path: &Path,
    space: &SpaceFile,
    named: [(&str, &RelationFile); 3],
) -> Result<(FiniteMeasuredSpace, [FiniteRelation; 3])> {
    let space = space.to_space().map_err(at(path, "space"))?;
    let n = space.point_count();
    let mut out = Vec::new();
    for (name, r) in named {
        out.push(r.to_relation(n).map_err(at(path, name))?);
    }
    let [a, b, c]: [FiniteRelation; 3] = out.try_into().expect("three relations");
    Ok((space, [a, b, c]))
}

fn triple_from(path: &Path, f: &TripleFile) -> Result<RelationTriple> {
    let (space, [r1, r2, r3]) = relations_from(path, &f.space, [("R1", &f.r1), ("R2", &f.r2), ("R3", &f.r3)])?;
    RelationTriple::new(space, r1, r2, r3).map_err(|e| in_file(path, e))
}

fn system_from(path: &Path, f: &SystemFile) -> Result<TriangleSystem> {
    let (space, e) = relations_from(path, &f.space, [("E1", &f.e1), ("E2", &f.e2), ("E3", &f.e3)])?;
    TriangleSystem::new(space, e).map_err(|e| in_file(path, e))
}

fn has(v: &Value, key: &str) -> bool {
    v.get(key).is_some()
}

fn cost(config: &RunConfig) -> Result<Outcome> {
    let path = input_path(config)?;
    let v = read_value(path)?;
    let wrap = |e: Error| in_file(path, e);
    if has(&v, "graphing") {
        let f: GraphingInput = from_value(path, v)?;
        let space = f.space.to_space().map_err(at(path, "space"))?;
        let c = graphing_cost(&space, &f.graphing).map_err(wrap)?;
        let r = generate_relation(&space, &f.graphing).map_err(wrap)?;
        let min = relation_min_cost(&r, &space).map_err(wrap)?.cost;
        let treeing = is_treeing(&space, &f.graphing).map_err(wrap)?;
        let consistent = c >= min && (c == min) == treeing;
        return Ok(Outcome {
            report: json!({
                "kind": "graphing",
                "cost": rational::format(&c),
                "generated": RelationFile::from_relation(&r),
                "relation_min_cost": rational::format(&min),
                "treeing": treeing,
                "consistent": consistent,
            }),
            exit: exit_code(!consistent, false),
        });
    }
    if has(&v, "relation") {
        let f: RelationInput = from_value(path, v)?;
        let space = f.space.to_space().map_err(at(path, "space"))?;
        let r = f.relation.to_relation(space.point_count()).map_err(at(path, "relation"))?;
        let m = relation_min_cost(&r, &space).map_err(wrap)?;
        let by_measure = relation_cost_by_measure(&r, &space).map_err(wrap)?;
        let agree = m.cost == by_measure;
        return Ok(Outcome {
            report: json!({
                "kind": "relation",
                "min_cost": rational::format(&m.cost),
                "measure_minus_classes": rational::format(&by_measure),
                "agree": agree,
                "witness": m.witness,
            }),
            exit: exit_code(!agree, false),
        });
    }
    if has(&v, "R1") {
        let f: TripleFile = from_value(path, v)?;
        let t = triple_from(path, &f)?;
        let r = check_free_join_cost(&t)?;
        let exit = exit_code(!r.consistent, false);
        let mut value = to_value(&r);
        value["kind"] = json!("triple");
        return Ok(Outcome { report: value, exit });
    }
    if has(&v, "vertex_orders") {
        let f: OrdersInput = from_value(path, v)?;
        let r = triangle_cost_bound(f.vertex_orders, f.edge_orders).map_err(wrap)?;
        let mut value = to_value(&r);
        value["kind"] = json!("triangle");
        return Ok(Outcome { report: value, exit: EXIT_OK });
    }
    if has(&v, "group_order") {
        let f: GroupOrderInput = from_value(path, v)?;
        let c = finite_group_cost(f.group_order).map_err(wrap)?;
        return Ok(Outcome {
            report: json!({ "kind": "finite_group", "order": f.group_order, "cost": rational::format(&c) }),
            exit: EXIT_OK,
        });
    }
    Err(input_error(
        path,
        "content",
        "expected one of the keys graphing, relation, R1, vertex_orders, group_order",
    ))
}

fn join_check(config: &RunConfig) -> Result<Outcome> {
    let path = input_path(config)?;
    let v = read_value(path)?;
    if has(&v, "R1") {
        let f: TripleFile = from_value(path, v)?;
        let t = triple_from(path, &f)?;
        let bound = config.loop_bound.unwrap_or_else(|| default_loop_bound(t.point_count()));
        let d = is_free_amalgamated_join(&t);
        let found = find_reduced_loop(&t, bound);
        let agree = d.free == found.is_none();
        let cert_ok = match &d.witness {
            JoinWitness::Loop(c) => validate_reduced_loop(c, &t),
            JoinWitness::Forest(_) => true,
        } && found.as_ref().is_none_or(|c| validate_reduced_loop(c, &t));
        return Ok(Outcome {
            report: json!({
                "kind": "triple",
                "free": d.free,
                "witness": d.witness,
                "loop_search": { "bound": bound, "loop": found },
                "oracle_agrees": agree,
                "certificates_valid": cert_ok,
            }),
            exit: exit_code(!d.free || !agree || !cert_ok, false),
        });
    }
    if has(&v, "E1") {
        let f: SystemFile = from_value(path, v)?;
        let s = system_from(path, &f)?;
        let bound = Some(config.loop_bound.unwrap_or_else(|| default_loop_bound(s.point_count())));
        let verdict = is_triangle_join(&s, bound);
        let certs_ok = verdict
            .type_one_loop
            .iter()
            .chain(&verdict.type_two_loop)
            .all(|c| validate_triangle_loop(c, &s));
        let mut report = json!({
            "kind": "system",
            "points": s.point_count(),
            "minimal": s.is_minimal(),
            "triangle_join": verdict,
            "certificates_valid": certs_ok,
        });
        let mut failed = !verdict.is_join() || !certs_ok;
        if s.is_minimal() {
            let f = check_freejoin_theorem(&s, bound)?;
            failed |= !f.consistent;
            report["freejoin"] = to_value(&f);
        }
        if verdict.is_join() {
            let r = check_reduction_theorem(&s, bound)?;
            failed |= !r.consistent();
            report["reduction"] = to_value(&r);
            if s.point_count() <= 8 {
                let u = uniqueness_check(&s);
                failed |= !u.holds_up_to_common();
                report["uniqueness"] = to_value(&u);
            }
        }
        let limited = verdict.status == SearchStatus::HoldsAtBound;
        return Ok(Outcome {
            report,
            exit: exit_code(failed, limited),
        });
    }
    Err(input_error(path, "content", "expected a triple (R1, R2, R3) or a system (E1, E2, E3)"))
}

fn thompson(config: &RunConfig) -> Result<Outcome> {
    let p_max = config.p_max.unwrap_or(20);
    let c = thompson_conclusion(p_max, &ten_to_minus(15))?;
    let failed = !(c.all_above_one && c.strictly_decreasing && c.closed_form_agrees);
    let mut value = to_value(&c);
    let table: Vec<Value> = c
        .bounds
        .iter()
        .map(|b| {
            json!(format!(
                "p={:<3} bound-1 ≈ {:.3e}",
                b.p,
                rational::to_f64(&(&b.min - rational::one()))
            ))
        })
        .collect();
    value["table"] = json!(table);
    Ok(Outcome {
        report: value,
        exit: exit_code(failed, !c.holds()),
    })
}
