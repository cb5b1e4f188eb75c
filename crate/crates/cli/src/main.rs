//! Command-line front end for the `rectmotion` planners.
//!
//! Every subcommand prints JSON (or SVG / DOT text) on stdout. Exit status is
//! 0 on success, 2 when the instance has no solution or a schedule fails
//! verification, and 1 for malformed input.

mod io;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rectmotion::exposure::{build_exposure_graph, cover_trapezoids, plan_exposure_in, EdgeKind};
use rectmotion::feas2::build_feasibility_for;
use rectmotion::model::{
    diameter, is_covered, measure_exposure, schedule_in_domain, three_step_schedule, Objective,
};
use rectmotion::oracle::{grid_cmp_solution, grid_exposure_solution, grid_feasibility_solution, GridInstance};
use rectmotion::orderings::build_transition_graph_capped;
use rectmotion::planner2::{plan_makespan2, plan_sum2};
use rectmotion::plannerk::{plan_makespan_k, plan_sum_k, Exactness, SearchOptions};
use rectmotion::render::Scene;
use rectmotion::{parse_rational, Configuration, Rational, RobotShape, Schedule};
use serde_json::{json, Map, Value};

use io::{num, Instance};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    /// The instance is well formed but has no answer (or the answer fails checks).
    #[error("{0}")]
    Unsolved(String),
}

impl From<rectmotion::Error> for CliError {
    fn from(e: rectmotion::Error) -> Self {
        use rectmotion::Error as E;
        match e {
            E::NotReachable | E::Unreachable | E::StateInfeasible | E::ResourceBound(_) | E::BudgetExceeded(_) => {
                CliError::Unsolved(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

type Res<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(name = "rectmotion", version, about = "Exact L1 motion planning for rectangular robots")]
struct Cli {
    /// Worker threads for the parallel parts of the planners (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PlanObjective {
    Makespan,
    Sum,
    Exposure,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OracleObjective {
    Makespan,
    Sum,
    Exposure,
    Feasibility,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GraphKind {
    Transition,
    Exposure,
}

#[derive(Subcommand)]
enum Command {
    /// Plan a schedule between the start and target configurations.
    Plan {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "makespan")]
        objective: PlanObjective,
        /// Longest ordering path searched for three or more robots.
        #[arg(long, default_value_t = 4)]
        max_path_len: usize,
        /// Cover polygons, replacing any in the instance.
        #[arg(long)]
        cover: Option<PathBuf>,
        /// Robot sizes as `WxH,WxH,...`, replacing the instance shapes.
        #[arg(long)]
        shapes: Option<String>,
        #[arg(long, default_value_t = 4)]
        max_robots: usize,
        /// Warn when the squared number of cover trapezoids exceeds this.
        #[arg(long, default_value_t = 5000)]
        graph_budget: usize,
    },
    /// Decide whether two unit robots can swap configurations inside a domain.
    Feasibility {
        instance: Option<PathBuf>,
        #[arg(long)]
        domain: Option<PathBuf>,
        /// Start points as `x,y;x,y`.
        #[arg(long)]
        start: Option<String>,
        #[arg(long)]
        target: Option<String>,
        #[arg(long)]
        shapes: Option<String>,
    },
    /// Check a schedule (or a plan output) against an instance.
    Verify {
        instance: PathBuf,
        #[arg(long)]
        schedule: PathBuf,
    },
    /// Brute-force lattice search, for cross-checking the planners.
    Oracle {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "makespan")]
        objective: OracleObjective,
        /// Lattice spacing.
        #[arg(long, default_value = "1/2")]
        step: String,
        #[arg(long, default_value_t = rectmotion::oracle::DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long)]
        cover: Option<PathBuf>,
        #[arg(long)]
        shapes: Option<String>,
    },
    /// Draw the instance and an optional schedule as SVG.
    Render {
        instance: PathBuf,
        #[arg(long)]
        schedule: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Dump the ordering transition graph or the exposure graph as DOT.
    Graph {
        #[arg(long, value_enum)]
        kind: GraphKind,
        instance: Option<PathBuf>,
        /// Robot count when no instance or shapes are given.
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        shapes: Option<String>,
        #[arg(long)]
        cover: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        max_robots: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// What a subcommand produced.
enum Output {
    Json(Value, bool),
    Text(String),
}

fn load(path: &Path, shapes: &Option<String>) -> Res<Instance> {
    let inst = Instance::load(path)?;
    match shapes {
        Some(s) => inst.with_shapes(io::shapes_arg(s)?),
        None => Ok(inst),
    }
}

fn load_cover(inst: &mut Instance, cover: &Option<PathBuf>) -> Res<()> {
    if let Some(p) = cover {
        inst.cover = io::cover(&io::read_json(p)?, &p.display().to_string())?;
    }
    Ok(())
}

fn measured(m: &Schedule) -> Map<String, Value> {
    let mut o = Map::new();
    o.insert("makespan_measured".into(), num(&m.makespan()));
    o.insert("sum_measured".into(), num(&m.sum()));
    o
}

fn plan(inst: &Instance, objective: Objective, opts: &SearchOptions) -> Res<Value> {
    let (a, b) = (&inst.start, &inst.target);
    let mut o = Map::new();
    let schedule = match a.k() {
        1 => {
            let m = three_step_schedule(a, b, &diameter(a, b));
            o.insert("value".into(), num(&diameter(a, b)));
            o.insert("waypoints".into(), json!([io::configuration_json(a), io::configuration_json(b)]));
            o.insert("orderings".into(), json!([]));
            o.insert("exactness".into(), json!("exact"));
            m
        }
        2 => {
            let p = match objective {
                Objective::Makespan => plan_makespan2(a, b)?,
                Objective::Sum => plan_sum2(a, b)?,
            };
            o.insert("value".into(), num(&p.value));
            o.insert("waypoints".into(), p.waypoints.iter().map(io::configuration_json).collect());
            o.insert("orderings".into(), p.orderings.iter().map(|x| json!(x.to_string())).collect());
            o.insert("exactness".into(), json!("exact"));
            p.schedule
        }
        _ => {
            let p = match objective {
                Objective::Makespan => plan_makespan_k(a, b, opts)?,
                Objective::Sum => plan_sum_k(a, b, opts)?,
            };
            o.insert("value".into(), num(&p.value));
            o.insert("waypoints".into(), p.waypoints.iter().map(io::configuration_json).collect());
            o.insert("orderings".into(), p.orderings.iter().map(|x| json!(x.to_string())).collect());
            let exactness = match p.exactness {
                Exactness::Exact => "exact",
                Exactness::BoundedSearch => "bounded-search",
            };
            o.insert("exactness".into(), json!(exactness));
            o.insert("lower_bound".into(), num(&p.lower_bound));
            p.schedule
        }
    };
    let name = match objective {
        Objective::Makespan => "makespan",
        Objective::Sum => "sum",
    };
    o.insert("objective".into(), json!(name));
    o.insert("robots".into(), json!(a.k()));
    o.extend(measured(&schedule));
    o.insert("schedule".into(), io::schedule_json(&schedule));
    Ok(Value::Object(o))
}

fn plan_exposure(inst: &Instance, graph_budget: usize) -> Res<Value> {
    let (a, b) = (&inst.start, &inst.target);
    if a.k() != 2 {
        return Err(CliError::Input(format!("exposure planning needs two robots, got {}", a.k())));
    }
    if a.shapes.iter().any(|s| *s != RobotShape::unit()) {
        return Err(CliError::Input("exposure planning needs unit-square robots".into()));
    }
    let w = cover_trapezoids(&inst.cover).len();
    if w.saturating_mul(w) > graph_budget {
        eprintln!("warning: {w} cover trapezoids; the state graph may be large");
    }
    let g = build_exposure_graph(&inst.cover)?;
    let p = plan_exposure_in(&g, a, b)?;
    let kinds: Vec<Value> = p
        .path_kinds
        .iter()
        .map(|k| {
            json!(match k {
                EdgeKind::Zero => "zero",
                EdgeKind::Positive => "positive",
            })
        })
        .collect();
    let mut o = Map::new();
    o.insert("objective".into(), json!("exposure"));
    o.insert("robots".into(), json!(2));
    o.insert("value".into(), num(&p.value));
    o.insert("exposure_measured".into(), num(&p.measured.exposure));
    o.insert("exposed_time".into(), num(&p.measured.exposed_time));
    o.insert("path".into(), json!(p.path));
    o.insert("path_kinds".into(), Value::Array(kinds));
    o.insert(
        "graph".into(),
        json!({
            "vertices": g.vertex_count(),
            "zero_edges": g.zero_edge_count(),
            "positive_edges": g.positive_edge_count(),
        }),
    );
    o.extend(measured(&p.schedule));
    o.insert("schedule".into(), io::schedule_json(&p.schedule));
    Ok(Value::Object(o))
}

fn feasibility(
    instance: &Option<PathBuf>,
    domain: &Option<PathBuf>,
    start: &Option<String>,
    target: &Option<String>,
    shapes: &Option<String>,
) -> Res<Output> {
    let inst = match instance {
        Some(p) => Some(load(p, shapes)?),
        None => None,
    };
    let domain = match (domain, inst.as_ref().and_then(|i| i.domain.clone())) {
        (Some(p), _) => io::polygon(&io::read_json(p)?, &p.display().to_string())?,
        (None, Some(d)) => d,
        (None, None) => return Err(CliError::Input("a domain is required (--domain or instance \"domain\")".into())),
    };
    let pick = |flag: &Option<String>, what: &str, from: Option<&Configuration>| -> Res<Configuration> {
        match (flag, from) {
            (Some(s), _) => {
                let pts = io::points_arg(s, what)?;
                let shapes = match shapes {
                    Some(s) => io::shapes_arg(s)?,
                    None => vec![RobotShape::unit(); pts.len()],
                };
                io::configuration(pts, shapes, what)
            }
            (None, Some(c)) => Ok(c.clone()),
            (None, None) => Err(CliError::Input(format!("{what} is required"))),
        }
    };
    let a = pick(start, "--start", inst.as_ref().map(|i| &i.start))?;
    let b = pick(target, "--target", inst.as_ref().map(|i| &i.target))?;
    let shape = a.shapes.first().cloned().unwrap_or_else(RobotShape::unit);
    let f = build_feasibility_for(&domain, shape)?;
    let ok = f.query_feasible(&a, &b)?;
    let mut o = Map::new();
    o.insert("feasible".into(), json!(ok));
    o.insert("corners".into(), json!(f.corner_count()));
    o.insert("components".into(), json!(f.component_count()));
    if ok {
        let m = f.reconstruct_zero_exposure_schedule(&a, &b)?;
        o.extend(measured(&m));
        o.insert("schedule".into(), io::schedule_json(&m));
    }
    Ok(Output::Json(Value::Object(o), ok))
}

fn verify(inst: &Instance, path: &Path) -> Res<Output> {
    let raw = io::read_json(path)?;
    let m = io::schedule(&raw, &inst.start.shapes, &path.display().to_string())?;
    let (report, valid) = io::validation_json(&m)?;
    let mut o = Map::new();
    o.insert("validation".into(), report);
    let shapes_match = m.shapes == inst.start.shapes;
    let start_ok = shapes_match && m.start_configuration().points == inst.start.points;
    let end_ok = shapes_match && m.end_configuration().points == inst.target.points;
    o.insert("shapes_match".into(), json!(shapes_match));
    o.insert("start_matches".into(), json!(start_ok));
    o.insert("target_matches".into(), json!(end_ok));
    let mut passed = valid && start_ok && end_ok;
    if let Some(d) = &inst.domain {
        let inside = schedule_in_domain(&m, d);
        o.insert("in_domain".into(), json!(inside));
        passed &= inside;
    }
    let exposure = measure_exposure(&m, &inst.cover);
    if !inst.cover.is_empty() {
        o.insert("exposure".into(), num(&exposure.exposure));
        o.insert("exposed_time".into(), num(&exposure.exposed_time));
        o.insert("start_covered".into(), json!(is_covered(&m.start_configuration(), &inst.cover)));
    }
    // a plan output carries its claimed value; check it against the measurement
    if let (Some(obj), Some(v)) = (raw.get("objective").and_then(Value::as_str), raw.get("value")) {
        let claimed = io::rational(v, "value")?;
        let actual = match obj {
            "makespan" => m.makespan(),
            "sum" => m.sum(),
            "exposure" => exposure.exposure.clone(),
            other => return Err(CliError::Input(format!("objective: unknown value {other:?}"))),
        };
        let matches = claimed == actual;
        o.insert("objective".into(), json!(obj));
        o.insert("claimed_value".into(), num(&claimed));
        o.insert("measured_value".into(), num(&actual));
        // measured exposure may undercut the graph value; see the README
        let ok = if obj == "exposure" { actual <= claimed } else { matches };
        o.insert("value_matches".into(), json!(matches));
        passed &= ok;
    }
    o.insert("passed".into(), json!(passed));
    Ok(Output::Json(Value::Object(o), passed))
}

fn oracle(mut inst: Instance, objective: OracleObjective, step: &str, budget: usize, cover: &Option<PathBuf>) -> Res<Output> {
    load_cover(&mut inst, cover)?;
    let step = parse_rational(step).map_err(|e| CliError::Input(format!("--step: {e}")))?;
    if step <= Rational::from_integer(0.into()) {
        return Err(CliError::Input("--step: must be positive".into()));
    }
    let mut g = GridInstance::new(inst.start.clone(), inst.target.clone()).with_step(step).with_budget(budget);
    if let Some(d) = &inst.domain {
        g = g.with_domain(d.clone());
    }
    if !inst.cover.is_empty() {
        g = g.with_cover(inst.cover.clone());
    }
    let (name, sol) = match objective {
        OracleObjective::Makespan => ("makespan", Some(grid_cmp_solution(&g, Objective::Makespan)?)),
        OracleObjective::Sum => ("sum", Some(grid_cmp_solution(&g, Objective::Sum)?)),
        OracleObjective::Exposure => ("exposure", Some(grid_exposure_solution(&g)?)),
        OracleObjective::Feasibility => ("feasibility", grid_feasibility_solution(&g)?),
    };
    let mut o = Map::new();
    o.insert("objective".into(), json!(name));
    o.insert("step".into(), num(&g.step));
    let found = sol.is_some();
    if objective_is_feasibility(objective) {
        o.insert("feasible".into(), json!(found));
    }
    if let Some(s) = sol {
        if !objective_is_feasibility(objective) {
            o.insert("value".into(), num(&s.value));
        }
        o.insert("lattice_moves".into(), json!(s.steps.len().saturating_sub(1)));
        let m = s.schedule();
        o.extend(measured(&m));
        o.insert("schedule".into(), io::schedule_json(&m));
    }
    Ok(Output::Json(Value::Object(o), found))
}

fn objective_is_feasibility(o: OracleObjective) -> bool {
    matches!(o, OracleObjective::Feasibility)
}

fn render(inst: &Instance, schedule: &Option<PathBuf>) -> Res<Output> {
    let schedule = match schedule {
        Some(p) => Some(io::schedule(&io::read_json(p)?, &inst.start.shapes, &p.display().to_string())?),
        None => None,
    };
    let scene = Scene {
        domain: inst.domain.clone(),
        cover: inst.cover.clone(),
        schedule,
        configurations: vec![inst.start.clone(), inst.target.clone()],
    };
    Ok(Output::Text(scene.to_svg()))
}

#[allow(clippy::too_many_arguments)]
fn graph(
    kind: GraphKind,
    instance: &Option<PathBuf>,
    k: usize,
    shapes: &Option<String>,
    cover: &Option<PathBuf>,
    max_robots: usize,
) -> Res<Output> {
    let mut inst = match instance {
        Some(p) => Some(load(p, shapes)?),
        None => None,
    };
    match kind {
        GraphKind::Transition => {
            let shapes = match (shapes, &inst) {
                (Some(s), None) => io::shapes_arg(s)?,
                (_, Some(i)) => i.start.shapes.clone(),
                (None, None) => vec![RobotShape::unit(); k],
            };
            let g = build_transition_graph_capped(shapes.len(), &shapes, max_robots)?;
            Ok(Output::Text(g.to_dot()))
        }
        GraphKind::Exposure => {
            let c = match (cover, inst.as_mut()) {
                (Some(p), _) => io::cover(&io::read_json(p)?, &p.display().to_string())?,
                (None, Some(i)) => std::mem::take(&mut i.cover),
                (None, None) => return Err(CliError::Input("a cover is required (--cover or an instance)".into())),
            };
            Ok(Output::Text(build_exposure_graph(&c)?.to_dot()))
        }
    }
}

/// Echoes the instance metadata, when there is any, into the output.
fn with_metadata(mut v: Value, inst: &Instance) -> Value {
    if let (Value::Object(o), false) = (&mut v, inst.metadata.is_null()) {
        o.insert("metadata".into(), inst.metadata.clone());
    }
    v
}

fn run(cli: Cli) -> Res<Output> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Input(format!("--threads: {e}")))?;
    }
    match &cli.command {
        Command::Plan { instance, objective, max_path_len, cover, shapes, max_robots, graph_budget } => {
            let mut inst = load(instance, shapes)?;
            load_cover(&mut inst, cover)?;
            if inst.domain.is_some() {
                eprintln!("note: plan works in the open plane and ignores the domain");
            }
            let opts = SearchOptions { max_len: *max_path_len, max_robots: *max_robots };
            let v = match objective {
                PlanObjective::Makespan => plan(&inst, Objective::Makespan, &opts)?,
                PlanObjective::Sum => plan(&inst, Objective::Sum, &opts)?,
                PlanObjective::Exposure => plan_exposure(&inst, *graph_budget)?,
            };
            Ok(Output::Json(with_metadata(v, &inst), true))
        }
        Command::Feasibility { instance, domain, start, target, shapes } => {
            feasibility(instance, domain, start, target, shapes)
        }
        Command::Verify { instance, schedule } => verify(&Instance::load(instance)?, schedule),
        Command::Oracle { instance, objective, step, budget, cover, shapes } => {
            oracle(load(instance, shapes)?, *objective, step, *budget, cover)
        }
        Command::Render { instance, schedule, .. } => render(&Instance::load(instance)?, schedule),
        Command::Graph { kind, instance, k, shapes, cover, max_robots, .. } => {
            graph(*kind, instance, *k, shapes, cover, *max_robots)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = match &cli.command {
        Command::Render { output, .. } | Command::Graph { output, .. } => output.clone(),
        _ => None,
    };
    match run(cli) {
        Ok(Output::Json(v, ok)) => {
            let text = serde_json::to_string_pretty(&v).expect("JSON values serialize");
            // a closed pipe is not worth a panic
            let _ = writeln!(std::io::stdout(), "{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Ok(Output::Text(s)) => match output {
            Some(p) => match fs::write(&p, s) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {}: {e}", p.display());
                    ExitCode::from(1)
                }
            },
            None => {
                let _ = std::io::stdout().write_all(s.as_bytes());
                ExitCode::SUCCESS
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Input(_) => ExitCode::from(1),
                CliError::Unsolved(_) => ExitCode::from(2),
            }
        }
    }
}
