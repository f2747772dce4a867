//! `snzp`: shortest non-zero paths and cycles in group-labeled graphs.
//!
//! Exit codes: 0 when a path or cycle was found, 2 when the query is
//! infeasible, 1 on usage or parse errors.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use snzp::cycle::{shortest_nonzero_cycle, shortest_nonzero_cycle_naive, CycleOutcome};
use snzp::fast::{check_dual_feasibility, fast_sup, fast_sup_instrumented};
use snzp::gen::{random_graph, InstanceConfig};
use snzp::graph::{LabeledGraph, PathWitness, VertexId, Walk};
use snzp::oracle::{shortest_nonzero_cycle_oracle, OracleBudget};
use snzp::recursive::reduce_parallel_edges;
use snzp::reductions::homology_labeling;
use snzp::solve::{shortest_nonzero_path, Algorithm, Outcome, SolveError};
use snzp::spt::dijkstra;
use snzp_cli::{
    parse_group_spec, parse_instance, render_labeled, Instance, LabeledInstance, ParseError,
    Query, Report,
};

#[derive(Parser)]
#[command(name = "snzp", version, about = "Shortest non-zero paths and cycles in group-labeled graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find a shortest path whose label avoids the forbidden element.
    Path(PathArgs),
    /// Find a shortest non-zero cycle (non-separating on embedded input).
    Cycle(CycleArgs),
    /// Emit the dual values of all vertices with a feasibility check.
    Dual(DualArgs),
    /// Generate a random instance.
    Gen(GenArgs),
    /// Benchmark the fast solver and emit CSV counters.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PathAlgo {
    Fast,
    Recursive,
    Oracle,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CycleAlgo {
    Blossom,
    Naive,
    Oracle,
}

#[derive(Args)]
struct PathArgs {
    /// Instance file.
    file: PathBuf,
    #[arg(long, value_enum, default_value = "fast")]
    algo: PathAlgo,
    /// Source vertex name; defaults to the file's query line.
    #[arg(long)]
    source: Option<String>,
    /// Target vertex name; defaults to the file's query line.
    #[arg(long)]
    target: Option<String>,
    /// Forbidden label (default: the identity, i.e. non-zero paths).
    #[arg(long)]
    forbid: Option<String>,
}

#[derive(Args)]
struct CycleArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value = "blossom")]
    algo: CycleAlgo,
}

#[derive(Args)]
struct DualArgs {
    file: PathBuf,
    /// Root vertex name; defaults to the file's query source.
    #[arg(long)]
    source: Option<String>,
    /// Optional target whose dual value becomes the report value.
    #[arg(long)]
    target: Option<String>,
}

#[derive(Args)]
struct GenArgs {
    /// Number of vertices.
    #[arg(long)]
    n: usize,
    /// Number of edges.
    #[arg(long)]
    m: usize,
    /// Group spec, e.g. `z2`, `zk 6`, `free 2`, `prod z2;zk 3`.
    #[arg(long, default_value = "z2")]
    group: String,
    /// Maximum integer edge length.
    #[arg(long, default_value_t = 10)]
    maxlen: u64,
    #[arg(long)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated vertex counts.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    /// Edges per vertex in the generated instances.
    #[arg(long, default_value_t = 10)]
    edges_per_vertex: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("snzp: {err}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Path(args) => cmd_path(args),
        Command::Cycle(args) => cmd_cycle(args),
        Command::Dual(args) => cmd_dual(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn read_instance(path: &PathBuf) -> Result<Instance, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(parse_instance(&text)?)
}

fn labeled(path: &PathBuf) -> Result<LabeledInstance, CliError> {
    match read_instance(path)? {
        Instance::Labeled(inst) => Ok(inst),
        Instance::Embedded(_) => Err(CliError::Usage(
            "this query needs a group-labeled instance, not an embedding".into(),
        )),
    }
}

fn resolve_vertex(inst: &LabeledInstance, name: &str) -> Result<VertexId, CliError> {
    inst.vertex_id(name)
        .ok_or_else(|| CliError::Usage(format!("unknown vertex `{name}`")))
}

fn emit(report: &Report) -> ExitCode {
    println!(
        "{}",
        serde_json::to_string_pretty(report).expect("reports serialize")
    );
    if report.status == "FOUND" {
        ExitCode::from(0)
    } else {
        ExitCode::from(2)
    }
}

fn path_endpoints(
    inst: &LabeledInstance,
    args: &PathArgs,
) -> Result<(VertexId, VertexId, Option<snzp::GroupElement>), CliError> {
    let from_query = match &inst.query {
        Some(Query::Path {
            source,
            target,
            forbidden,
        }) => Some((*source, *target, forbidden.clone())),
        _ => None,
    };
    let source = match &args.source {
        Some(name) => resolve_vertex(inst, name)?,
        None => {
            from_query
                .as_ref()
                .ok_or_else(|| CliError::Usage("no --source and no query line".into()))?
                .0
        }
    };
    let target = match &args.target {
        Some(name) => resolve_vertex(inst, name)?,
        None => {
            from_query
                .as_ref()
                .ok_or_else(|| CliError::Usage("no --target and no query line".into()))?
                .1
        }
    };
    let forbidden = match &args.forbid {
        Some(text) => Some(
            inst.graph
                .descriptor()
                .parse(text)
                .map_err(|e| CliError::Usage(format!("bad --forbid label: {e}")))?,
        ),
        None => from_query.and_then(|(_, _, f)| f),
    };
    Ok((source, target, forbidden))
}

fn witness_fields(inst: &LabeledInstance, report: &mut Report, path: &PathWitness) {
    let g = &inst.graph;
    report.value = Some(path.length().value());
    report.label = Some(g.descriptor().render(path.label()));
    report.vertices = Some(
        path.vertices()
            .iter()
            .map(|&v| inst.names[v].clone())
            .collect(),
    );
    report.edges = Some(path.steps().iter().map(|s| s.edge).collect());
}

fn cmd_path(args: PathArgs) -> Result<ExitCode, CliError> {
    let inst = labeled(&args.file)?;
    let (source, target, forbidden) = path_endpoints(&inst, &args)?;
    let forbidden = forbidden.unwrap_or_else(|| inst.graph.descriptor().identity());
    let (algo, name) = match args.algo {
        PathAlgo::Fast => (Algorithm::Fast, "fast"),
        PathAlgo::Recursive => (Algorithm::Recursive, "recursive"),
        PathAlgo::Oracle => (Algorithm::Oracle, "oracle"),
    };
    let result = shortest_nonzero_path(&inst.graph, source, target, &forbidden, algo)?;
    let mut report = Report::new("path", name, result.outcome.is_feasible());
    if let Outcome::Found(path) = &result.outcome {
        witness_fields(&inst, &mut report, path);
    }
    Ok(emit(&report))
}

fn cycle_fields(
    names: &[String],
    g: &LabeledGraph,
    report: &mut Report,
    cycle: &Walk,
) {
    report.value = Some(cycle.length().value());
    report.label = Some(g.descriptor().render(cycle.label()));
    report.vertices = Some(cycle.vertices().iter().map(|&v| names[v].clone()).collect());
    report.edges = Some(cycle.steps().iter().map(|s| s.edge).collect());
}

fn cmd_cycle(args: CycleArgs) -> Result<ExitCode, CliError> {
    let (graph, names) = match read_instance(&args.file)? {
        Instance::Labeled(inst) => (inst.graph, inst.names),
        Instance::Embedded(inst) => {
            // non-separating cycles via the homology labeling
            (homology_labeling(&inst.rotation).graph, inst.names)
        }
    };
    let (outcome, name): (Option<Walk>, &str) = match args.algo {
        CycleAlgo::Blossom => (
            match shortest_nonzero_cycle(&graph).outcome {
                CycleOutcome::Found { cycle, .. } => Some(cycle),
                CycleOutcome::Infeasible => None,
            },
            "blossom",
        ),
        CycleAlgo::Naive => (
            match shortest_nonzero_cycle_naive(&graph).outcome {
                CycleOutcome::Found { cycle, .. } => Some(cycle),
                CycleOutcome::Infeasible => None,
            },
            "naive",
        ),
        CycleAlgo::Oracle => (
            shortest_nonzero_cycle_oracle(&graph, OracleBudget::default())
                .map_err(SolveError::from)?,
            "oracle",
        ),
    };
    let mut report = Report::new("cycle", name, outcome.is_some());
    if let Some(cycle) = &outcome {
        cycle_fields(&names, &graph, &mut report, cycle);
    }
    Ok(emit(&report))
}

fn cmd_dual(args: DualArgs) -> Result<ExitCode, CliError> {
    let inst = labeled(&args.file)?;
    let g = &inst.graph;
    let query_endpoints = match &inst.query {
        Some(Query::Path { source, target, .. }) => Some((*source, *target)),
        _ => None,
    };
    let source = match &args.source {
        Some(name) => resolve_vertex(&inst, name)?,
        None => {
            query_endpoints
                .ok_or_else(|| CliError::Usage("no --source and no query line".into()))?
                .0
        }
    };
    let target = match &args.target {
        Some(name) => Some(resolve_vertex(&inst, name)?),
        None => query_endpoints.map(|(_, t)| t),
    };

    // the dual solver needs a connected, parallel-reduced input
    let component = component_of(g, source);
    let reduced = reduce_parallel_edges(&component.graph);
    let tree = dijkstra(&reduced.graph, component.local[source].expect("source in component"));
    let dual = fast_sup(&reduced.graph, &tree);
    let feasible = check_dual_feasibility(&reduced.graph, &tree, &dual);

    let mut values = BTreeMap::new();
    for (v, name) in inst.names.iter().enumerate() {
        let q = component.local[v].and_then(|lv| {
            dual.is_finite(lv).then(|| dual.value(lv).value())
        });
        values.insert(name.clone(), q);
    }
    let target_value = target.and_then(|t| values.get(&inst.names[t]).copied().flatten());
    let mut report = Report::new("dual", "fast", target.is_none() || target_value.is_some());
    report.value = target_value;
    report.dual = Some(values);
    report.dual_feasible = Some(feasible);
    Ok(emit(&report))
}

struct Component {
    graph: LabeledGraph,
    /// original vertex -> local id
    local: Vec<Option<VertexId>>,
}

fn component_of(g: &LabeledGraph, source: VertexId) -> Component {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    seen[source] = true;
    let mut stack = vec![source];
    while let Some(v) = stack.pop() {
        for &(e, _) in g.incident(v) {
            let w = g.edge(e).other(v);
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    let mut local = vec![None; n];
    let mut count = 0;
    for v in 0..n {
        if seen[v] {
            local[v] = Some(count);
            count += 1;
        }
    }
    let specs = g
        .edges()
        .iter()
        .filter(|e| seen[e.tail])
        .map(|e| {
            (
                local[e.tail].expect("in component"),
                local[e.head].expect("in component"),
                e.length,
                e.label.clone(),
            )
        })
        .collect();
    Component {
        graph: LabeledGraph::new(g.descriptor().clone(), count, specs)
            .expect("component extraction keeps edges valid"),
        local,
    }
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode, CliError> {
    let descriptor = parse_group_spec(&args.group)
        .ok_or_else(|| CliError::Usage(format!("unknown group `{}`", args.group)))?;
    if args.n == 0 {
        return Err(CliError::Usage("--n must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let graph = random_graph(
        &InstanceConfig {
            vertices: args.n,
            edges: args.m,
            descriptor,
            max_length: args.maxlen,
            ensure_connected: false,
        },
        &mut rng,
    );
    let names = (0..args.n).map(|v| format!("v{v}")).collect();
    let inst = LabeledInstance {
        graph,
        names,
        query: None,
    };
    let text = render_labeled(&inst);
    match &args.output {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?,
        None => print!("{text}"),
    }
    Ok(ExitCode::from(0))
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode, CliError> {
    if args.sizes.is_empty() {
        return Err(CliError::Usage("--sizes needs at least one entry".into()));
    }
    println!("n,m,wall_ms,queue_pops,queue_pushes,finds,unions,batch_total");
    for (i, &n) in args.sizes.iter().enumerate() {
        if n < 2 {
            return Err(CliError::Usage("bench sizes must be at least 2".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed.wrapping_add(i as u64));
        let g = random_graph(
            &InstanceConfig {
                vertices: n,
                edges: args.edges_per_vertex * n,
                descriptor: snzp::GroupDescriptor::z2(),
                max_length: 10,
                ensure_connected: true,
            },
            &mut rng,
        );
        let reduced = reduce_parallel_edges(&g);
        let tree = dijkstra(&reduced.graph, 0);
        let start = Instant::now();
        let (_, stats) = fast_sup_instrumented(&reduced.graph, &tree);
        let wall = start.elapsed().as_secs_f64() * 1000.0;
        let batch_total: u64 = stats.batch_entries.iter().map(|&c| c as u64).sum();
        println!(
            "{},{},{:.3},{},{},{},{},{}",
            n,
            reduced.graph.edge_count(),
            wall,
            stats.queue_pops,
            stats.queue_pushes,
            stats.finds,
            stats.unions,
            batch_total
        );
    }
    Ok(ExitCode::from(0))
}
