//! `vbmo` command-line front end.
//!
//! JSON goes to stdout, diagnostics to stderr. Exit codes: 0 on success,
//! 1 when no path exists or pair sampling fails, 2 for bad flags or input.

mod load;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use vbmo_core::bench::{
    describe_objectives, load_maps, render_comparison, run_experiment, spread, summarize, synthetic_corpus,
    ComparisonRow, ExperimentConfig, MapInstance,
};
use vbmo_core::ingest::CornerCutting;
use vbmo_core::objectives::{assemble_graph, parse_objectives, LayerOptions};
use vbmo_core::oracle::{brute_optimal, brute_pareto, enumerate_paths, DEFAULT_PATH_CAP};
use vbmo_core::voting::{vbmo, VbmoConfig};
use vbmo_core::{Error, HeuristicMode, Mechanism, PlanTies, Result, SearchConfig, TieBreak};

use load::{load_environment, Environment};

#[derive(Parser)]
#[command(name = "vbmo", version, about = "Voting-based multi-objective path planning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plan one start/goal query and print the full voting report.
    Plan(PlanArgs),
    /// Run VBMO and the weighted baseline over sampled pairs on many maps.
    Bench(BenchArgs),
    /// Enumerate every simple path and print the exact Pareto frontier.
    Oracle(OracleArgs),
    /// Print node, edge, degree and component statistics.
    Inspect(InspectArgs),
}

#[derive(Args)]
struct MapArgs {
    /// MovingAI `.map` file, or a DIMACS `.gr` distance file.
    #[arg(long)]
    map: PathBuf,
    /// DIMACS `.gr` travel-time file (road networks only).
    #[arg(long)]
    time: Option<PathBuf>,
    /// DIMACS `.co` coordinate file (road networks only).
    #[arg(long)]
    coords: Option<PathBuf>,
    /// Diagonal moves on grids: `allow` or `forbid` cutting past blocked corners.
    #[arg(long, default_value = "forbid")]
    corner_cutting: CornerCutting,
}

#[derive(Args)]
struct LayerArgs {
    /// Comma-separated objectives: distance, time, uniform:<c>,
    /// random:<lo>:<hi>[:<seed>], safety.
    #[arg(long)]
    objectives: String,
    /// Cost of a diagonal grid step in the distance layer.
    #[arg(long, default_value_t = std::f64::consts::SQRT_2)]
    diagonal_cost: f64,
}

#[derive(Args)]
struct PlanArgs {
    #[command(flatten)]
    map: MapArgs,
    #[command(flatten)]
    layers: LayerArgs,
    /// `row,col` on grids, 1-based node id on road networks.
    #[arg(long)]
    start: String,
    #[arg(long)]
    goal: String,
    #[arg(long, default_value = "range")]
    mechanism: Mechanism,
    #[arg(long, default_value = "admissible")]
    heuristic_mode: HeuristicMode,
    /// How each objective's search picks among equally cheap plans:
    /// `pareto` or `plain`. Defaults to `pareto` in admissible mode and
    /// `plain` in paper-faithful mode.
    #[arg(long)]
    ties: Option<PlanTies>,
    /// `lowest` or `random:<seed>`.
    #[arg(long, default_value = "lowest")]
    tie_break: TieBreak,
    /// Seed for random objectives given without one.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct BenchArgs {
    /// A `.map` file, a directory of them, or a DIMACS `.gr` file.
    #[arg(long, conflicts_with = "synthetic")]
    maps: Option<PathBuf>,
    /// Use this many generated cave and room maps instead of `--maps`.
    #[arg(long)]
    synthetic: Option<usize>,
    #[arg(long)]
    time: Option<PathBuf>,
    #[arg(long)]
    coords: Option<PathBuf>,
    #[command(flatten)]
    layers: LayerArgs,
    #[arg(long, value_delimiter = ',', default_value = "range,borda,cav")]
    mechanisms: Vec<Mechanism>,
    /// `weighted` or `none`.
    #[arg(long, default_value = "weighted")]
    baseline: String,
    /// Start/goal pairs per map.
    #[arg(long, default_value_t = 50)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "paper-faithful")]
    heuristic_mode: HeuristicMode,
    /// How each objective's search picks among equally cheap plans:
    /// `pareto` or `plain`. Defaults to `pareto` in admissible mode and
    /// `plain` in paper-faithful mode.
    #[arg(long)]
    ties: Option<PlanTies>,
    #[arg(long, default_value = "forbid")]
    corner_cutting: CornerCutting,
    /// Maps drawn evenly from a directory.
    #[arg(long, default_value_t = 10)]
    map_limit: usize,
    /// Use every map in the directory.
    #[arg(long)]
    all_maps: bool,
    /// Leave the time column empty so the CSV is byte-reproducible.
    #[arg(long)]
    omit_time: bool,
    #[arg(long, default_value = "experiment")]
    name: String,
    /// Output directory for `records.csv`, `summary.json` and `table.txt`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    map: MapArgs,
    #[command(flatten)]
    layers: LayerArgs,
    #[arg(long)]
    start: String,
    #[arg(long)]
    goal: String,
    /// Give up beyond this many simple paths.
    #[arg(long, default_value_t = DEFAULT_PATH_CAP)]
    cap: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct InspectArgs {
    #[command(flatten)]
    map: MapArgs,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("vbmo: {e}");
        return ExitCode::from(2);
    }
    let result = match cli.command {
        Command::Plan(a) => cmd_plan(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Inspect(a) => cmd_inspect(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("vbmo: {e}");
            ExitCode::from(if e.is_runtime() { 1 } else { 2 })
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("VBMO_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| Error::Usage(format!("VBMO_THREADS must be a non-negative integer, got {raw:?}")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Usage(e.to_string()))?;
    }
    Ok(())
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(std::io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn layer_options(layers: &LayerArgs, mode: HeuristicMode, seed: u64) -> LayerOptions {
    LayerOptions {
        mode,
        diagonal_cost: layers.diagonal_cost,
        random_seed: seed,
    }
}

fn search_config(mode: HeuristicMode, ties: Option<PlanTies>) -> SearchConfig {
    let mut cfg = SearchConfig::new(mode);
    if let Some(t) = ties {
        cfg.ties = t;
    }
    cfg
}

fn cmd_plan(a: PlanArgs) -> Result<()> {
    let env = load_environment(&a.map, a.heuristic_mode)?;
    let specs = parse_objectives(&a.layers.objectives)?;
    let g = assemble_graph(&env.base, &specs, &layer_options(&a.layers, a.heuristic_mode, a.seed))?;
    let start = env.vertex(&a.start, "start")?;
    let goal = env.vertex(&a.goal, "goal")?;
    let cfg = VbmoConfig {
        search: search_config(a.heuristic_mode, a.ties),
        tie_break: a.tie_break,
        parallel: true,
    };
    let report = vbmo(&g, start, goal, a.mechanism, &cfg)?;
    print_json(&report.to_report(&g))
}

fn cmd_bench(a: BenchArgs) -> Result<()> {
    let baseline = match a.baseline.as_str() {
        "weighted" => true,
        "none" => false,
        other => {
            return Err(Error::Usage(format!(
                "unknown baseline {other:?}; expected weighted or none"
            )))
        }
    };
    let specs = parse_objectives(&a.layers.objectives)?;
    if specs.len() < 2 {
        log::warn!("a single objective makes every vote trivial");
    }
    if a.runs == 0 {
        return Err(Error::Usage("--runs must be at least 1".into()));
    }
    let maps = bench_maps(&a)?;
    eprintln!("running {} maps x {} pairs", maps.len(), a.runs);
    let mut cfg = ExperimentConfig::new(a.name.clone(), specs);
    cfg.mechanisms = a.mechanisms.clone();
    cfg.baseline = baseline;
    cfg.runs = a.runs;
    cfg.seed = a.seed;
    cfg.mode = a.heuristic_mode;
    cfg.ties = search_config(a.heuristic_mode, a.ties).ties;
    cfg.diagonal_cost = a.layers.diagonal_cost;
    let out = run_experiment(&cfg, &maps)?;
    let summary = summarize(&cfg, &out);

    std::fs::create_dir_all(&a.out)?;
    std::fs::write(a.out.join("records.csv"), out.to_csv(!a.omit_time))?;
    let summary_json = serde_json::to_string_pretty(&summary).map_err(std::io::Error::from)?;
    std::fs::write(a.out.join("summary.json"), summary_json + "\n")?;
    let rows: Vec<ComparisonRow> = ComparisonRow::from_summary(describe_objectives(&cfg.objectives), &summary)
        .into_iter()
        .collect();
    if !rows.is_empty() {
        std::fs::write(a.out.join("table.txt"), render_comparison(&rows))?;
    }
    if !out.failures.is_empty() {
        eprintln!("{} trials failed and were skipped", out.failures.len());
    }
    print_json(&summary)
}

fn bench_maps(a: &BenchArgs) -> Result<Vec<MapInstance>> {
    if let Some(count) = a.synthetic {
        return synthetic_corpus(count, a.seed)
            .into_iter()
            .map(|(id, m)| MapInstance::from_grid(id, &m, a.corner_cutting))
            .collect();
    }
    let Some(path) = &a.maps else {
        return Err(Error::Usage("pass --maps <dir|file> or --synthetic <count>".into()));
    };
    if path.extension().is_some_and(|x| x == "gr") {
        let args = MapArgs {
            map: path.clone(),
            time: a.time.clone(),
            coords: a.coords.clone(),
            corner_cutting: a.corner_cutting,
        };
        let env = load_environment(&args, a.heuristic_mode)?;
        let id = path
            .file_stem()
            .map_or("road".into(), |s| s.to_string_lossy().into_owned());
        return Ok(vec![MapInstance { id, base: env.base }]);
    }
    let all = load_maps(path)?;
    let chosen = if a.all_maps { all } else { spread(&all, a.map_limit) };
    chosen
        .into_iter()
        .map(|(id, m)| MapInstance::from_grid(id, &m, a.corner_cutting))
        .collect()
}

fn cmd_oracle(a: OracleArgs) -> Result<()> {
    let env = load_environment(&a.map, HeuristicMode::Admissible)?;
    let specs = parse_objectives(&a.layers.objectives)?;
    let g = assemble_graph(
        &env.base,
        &specs,
        &layer_options(&a.layers, HeuristicMode::Admissible, a.seed),
    )?;
    let start = env.vertex(&a.start, "start")?;
    let goal = env.vertex(&a.goal, "goal")?;
    let paths = enumerate_paths(&g, start, goal, a.cap)?;
    if paths.is_empty() {
        return Err(Error::NoPath {
            start: start.index(),
            goal: goal.index(),
            searched: g.vertex_count(),
        });
    }
    let optima = (0..g.objective_count())
        .map(|j| {
            let (cost, index) = brute_optimal(&paths, j)?;
            Ok(json!({
                "objective": g.objectives()[j].name,
                "cost": cost,
                "path": index,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    let frontier: Vec<_> = brute_pareto(&paths)
        .into_iter()
        .map(|i| {
            json!({
                "path": i,
                "vertices": paths.paths[i],
                "cells": env.cells(&paths.paths[i]),
                "costs": paths.cost_vectors[i],
            })
        })
        .collect();
    print_json(&json!({
        "objectives": g.objective_names().collect::<Vec<_>>(),
        "paths": paths.len(),
        "optima": optima,
        "frontier": frontier,
    }))
}

fn cmd_inspect(a: InspectArgs) -> Result<()> {
    let env = load_environment(&a.map, HeuristicMode::Admissible)?;
    print_json(&inspect_json(&env))
}

fn inspect_json(env: &Environment) -> serde_json::Value {
    let topo = env.base.topology();
    let arcs = topo.edge_count();
    // Grid topologies store each undirected edge as two arcs.
    let edges = if topo.is_symmetric() { arcs / 2 } else { arcs };
    let mut value = json!({
        "nodes": topo.vertex_count(),
        "edges": edges,
        "arcs": arcs,
        "average_degree": topo.average_degree(),
        "components": topo.components().1,
        "objectives": env.base.objective_names().collect::<Vec<_>>(),
    });
    if let Some(note) = env.reference_note() {
        value["note"] = note.into();
    }
    value
}
