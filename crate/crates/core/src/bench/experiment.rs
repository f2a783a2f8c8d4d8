use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::sampling::sample_pairs;
use super::score_plan;
use crate::error::Result;
use crate::graph::{Graph, VertexId};
use crate::ingest::{grid_to_graph, CornerCutting, GridMap};
use crate::objectives::{assemble_graph, HeuristicMode, LayerOptions, ObjectiveSpec};
use crate::search::{astar_weighted, Plan, PlanTies, SearchConfig};
use crate::voting::{build_score_matrix, dominates_approx, plan_all, vote, Mechanism, TieBreak, VbmoConfig};

/// One environment: a topology, plus the road layers for DIMACS networks.
#[derive(Debug, Clone)]
pub struct MapInstance {
    pub id: String,
    pub base: Graph<f64>,
}

impl MapInstance {
    pub fn from_grid(id: impl Into<String>, map: &GridMap, corner_cutting: CornerCutting) -> Result<Self> {
        Ok(MapInstance {
            id: id.into(),
            base: Graph::new(grid_to_graph(map, corner_cutting), vec![])?,
        })
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub name: String,
    pub objectives: Vec<ObjectiveSpec>,
    pub mechanisms: Vec<Mechanism>,
    /// Also run the equally-weighted-sum baseline.
    pub baseline: bool,
    /// Start/goal pairs per map.
    pub runs: usize,
    pub seed: u64,
    pub mode: HeuristicMode,
    pub ties: PlanTies,
    pub diagonal_cost: f64,
}

impl ExperimentConfig {
    pub fn new(name: impl Into<String>, objectives: Vec<ObjectiveSpec>) -> Self {
        ExperimentConfig {
            name: name.into(),
            objectives,
            mechanisms: Mechanism::ALL.to_vec(),
            baseline: true,
            runs: 50,
            seed: 0,
            mode: HeuristicMode::PaperFaithful,
            ties: PlanTies::Plain,
            diagonal_cost: std::f64::consts::SQRT_2,
        }
    }

    fn layer_options(&self) -> LayerOptions {
        LayerOptions {
            mode: self.mode,
            diagonal_cost: self.diagonal_cost,
            random_seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Planner {
    Vbmo,
    Weighted,
}

impl Planner {
    pub fn name(self) -> &'static str {
        match self {
            Planner::Vbmo => "vbmo",
            Planner::Weighted => "weighted",
        }
    }
}

/// One planner's result on one start/goal pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub map: String,
    /// Index of the pair within its map's sample.
    pub pair: usize,
    pub start: VertexId,
    pub goal: VertexId,
    pub planner: Planner,
    /// `None` for the weighted baseline.
    pub mechanism: Option<Mechanism>,
    /// Range total of the selected plan against this run's score matrix.
    pub score: f64,
    pub time_ms: f64,
    pub expansions: u64,
    /// Objective whose optimal plan was selected (VBMO only).
    pub winner_objective: Option<String>,
}

impl ExperimentRecord {
    /// `vbmo-range`, `weighted`, ...
    pub fn label(&self) -> String {
        match self.mechanism {
            Some(m) => format!("{}-{}", self.planner.name(), m.name()),
            None => self.planner.name().to_owned(),
        }
    }

    fn sort_key(&self) -> (&str, usize, Planner, Option<Mechanism>) {
        (&self.map, self.pair, self.planner, self.mechanism)
    }
}

#[derive(Debug, Clone, Default)]
pub struct ExperimentOutput {
    /// Sorted by map, pair, planner, mechanism.
    pub records: Vec<ExperimentRecord>,
    /// `(map, pair, message)` for trials that were skipped.
    pub failures: Vec<(String, usize, String)>,
    /// Selected plans dominated by another of the run's plans. Always 0
    /// unless something is broken.
    pub dominated_winners: usize,
}

pub const CSV_HEADER: &str = "map,start,goal,planner,mechanism,score,time_ms,expansions,winner_objective";

impl ExperimentOutput {
    /// CSV in the record schema. With `include_time` false the `time_ms`
    /// column is left empty so output is byte-reproducible.
    pub fn to_csv(&self, include_time: bool) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            let time = if include_time {
                format!("{:.4}", r.time_ms)
            } else {
                String::new()
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{:.9},{},{},{}",
                r.map,
                r.start.0,
                r.goal.0,
                r.planner.name(),
                r.mechanism.map_or("", Mechanism::name),
                r.score,
                time,
                r.expansions,
                r.winner_objective.as_deref().unwrap_or(""),
            );
        }
        out
    }
}

struct Trial<'a> {
    map: &'a MapInstance,
    graph: &'a Graph<f64>,
    pair: usize,
    start: VertexId,
    goal: VertexId,
}

/// Runs every configured planner on `cfg.runs` sampled pairs per map.
/// Trials run on the rayon pool; a trial that fails is logged and skipped.
/// Errors only for invalid configuration or unsamplable maps.
pub fn run_experiment(cfg: &ExperimentConfig, maps: &[MapInstance]) -> Result<ExperimentOutput> {
    let opts = cfg.layer_options();
    let graphs: Vec<Graph<f64>> = maps
        .iter()
        .map(|m| assemble_graph(&m.base, &cfg.objectives, &opts))
        .collect::<Result<_>>()?;
    let mut trials = Vec::new();
    for (k, (map, graph)) in maps.iter().zip(&graphs).enumerate() {
        let seed = cfg.seed ^ (k as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        for (pair, (start, goal)) in sample_pairs(graph.topology(), cfg.runs, seed)?.into_iter().enumerate() {
            trials.push(Trial {
                map,
                graph,
                pair,
                start,
                goal,
            });
        }
    }
    let search = SearchConfig {
        mode: cfg.mode,
        ties: cfg.ties,
    };
    let results: Vec<_> = trials.par_iter().map(|t| (t, run_trial(cfg, t, &search))).collect();

    let mut out = ExperimentOutput::default();
    for (t, result) in results {
        match result {
            Ok((records, violations)) => {
                out.records.extend(records);
                out.dominated_winners += violations;
            }
            Err(e) => {
                log::warn!("{} pair {} ({} -> {}): {e}", t.map.id, t.pair, t.start, t.goal);
                out.failures.push((t.map.id.clone(), t.pair, e.to_string()));
            }
        }
    }
    out.records.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    Ok(out)
}

fn run_trial(cfg: &ExperimentConfig, t: &Trial<'_>, search: &SearchConfig) -> Result<(Vec<ExperimentRecord>, usize)> {
    let g = t.graph;
    let vcfg = VbmoConfig {
        search: *search,
        tie_break: TieBreak::LowestIndex,
        parallel: false,
    };
    let plans = plan_all(g, t.start, t.goal, &vcfg)?;
    let search_ms: f64 = plans.iter().map(|p| p.elapsed.as_secs_f64() * 1e3).sum();
    let expansions: u64 = plans.iter().map(|p| p.expansions).sum();
    let record = |planner, mechanism, score, time_ms, expansions, winner_objective| ExperimentRecord {
        map: t.map.id.clone(),
        pair: t.pair,
        start: t.start,
        goal: t.goal,
        planner,
        mechanism,
        score,
        time_ms,
        expansions,
        winner_objective,
    };

    let clock = Instant::now();
    let m = build_score_matrix(&plans, g)?;
    let matrix_ms = clock.elapsed().as_secs_f64() * 1e3;
    let mut records = Vec::new();
    let mut violations = 0;
    for &mechanism in &cfg.mechanisms {
        let clock = Instant::now();
        let outcome = vote(&m, mechanism, TieBreak::LowestIndex);
        let vote_ms = clock.elapsed().as_secs_f64() * 1e3;
        let w = outcome.winner;
        if dominated(&plans, w)? {
            log::error!("{} pair {}: {mechanism} winner is dominated", t.map.id, t.pair);
            violations += 1;
        }
        records.push(record(
            Planner::Vbmo,
            Some(mechanism),
            m.normalized()[w].iter().sum(),
            search_ms + matrix_ms + vote_ms,
            expansions,
            Some(g.objectives()[w].name.clone()),
        ));
    }
    if cfg.baseline {
        let weighted = astar_weighted(g, &vec![1.0; g.objective_count()], t.start, t.goal, search)?;
        records.push(record(
            Planner::Weighted,
            None,
            score_plan(&m, &weighted.raw_costs)?,
            weighted.elapsed.as_secs_f64() * 1e3,
            weighted.expansions,
            None,
        ));
    }
    Ok((records, violations))
}

fn dominated(plans: &[Plan<f64>], w: usize) -> Result<bool> {
    for p in plans {
        if dominates_approx(&p.raw_costs, &plans[w].raw_costs)? {
            return Ok(true);
        }
    }
    Ok(false)
}
