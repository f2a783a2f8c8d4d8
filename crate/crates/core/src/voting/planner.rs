use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use super::{build_score_matrix, vote, Mechanism, ScoreMatrix, TieBreak, VoteOutcome};
use crate::error::Result;
use crate::graph::{Graph, VertexId};
use crate::scalar::Scalar;
use crate::search::{astar, Plan, SearchConfig};

#[derive(Debug, Clone, Copy, Default)]
pub struct VbmoConfig {
    pub search: SearchConfig,
    pub tie_break: TieBreak,
    /// Run the per-objective searches on the rayon pool.
    pub parallel: bool,
}

/// Everything one voting-planner run produces.
#[derive(Debug, Clone)]
pub struct VbmoReport<S> {
    pub objective_names: Vec<String>,
    /// Plan `j` optimizes objective `j`.
    pub plans: Vec<Plan<S>>,
    pub matrix: ScoreMatrix<S>,
    pub outcome: VoteOutcome<S>,
    pub elapsed: Duration,
}

impl<S: Scalar> VbmoReport<S> {
    pub fn winner(&self) -> &Plan<S> {
        &self.plans[self.outcome.winner]
    }

    /// Node expansions summed over the per-objective searches.
    pub fn total_expansions(&self) -> u64 {
        self.plans.iter().map(|p| p.expansions).sum()
    }

    pub fn to_report(&self, g: &Graph<S>) -> PlanReport {
        let f = |v: &S| v.to_f64_lossy();
        let grid = g.topology().grid();
        PlanReport {
            objectives: self.objective_names.clone(),
            mechanism: self.outcome.mechanism,
            plans: self
                .plans
                .iter()
                .zip(&self.objective_names)
                .map(|(p, name)| PlanEntry {
                    objective: name.clone(),
                    vertices: p.vertices.clone(),
                    cells: grid.map(|gg| {
                        p.vertices
                            .iter()
                            .map(|v| {
                                let (r, c) = gg.cells[v.index()];
                                [r, c]
                            })
                            .collect()
                    }),
                    raw_costs: p.raw_costs.iter().map(f).collect(),
                    expansions: p.expansions,
                    elapsed_ms: p.elapsed.as_secs_f64() * 1e3,
                })
                .collect(),
            raw_matrix: self.matrix.raw().iter().map(|r| r.iter().map(f).collect()).collect(),
            normalized_matrix: self
                .matrix
                .normalized()
                .iter()
                .map(|r| r.iter().map(f).collect())
                .collect(),
            totals: self.outcome.totals.iter().map(f).collect(),
            winner: self.outcome.winner,
            winner_objective: self.objective_names[self.outcome.winner].clone(),
            tie_set: self.outcome.tie_set.clone(),
            expansions: self.total_expansions(),
            elapsed_ms: self.elapsed.as_secs_f64() * 1e3,
        }
    }
}

/// Serializable form of a [`VbmoReport`].
#[derive(Debug, Clone, Serialize)]
pub struct PlanReport {
    pub objectives: Vec<String>,
    pub mechanism: Mechanism,
    pub plans: Vec<PlanEntry>,
    pub raw_matrix: Vec<Vec<f64>>,
    pub normalized_matrix: Vec<Vec<f64>>,
    pub totals: Vec<f64>,
    pub winner: usize,
    pub winner_objective: String,
    pub tie_set: Vec<usize>,
    pub expansions: u64,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PlanEntry {
    pub objective: String,
    pub vertices: Vec<VertexId>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cells: Option<Vec<[u32; 2]>>,
    pub raw_costs: Vec<f64>,
    pub expansions: u64,
    pub elapsed_ms: f64,
}

/// One optimal plan per objective, in objective order.
pub fn plan_all<S: Scalar>(g: &Graph<S>, start: VertexId, goal: VertexId, cfg: &VbmoConfig) -> Result<Vec<Plan<S>>> {
    let run = |j: usize| astar(g, j, start, goal, &cfg.search);
    if cfg.parallel {
        (0..g.objective_count()).into_par_iter().map(run).collect()
    } else {
        (0..g.objective_count()).map(run).collect()
    }
}

/// Scores the plans under every objective and votes.
pub fn select<S: Scalar>(
    g: &Graph<S>,
    plans: Vec<Plan<S>>,
    mechanism: Mechanism,
    tie_break: TieBreak,
) -> Result<VbmoReport<S>> {
    let clock = Instant::now();
    let matrix = build_score_matrix(&plans, g)?;
    let outcome = vote(&matrix, mechanism, tie_break);
    let search_time: Duration = plans.iter().map(|p| p.elapsed).sum();
    Ok(VbmoReport {
        objective_names: g.objective_names().map(str::to_owned).collect(),
        plans,
        matrix,
        outcome,
        elapsed: search_time + clock.elapsed(),
    })
}

/// Plans once per objective, builds the score matrix and returns the plan
/// chosen by `mechanism`.
pub fn vbmo<S: Scalar>(
    g: &Graph<S>,
    start: VertexId,
    goal: VertexId,
    mechanism: Mechanism,
    cfg: &VbmoConfig,
) -> Result<VbmoReport<S>> {
    let clock = Instant::now();
    let plans = plan_all(g, start, goal, cfg)?;
    let mut report = select(g, plans, mechanism, cfg.tie_break)?;
    if cfg.parallel {
        report.elapsed = clock.elapsed();
    }
    Ok(report)
}
