//! Single-objective and weighted-sum A*.
//!
//! Labels are `(g, t)` pairs: `g` is the searched cost and `t` a secondary
//! cost that only breaks ties in `g` (equal within the scalar's tolerance).
//! Open-list order: lowest `f`, then highest `g`, then lowest `t`, then
//! lowest vertex id. A vertex is re-expanded whenever its label improves.
//! With consistent heuristics the search stops once the queue's `f` passes
//! the goal cost; otherwise (paper-faithful mode, or an inadmissible layer)
//! it prunes on `g` against the best goal cost and runs until the queue is
//! empty, so the returned plan is optimal either way.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::objectives::{heuristic_value, Heuristic, HeuristicMode};
use crate::scalar::{approx_eq, Scalar};

/// Which planner produced a plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PlanSource {
    Objective(usize),
    Weighted,
}

/// A start-to-goal vertex sequence with its cost under every objective.
#[derive(Debug, Clone)]
pub struct Plan<S> {
    pub vertices: Vec<VertexId>,
    pub raw_costs: Vec<S>,
    pub source: PlanSource,
    pub expansions: u64,
    pub elapsed: Duration,
}

impl<S: Scalar> Plan<S> {
    pub fn start(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn goal(&self) -> VertexId {
        *self.vertices.last().expect("plans are non-empty")
    }
}

/// How a per-objective search chooses among plans tied on its objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PlanTies {
    /// Lowest sum over the other objectives, so the plan is never dominated.
    #[default]
    Pareto,
    /// Whichever tied plan the open-list order completes first.
    Plain,
}

impl fmt::Display for PlanTies {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlanTies::Pareto => "pareto",
            PlanTies::Plain => "plain",
        })
    }
}

impl FromStr for PlanTies {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pareto" => Ok(PlanTies::Pareto),
            "plain" => Ok(PlanTies::Plain),
            other => Err(Error::usage(format!(
                "unknown tie rule {other:?}; expected pareto or plain"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub mode: HeuristicMode,
    pub ties: PlanTies,
}

impl SearchConfig {
    /// Admissible mode resolves ties toward the Pareto frontier;
    /// paper-faithful mode keeps plain open-list tie-breaking.
    pub fn new(mode: HeuristicMode) -> Self {
        let ties = match mode {
            HeuristicMode::Admissible => PlanTies::Pareto,
            HeuristicMode::PaperFaithful => PlanTies::Plain,
        };
        SearchConfig { mode, ties }
    }
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig::new(HeuristicMode::Admissible)
    }
}

struct OpenEntry<S> {
    f: S,
    g: S,
    t: S,
    vertex: u32,
}

impl<S: Scalar> PartialEq for OpenEntry<S> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<S: Scalar> Eq for OpenEntry<S> {}

impl<S: Scalar> PartialOrd for OpenEntry<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: Scalar> Ord for OpenEntry<S> {
    // BinaryHeap is a max-heap: the "greatest" entry is popped first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .partial_cmp(&self.f)
            .unwrap_or(Ordering::Equal)
            .then_with(|| self.g.partial_cmp(&other.g).unwrap_or(Ordering::Equal))
            .then_with(|| other.t.partial_cmp(&self.t).unwrap_or(Ordering::Equal))
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

/// Combined heuristic `sum_j w_j * h_j` over the layers with non-zero weight.
struct CombinedHeuristic<'a, S> {
    graph: &'a Graph<S>,
    terms: Vec<(S, Heuristic)>,
    goal: VertexId,
}

impl<'a, S: Scalar> CombinedHeuristic<'a, S> {
    fn new(graph: &'a Graph<S>, weights: &[S], goal: VertexId) -> Self {
        let terms = weights
            .iter()
            .zip(graph.objectives())
            .filter(|(w, o)| **w > S::zero() && o.heuristic != Heuristic::Zero)
            .map(|(&w, o)| (w, o.heuristic))
            .collect();
        CombinedHeuristic { graph, terms, goal }
    }

    #[inline]
    fn value(&self, v: VertexId) -> S {
        let mut h = S::zero();
        for &(w, heuristic) in &self.terms {
            let est = heuristic_value(heuristic, self.graph.topology(), v, self.goal)
                .expect("heuristic geometry checked at layer creation");
            h = h + w * S::from_f64_lossy(est);
        }
        h
    }
}

/// Optimal plan for objective `layer`. With [`PlanTies::Pareto`], among
/// plans tied on that objective the one with the lowest sum over the other
/// objectives is returned, so the result is never dominated.
pub fn astar<S: Scalar>(
    g: &Graph<S>,
    layer: usize,
    start: VertexId,
    goal: VertexId,
    cfg: &SearchConfig,
) -> Result<Plan<S>> {
    g.check_objective(layer)?;
    let mut weights = vec![S::zero(); g.objective_count()];
    weights[layer] = S::one();
    let mut tie = vec![S::zero(); g.objective_count()];
    if cfg.ties == PlanTies::Pareto {
        tie.iter_mut().for_each(|t| *t = S::one());
        tie[layer] = S::zero();
    }
    let mut plan = search(g, &weights, &tie, start, goal, cfg)?;
    plan.source = PlanSource::Objective(layer);
    Ok(plan)
}

/// Optimal plan for the cost `sum_j weights[j] * cost_j`.
pub fn astar_weighted<S: Scalar>(
    g: &Graph<S>,
    weights: &[S],
    start: VertexId,
    goal: VertexId,
    cfg: &SearchConfig,
) -> Result<Plan<S>> {
    if weights.len() != g.objective_count() {
        return Err(Error::usage(format!(
            "{} weights for {} objectives",
            weights.len(),
            g.objective_count()
        )));
    }
    if weights.iter().any(|w| *w < S::zero()) || !weights.iter().any(|w| *w > S::zero()) {
        return Err(Error::usage(
            "weights must be non-negative with at least one positive entry",
        ));
    }
    let mut plan = search(g, weights, &[], start, goal, cfg)?;
    plan.source = PlanSource::Weighted;
    Ok(plan)
}

/// True when label `(g, t)` beats `(bg, bt)`: lower primary cost, or a
/// primary cost equal within tolerance and a lower secondary cost.
fn improves<S: Scalar>(g: S, t: S, bg: S, bt: S) -> bool {
    if approx_eq(g, bg) {
        t < bt && !approx_eq(t, bt)
    } else {
        g < bg
    }
}

fn within<S: Scalar>(a: S, bound: S) -> bool {
    a <= bound || approx_eq(a, bound)
}

/// A* on `sum_j weights[j] * cost_j`, breaking primary-cost ties by the
/// secondary cost `sum_j tie[j] * cost_j` (all zero when `tie` is empty).
fn search<S: Scalar>(
    g: &Graph<S>,
    weights: &[S],
    tie: &[S],
    start: VertexId,
    goal: VertexId,
    cfg: &SearchConfig,
) -> Result<Plan<S>> {
    let clock = Instant::now();
    g.topology().check_vertex(start)?;
    g.topology().check_vertex(goal)?;

    let terms = |w: &[S]| -> Vec<(usize, S)> {
        w.iter()
            .enumerate()
            .filter(|(_, w)| **w > S::zero())
            .map(|(j, &w)| (j, w))
            .collect()
    };
    let active = terms(weights);
    let secondary = terms(tie);
    let consistent = cfg.mode == HeuristicMode::Admissible && active.iter().all(|&(j, _)| g.objectives()[j].admissible);
    let heuristic = CombinedHeuristic::new(g, weights, goal);

    let n = g.vertex_count();
    let mut best_g: Vec<S> = vec![S::zero(); n];
    let mut best_t: Vec<S> = vec![S::zero(); n];
    let mut reached = vec![false; n];
    let mut parent = vec![u32::MAX; n];
    let mut open = BinaryHeap::new();
    let mut expansions = 0u64;
    let mut incumbent: Option<S> = None;

    reached[start.index()] = true;
    open.push(OpenEntry {
        f: heuristic.value(start),
        g: S::zero(),
        t: S::zero(),
        vertex: start.0,
    });

    while let Some(OpenEntry {
        f,
        g: gv,
        t: tv,
        vertex,
    }) = open.pop()
    {
        let v = VertexId(vertex);
        // Labels only improve, so an entry whose label is no longer the
        // vertex's best is stale.
        if gv != best_g[v.index()] || tv != best_t[v.index()] {
            continue;
        }
        if let Some(best) = incumbent {
            // With a consistent heuristic nothing left in the queue can
            // reach the goal at a lower primary cost; keep popping only
            // through the tolerance band, where a secondary tie may improve.
            if consistent && !within(f, best) {
                break;
            }
            if !within(gv, best) {
                continue;
            }
        }
        if v == goal {
            incumbent = Some(gv);
            continue;
        }
        expansions += 1;
        for edge in g.neighbors_unchecked(v) {
            let mut step = S::zero();
            for &(j, w) in &active {
                step = step + w * edge.costs[j];
            }
            let mut tstep = S::zero();
            for &(j, w) in &secondary {
                tstep = tstep + w * edge.costs[j];
            }
            let (ng, nt) = (gv + step, tv + tstep);
            let u = edge.to.index();
            if reached[u] && !improves(ng, nt, best_g[u], best_t[u]) {
                continue;
            }
            if let Some(best) = incumbent {
                if !within(ng, best) {
                    continue;
                }
            }
            reached[u] = true;
            best_g[u] = ng;
            best_t[u] = nt;
            parent[u] = vertex;
            open.push(OpenEntry {
                f: ng + heuristic.value(edge.to),
                g: ng,
                t: nt,
                vertex: edge.to.0,
            });
        }
    }

    if incumbent.is_none() {
        return Err(Error::NoPath {
            start: start.index(),
            goal: goal.index(),
            searched: reached.iter().filter(|&&r| r).count(),
        });
    }
    let mut vertices = vec![goal];
    let mut cur = goal;
    while cur != start {
        cur = VertexId(parent[cur.index()]);
        vertices.push(cur);
    }
    vertices.reverse();
    let raw_costs = evaluate_plan(g, &vertices)?;
    Ok(Plan {
        vertices,
        raw_costs,
        source: PlanSource::Weighted,
        expansions,
        elapsed: clock.elapsed(),
    })
}

/// Cost of a vertex sequence under every objective.
pub fn evaluate_plan<S: Scalar>(g: &Graph<S>, vertices: &[VertexId]) -> Result<Vec<S>> {
    let mut totals = vec![S::zero(); g.objective_count()];
    if let Some(&first) = vertices.first() {
        g.topology().check_vertex(first)?;
    }
    for pair in vertices.windows(2) {
        let edge = g.edge(pair[0], pair[1]).ok_or(Error::InvalidPlan {
            from: pair[0].index(),
            to: pair[1].index(),
        })?;
        for (t, &c) in totals.iter_mut().zip(edge.costs) {
            *t = *t + c;
        }
    }
    Ok(totals)
}

/// Cost of a vertex sequence under a single objective.
pub fn evaluate_plan_objective<S: Scalar>(g: &Graph<S>, vertices: &[VertexId], j: usize) -> Result<S> {
    g.check_objective(j)?;
    let mut total = S::zero();
    for pair in vertices.windows(2) {
        let edge = g.edge(pair[0], pair[1]).ok_or(Error::InvalidPlan {
            from: pair[0].index(),
            to: pair[1].index(),
        })?;
        total = total + edge.costs[j];
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{grid_to_graph, CornerCutting, GridMap};
    use crate::objectives::{label_distance, label_random, label_uniform, RandomSpec};
    use std::sync::Arc;

    fn graph(map: &GridMap) -> Graph<f64> {
        let t = Arc::new(grid_to_graph(map, CornerCutting::Forbid));
        Graph::new(
            t.clone(),
            vec![
                label_distance(&t, std::f64::consts::SQRT_2).unwrap(),
                label_uniform(&t, 1.0).unwrap(),
                label_random(&t, RandomSpec::new(1, 20, 4).unwrap()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn pareto_ties_prefer_cheaper_secondary() {
        let t = Arc::new(grid_to_graph(&GridMap::open(3, 2), CornerCutting::Forbid));
        let g = Graph::new(
            t.clone(),
            vec![
                label_distance(&t, std::f64::consts::SQRT_2).unwrap(),
                label_uniform(&t, 1.0).unwrap(),
            ],
        )
        .unwrap();
        // Two-step plans from (0,0) to (0,2): straight, or down-up through (1,1).
        let (s, t) = (VertexId(0), VertexId(2));
        let pareto = astar(&g, 1, s, t, &SearchConfig::default()).unwrap();
        assert_eq!(pareto.raw_costs[1], 2.0);
        assert!(
            pareto.vertices == vec![VertexId(0), VertexId(1), VertexId(2)],
            "{:?}",
            pareto.vertices
        );
        let plain = SearchConfig {
            ties: PlanTies::Plain,
            ..SearchConfig::default()
        };
        assert_eq!(astar(&g, 1, s, t, &plain).unwrap().raw_costs[1], 2.0);
        assert_eq!("plain".parse::<PlanTies>().unwrap(), PlanTies::Plain);
        assert!("fair".parse::<PlanTies>().is_err());
        assert_eq!(SearchConfig::new(HeuristicMode::PaperFaithful).ties, PlanTies::Plain);
    }

    #[test]
    fn start_equals_goal() {
        let g = graph(&GridMap::open(3, 3));
        let p = astar(&g, 0, VertexId(4), VertexId(4), &SearchConfig::default()).unwrap();
        assert_eq!(p.vertices, vec![VertexId(4)]);
        assert_eq!(p.raw_costs, vec![0.0; 3]);
        assert_eq!(p.expansions, 0);
    }

    #[test]
    fn straight_corridor() {
        let g = graph(&GridMap::open(3, 1));
        let p = astar(&g, 0, VertexId(0), VertexId(2), &SearchConfig::default()).unwrap();
        assert_eq!(p.vertices.len(), 3);
        assert_eq!(p.raw_costs[0], 2.0);
        assert_eq!(p.raw_costs[1], 2.0);
        assert!(p.expansions > 0);
        assert_eq!(p.source, PlanSource::Objective(0));
    }

    #[test]
    fn unreachable_goal_reports_component() {
        let m = GridMap::from_rows(&["..@..", "..@.."]).unwrap();
        let g = graph(&m);
        let err = astar(&g, 0, VertexId(0), VertexId(7), &SearchConfig::default()).unwrap_err();
        match err {
            Error::NoPath { searched, .. } => assert_eq!(searched, 4),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn bad_arguments() {
        let g = graph(&GridMap::open(2, 2));
        let cfg = SearchConfig::default();
        assert!(astar(&g, 3, VertexId(0), VertexId(1), &cfg).is_err());
        assert!(astar(&g, 0, VertexId(0), VertexId(9), &cfg).is_err());
        assert!(astar_weighted(&g, &[1.0, 1.0], VertexId(0), VertexId(1), &cfg).is_err());
        assert!(astar_weighted(&g, &[0.0, 0.0, 0.0], VertexId(0), VertexId(1), &cfg).is_err());
        assert!(astar_weighted(&g, &[1.0, -1.0, 0.0], VertexId(0), VertexId(1), &cfg).is_err());
    }

    #[test]
    fn one_hot_weights_reduce_to_single_objective() {
        let g = graph(&GridMap::open(7, 7));
        let cfg = SearchConfig::default();
        for j in 0..3 {
            let mut w = vec![0.0; 3];
            w[j] = 1.0;
            let a = astar(&g, j, VertexId(0), VertexId(48), &cfg).unwrap();
            let b = astar_weighted(&g, &w, VertexId(0), VertexId(48), &cfg).unwrap();
            assert!((a.raw_costs[j] - b.raw_costs[j]).abs() < 1e-9);
            assert_eq!(b.source, PlanSource::Weighted);
        }
    }

    #[test]
    fn evaluate_plan_checks_adjacency() {
        let g = graph(&GridMap::open(3, 3));
        assert_eq!(evaluate_plan(&g, &[VertexId(0)]).unwrap(), vec![0.0; 3]);
        let two = evaluate_plan(&g, &[VertexId(0), VertexId(1), VertexId(2)]).unwrap();
        assert_eq!(two[0], 2.0);
        match evaluate_plan(&g, &[VertexId(0), VertexId(1), VertexId(8)]) {
            Err(Error::InvalidPlan { from: 1, to: 8 }) => {}
            other => panic!("{other:?}"),
        }
        assert_eq!(
            evaluate_plan_objective(&g, &[VertexId(0), VertexId(4)], 1).unwrap(),
            1.0
        );
    }

    #[test]
    fn plan_costs_match_evaluation() {
        let g = graph(&GridMap::open(8, 6));
        for j in 0..3 {
            let p = astar(&g, j, VertexId(0), VertexId(47), &SearchConfig::default()).unwrap();
            assert_eq!(evaluate_plan(&g, &p.vertices).unwrap(), p.raw_costs);
            assert_eq!(p.start(), VertexId(0));
            assert_eq!(p.goal(), VertexId(47));
        }
    }

    #[test]
    fn paper_faithful_mode_stays_optimal() {
        use crate::objectives::{assemble_graph, parse_objectives, LayerOptions};
        let t = Arc::new(grid_to_graph(&GridMap::open(9, 9), CornerCutting::Forbid));
        let base: Graph<f64> = Graph::new(t, vec![]).unwrap();
        let specs = parse_objectives("distance,uniform:1,random:1:20:3").unwrap();
        let adm = assemble_graph(&base, &specs, &LayerOptions::default()).unwrap();
        let pf_opts = LayerOptions {
            mode: HeuristicMode::PaperFaithful,
            ..Default::default()
        };
        let pf = assemble_graph(&base, &specs, &pf_opts).unwrap();
        for j in 0..3 {
            let a = astar(&adm, j, VertexId(0), VertexId(80), &SearchConfig::default()).unwrap();
            let b = astar(
                &pf,
                j,
                VertexId(0),
                VertexId(80),
                &SearchConfig::new(HeuristicMode::PaperFaithful),
            )
            .unwrap();
            assert!((a.raw_costs[j] - b.raw_costs[j]).abs() < 1e-9, "layer {j}");
        }
    }

    #[test]
    fn rational_search() {
        let t = Arc::new(grid_to_graph(&GridMap::open(4, 4), CornerCutting::Forbid));
        let g: Graph<crate::Rational> = Graph::new(
            t.clone(),
            vec![
                label_uniform(&t, crate::Rational::new(3, 2)).unwrap(),
                crate::objectives::label_safety(&t),
            ],
        )
        .unwrap();
        let p = astar(&g, 0, VertexId(0), VertexId(15), &SearchConfig::default()).unwrap();
        assert_eq!(p.raw_costs[0], crate::Rational::new(9, 2));
    }
}
