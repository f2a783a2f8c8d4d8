//! Brute-force reference computations for small instances.
//!
//! Nothing here shares code with the search or voting modules: paths are
//! enumerated by exhaustive DFS, shortest costs come from a plain Dijkstra,
//! and the voting reference reimplements normalization and the three
//! mechanisms over `f64`.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::scalar::{approx_eq, Scalar};
use crate::voting::Mechanism;

/// Default enumeration cap.
pub const DEFAULT_PATH_CAP: usize = 1_000_000;

/// Every simple start-to-goal path with its cost vector.
#[derive(Debug, Clone)]
pub struct PathSet<S> {
    pub paths: Vec<Vec<VertexId>>,
    pub cost_vectors: Vec<Vec<S>>,
}

impl<S> PathSet<S> {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
}

/// All simple paths from `start` to `goal` in lexicographic vertex order.
/// Fails with [`Error::Capacity`] rather than truncating.
pub fn enumerate_paths<S: Scalar>(g: &Graph<S>, start: VertexId, goal: VertexId, cap: usize) -> Result<PathSet<S>> {
    g.topology().check_vertex(start)?;
    g.topology().check_vertex(goal)?;
    let j_count = g.objective_count();
    let mut out = PathSet {
        paths: Vec::new(),
        cost_vectors: Vec::new(),
    };
    let mut on_path = vec![false; g.vertex_count()];
    let mut path = vec![start];
    let mut costs = vec![vec![S::zero(); j_count]];
    on_path[start.index()] = true;
    dfs(g, goal, cap, &mut on_path, &mut path, &mut costs, &mut out)?;
    Ok(out)
}

fn dfs<S: Scalar>(
    g: &Graph<S>,
    goal: VertexId,
    cap: usize,
    on_path: &mut [bool],
    path: &mut Vec<VertexId>,
    costs: &mut Vec<Vec<S>>,
    out: &mut PathSet<S>,
) -> Result<()> {
    let v = *path.last().expect("non-empty");
    if v == goal {
        if out.paths.len() == cap {
            return Err(Error::Capacity { cap });
        }
        out.paths.push(path.clone());
        out.cost_vectors.push(costs.last().expect("non-empty").clone());
        return Ok(());
    }
    let next: Vec<_> = g.neighbors(v)?.filter(|e| !on_path[e.to.index()]).collect();
    for e in next {
        // Only descend where the goal is still reachable off the current
        // path, so every explored branch ends in a path.
        if !reaches_avoiding(g, e.to, goal, on_path) {
            continue;
        }
        let acc: Vec<S> = costs
            .last()
            .expect("non-empty")
            .iter()
            .zip(e.costs)
            .map(|(&a, &c)| a + c)
            .collect();
        on_path[e.to.index()] = true;
        path.push(e.to);
        costs.push(acc);
        let res = dfs(g, goal, cap, on_path, path, costs, out);
        costs.pop();
        path.pop();
        on_path[e.to.index()] = false;
        res?;
    }
    Ok(())
}

fn reaches_avoiding<S: Scalar>(g: &Graph<S>, from: VertexId, goal: VertexId, blocked: &[bool]) -> bool {
    let mut seen = blocked.to_vec();
    let mut stack = vec![from];
    seen[from.index()] = true;
    while let Some(v) = stack.pop() {
        if v == goal {
            return true;
        }
        for (_, w) in g.topology().out_edges_unchecked(v) {
            if !seen[w.index()] {
                seen[w.index()] = true;
                stack.push(w);
            }
        }
    }
    false
}

/// Minimum cost under objective `j` and the first path attaining it.
pub fn brute_optimal<S: Scalar>(ps: &PathSet<S>, j: usize) -> Result<(S, usize)> {
    let mut best: Option<(S, usize)> = None;
    for (i, c) in ps.cost_vectors.iter().enumerate() {
        let v = *c
            .get(j)
            .ok_or_else(|| Error::usage(format!("objective {j} out of range")))?;
        if best.is_none_or(|(b, _)| v < b) {
            best = Some((v, i));
        }
    }
    best.ok_or(Error::NoPath {
        start: 0,
        goal: 0,
        searched: 0,
    })
}

/// Paths whose objective-`j` cost equals the optimum (within tolerance).
pub fn optimal_witnesses<S: Scalar>(ps: &PathSet<S>, j: usize) -> Result<Vec<usize>> {
    let (best, _) = brute_optimal(ps, j)?;
    Ok((0..ps.len())
        .filter(|&i| approx_eq(ps.cost_vectors[i][j], best))
        .collect())
}

fn weakly_dominates<S: Scalar>(a: &[S], b: &[S]) -> bool {
    let mut strict = false;
    for (&x, &y) in a.iter().zip(b) {
        if approx_eq(x, y) {
            continue;
        }
        if x > y {
            return false;
        }
        strict = true;
    }
    strict
}

/// Indices of the non-dominated paths. Costs equal within the scalar's
/// tolerance count as equal; paths with equal cost vectors are all kept.
pub fn brute_pareto<S: Scalar>(ps: &PathSet<S>) -> Vec<usize> {
    let mut order: Vec<usize> = (0..ps.len()).collect();
    order.sort_by(|&a, &b| {
        ps.cost_vectors[a]
            .partial_cmp(&ps.cost_vectors[b])
            .unwrap_or(Ordering::Equal)
    });
    let mut frontier: Vec<usize> = Vec::new();
    for i in order {
        let c = &ps.cost_vectors[i];
        if !frontier.iter().any(|&f| weakly_dominates(&ps.cost_vectors[f], c)) {
            frontier.push(i);
        }
    }
    let candidates = frontier.clone();
    frontier.retain(|&i| {
        !candidates
            .iter()
            .any(|&k| k != i && weakly_dominates(&ps.cost_vectors[k], &ps.cost_vectors[i]))
    });
    frontier.sort_unstable();
    frontier
}

#[derive(PartialEq)]
struct Ordered<S>(S);

impl<S: PartialOrd> Eq for Ordered<S> {}

impl<S: PartialOrd> PartialOrd for Ordered<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: PartialOrd> Ord for Ordered<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.partial_cmp(&other.0).unwrap_or(Ordering::Equal)
    }
}

/// Shortest distances from `source` under `sum_j weights[j] * cost_j`.
pub fn dijkstra<S: Scalar>(g: &Graph<S>, weights: &[S], source: VertexId) -> Result<Vec<Option<S>>> {
    g.topology().check_vertex(source)?;
    if weights.len() != g.objective_count() {
        return Err(Error::usage("weight vector length differs from objective count"));
    }
    let mut dist: Vec<Option<S>> = vec![None; g.vertex_count()];
    let mut done = vec![false; g.vertex_count()];
    let mut heap = BinaryHeap::new();
    dist[source.index()] = Some(S::zero());
    heap.push(Reverse((Ordered(S::zero()), source.0)));
    while let Some(Reverse((Ordered(d), v))) = heap.pop() {
        if done[v as usize] {
            continue;
        }
        done[v as usize] = true;
        for e in g.neighbors(VertexId(v))? {
            let w = weights.iter().zip(e.costs).fold(S::zero(), |acc, (&w, &c)| acc + w * c);
            let nd = d + w;
            let slot = &mut dist[e.to.index()];
            if slot.is_none_or(|old| nd < old) {
                *slot = Some(nd);
                heap.push(Reverse((Ordered(nd), e.to.0)));
            }
        }
    }
    Ok(dist)
}

/// Independent winner computation: min-max normalization (values within a
/// relative 1e-9 of a column extreme snap to it) followed by the chosen
/// mechanism, ties to the lowest index.
pub fn reference_vote(costs: &[Vec<f64>], mechanism: Mechanism) -> usize {
    let n = costs.len();
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0);
    let mut norm = vec![vec![0.0; n]; n];
    for j in 0..n {
        let lo = costs.iter().map(|r| r[j]).fold(f64::INFINITY, f64::min);
        let hi = costs.iter().map(|r| r[j]).fold(f64::NEG_INFINITY, f64::max);
        if close(lo, hi) {
            continue;
        }
        for i in 0..n {
            let x = costs[i][j];
            norm[i][j] = if close(x, lo) {
                0.0
            } else if close(x, hi) {
                1.0
            } else {
                (x - lo) / (hi - lo)
            };
        }
    }
    let score: Vec<f64> = match mechanism {
        Mechanism::Range => norm.iter().map(|r| -r.iter().sum::<f64>()).collect(),
        Mechanism::Borda => (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        // dense rank: number of distinct smaller values + 1
                        let mut smaller: Vec<f64> = norm
                            .iter()
                            .map(|r| r[j])
                            .filter(|&v| v < norm[i][j] && !close(v, norm[i][j]))
                            .collect();
                        smaller.sort_by(|a, b| a.partial_cmp(b).unwrap());
                        smaller.dedup_by(|a, b| close(*a, *b));
                        (n - smaller.len()) as f64
                    })
                    .sum()
            })
            .collect(),
        Mechanism::Cav => norm
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&v| {
                        if v == 0.0 {
                            1.0
                        } else if v == 1.0 {
                            -1.0
                        } else {
                            0.0
                        }
                    })
                    .sum()
            })
            .collect(),
    };
    let mut best = 0;
    for i in 1..n {
        if score[i] > score[best] && !close(score[i], score[best]) {
            best = i;
        }
    }
    best
}
