//! Immutable multi-cost graph.
//!
//! A [`Topology`] holds the vertex/edge structure in compressed sparse row
//! form, sorted by source then target. A [`Graph`] pairs a shared topology
//! with `J` objective layers whose costs are stored inline per edge, so the
//! cost vector of an edge is one contiguous slice.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::objectives::{Heuristic, ObjectiveLayer};
use crate::scalar::Scalar;

/// Dense vertex index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VertexId {
    fn from(v: usize) -> Self {
        VertexId(v as u32)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Position of an edge in the CSR arrays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Cell layout of a grid-derived topology.
#[derive(Debug, Clone)]
pub struct GridGeometry {
    pub width: usize,
    pub height: usize,
    /// `(row, col)` of each vertex.
    pub cells: Vec<(u32, u32)>,
    /// Row-major cell index to vertex, `None` for blocked cells.
    pub lookup: Vec<Option<VertexId>>,
}

impl GridGeometry {
    pub fn vertex_at(&self, row: usize, col: usize) -> Option<VertexId> {
        if row >= self.height || col >= self.width {
            return None;
        }
        self.lookup[row * self.width + col]
    }
}

/// Per-vertex coordinates.
#[derive(Debug, Clone)]
pub enum Geometry {
    Grid(GridGeometry),
    /// `(longitude, latitude)` in micro-degrees.
    LonLat(Vec<(i32, i32)>),
}

/// Vertex/edge structure shared by every objective layer.
#[derive(Debug, Clone)]
pub struct Topology {
    offsets: Vec<usize>,
    targets: Vec<VertexId>,
    sources: Vec<VertexId>,
    geometry: Option<Geometry>,
    symmetric: bool,
}

impl Topology {
    /// Builds a topology from directed arcs. Arcs are sorted by `(from, to)`;
    /// self-loops and duplicate arcs are rejected.
    pub fn from_arcs(
        vertex_count: usize,
        arcs: &[(u32, u32)],
        geometry: Option<Geometry>,
        symmetric: bool,
    ) -> Result<Self> {
        let mut sorted: Vec<(u32, u32)> = arcs.to_vec();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Build(format!("duplicate arc {} -> {}", w[0].0, w[0].1)));
            }
        }
        let mut offsets = vec![0usize; vertex_count + 1];
        for &(u, v) in &sorted {
            if u as usize >= vertex_count || v as usize >= vertex_count {
                return Err(Error::Build(format!(
                    "arc {u} -> {v} outside vertex range {vertex_count}"
                )));
            }
            if u == v {
                return Err(Error::Build(format!("self-loop at vertex {u}")));
            }
            offsets[u as usize + 1] += 1;
        }
        for i in 0..vertex_count {
            offsets[i + 1] += offsets[i];
        }
        if let Some(geo) = &geometry {
            let n = match geo {
                Geometry::Grid(g) => g.cells.len(),
                Geometry::LonLat(c) => c.len(),
            };
            if n != vertex_count {
                return Err(Error::Build(format!(
                    "geometry covers {n} vertices, topology has {vertex_count}"
                )));
            }
        }
        Ok(Topology {
            offsets,
            targets: sorted.iter().map(|&(_, v)| VertexId(v)).collect(),
            sources: sorted.iter().map(|&(u, _)| VertexId(u)).collect(),
            geometry,
            symmetric,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of directed edges.
    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn geometry(&self) -> Option<&Geometry> {
        self.geometry.as_ref()
    }

    pub fn grid(&self) -> Option<&GridGeometry> {
        match &self.geometry {
            Some(Geometry::Grid(g)) => Some(g),
            _ => None,
        }
    }

    /// Grid-derived topologies emit every edge in both directions.
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v.index() < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::usage(format!(
                "vertex {v} out of range (graph has {} vertices)",
                self.vertex_count()
            )))
        }
    }

    #[inline]
    pub(crate) fn edge_range(&self, v: VertexId) -> std::ops::Range<usize> {
        self.offsets[v.index()]..self.offsets[v.index() + 1]
    }

    /// Outgoing `(edge, target)` pairs of `v` in ascending target order.
    pub fn out_edges(&self, v: VertexId) -> Result<impl Iterator<Item = (EdgeId, VertexId)> + '_> {
        self.check_vertex(v)?;
        Ok(self.out_edges_unchecked(v))
    }

    #[inline]
    pub(crate) fn out_edges_unchecked(&self, v: VertexId) -> impl Iterator<Item = (EdgeId, VertexId)> + '_ {
        self.edge_range(v).map(move |e| (EdgeId(e as u32), self.targets[e]))
    }

    pub fn degree(&self, v: VertexId) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.edge_range(v).len())
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count())
            .map(|v| self.offsets[v + 1] - self.offsets[v])
            .max()
            .unwrap_or(0)
    }

    pub fn average_degree(&self) -> f64 {
        if self.vertex_count() == 0 {
            0.0
        } else {
            self.edge_count() as f64 / self.vertex_count() as f64
        }
    }

    /// Source and target of an edge.
    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        (self.sources[e.index()], self.targets[e.index()])
    }

    /// The edge `u -> v`, if present.
    pub fn find_edge(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        if u.index() >= self.vertex_count() {
            return None;
        }
        let range = self.edge_range(u);
        let slice = &self.targets[range.clone()];
        slice.binary_search(&v).ok().map(|i| EdgeId((range.start + i) as u32))
    }

    /// Weakly connected component label per vertex, and the number of
    /// components.
    pub fn components(&self) -> (Vec<u32>, usize) {
        let n = self.vertex_count();
        // Undirected view: successors plus predecessors.
        let mut preds: Vec<Vec<u32>> = Vec::new();
        if !self.symmetric {
            preds = vec![Vec::new(); n];
            for e in 0..self.edge_count() {
                preds[self.targets[e].index()].push(self.sources[e].0);
            }
        }
        let mut label = vec![u32::MAX; n];
        let mut count = 0u32;
        let mut stack = Vec::new();
        for root in 0..n {
            if label[root] != u32::MAX {
                continue;
            }
            label[root] = count;
            stack.push(root as u32);
            while let Some(v) = stack.pop() {
                let v = VertexId(v);
                let succ = self.out_edges_unchecked(v).map(|(_, t)| t.0);
                let pred = preds.get(v.index()).into_iter().flatten().copied();
                for u in succ.chain(pred) {
                    if label[u as usize] == u32::MAX {
                        label[u as usize] = count;
                        stack.push(u);
                    }
                }
            }
            count += 1;
        }
        (label, count as usize)
    }

    /// Vertices reachable from `start` along directed edges.
    pub fn reachable_from(&self, start: VertexId) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count()];
        let mut stack = vec![start];
        seen[start.index()] = true;
        while let Some(v) = stack.pop() {
            for (_, t) in self.out_edges_unchecked(v) {
                if !seen[t.index()] {
                    seen[t.index()] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }
}

/// One outgoing edge with its full cost vector.
#[derive(Debug, Clone, Copy)]
pub struct Edge<'a, S> {
    pub id: EdgeId,
    pub from: VertexId,
    pub to: VertexId,
    pub costs: &'a [S],
}

/// Metadata for one registered objective.
#[derive(Debug, Clone)]
pub struct ObjectiveInfo {
    pub name: String,
    pub heuristic: Heuristic,
    /// The heuristic never overestimates (and is consistent) for this layer.
    pub admissible: bool,
}

/// Shared topology plus `J` per-edge cost layers.
#[derive(Debug, Clone)]
pub struct Graph<S> {
    topology: Arc<Topology>,
    objectives: Vec<ObjectiveInfo>,
    /// Edge-major: `costs[e * J + j]`.
    costs: Vec<S>,
}

impl<S: Scalar> Graph<S> {
    /// Assembles a graph from a topology and its objective layers. Every
    /// layer must cover every edge with finite positive costs and names must
    /// be unique.
    pub fn new(topology: impl Into<Arc<Topology>>, layers: Vec<ObjectiveLayer<S>>) -> Result<Self> {
        let topology = topology.into();
        let m = topology.edge_count();
        let j_count = layers.len();
        let mut names = HashSet::new();
        for layer in &layers {
            if !names.insert(layer.name.as_str()) {
                return Err(Error::Build(format!("duplicate objective name {:?}", layer.name)));
            }
            if layer.costs.len() != m {
                return Err(Error::Build(format!(
                    "objective {:?} has {} costs for {m} edges",
                    layer.name,
                    layer.costs.len()
                )));
            }
            if let Some(e) = layer.costs.iter().position(|c| !c.is_finite_positive()) {
                return Err(Error::Build(format!(
                    "objective {:?}: edge {e} has non-positive cost {:?}",
                    layer.name, layer.costs[e]
                )));
            }
        }
        let mut costs = Vec::with_capacity(m * j_count);
        for e in 0..m {
            costs.extend(layers.iter().map(|l| l.costs[e]));
        }
        let objectives = layers
            .into_iter()
            .map(|l| ObjectiveInfo {
                name: l.name,
                heuristic: l.heuristic,
                admissible: l.admissible,
            })
            .collect();
        Ok(Graph {
            topology,
            objectives,
            costs,
        })
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn shared_topology(&self) -> Arc<Topology> {
        Arc::clone(&self.topology)
    }

    pub fn vertex_count(&self) -> usize {
        self.topology.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.topology.edge_count()
    }

    /// `J`, the number of objective layers.
    pub fn objective_count(&self) -> usize {
        self.objectives.len()
    }

    pub fn objectives(&self) -> &[ObjectiveInfo] {
        &self.objectives
    }

    pub fn objective_names(&self) -> impl Iterator<Item = &str> {
        self.objectives.iter().map(|o| o.name.as_str())
    }

    pub fn objective_index(&self, name: &str) -> Option<usize> {
        self.objectives.iter().position(|o| o.name == name)
    }

    pub(crate) fn check_objective(&self, j: usize) -> Result<()> {
        if j < self.objective_count() {
            Ok(())
        } else {
            Err(Error::usage(format!(
                "objective index {j} out of range (graph has {})",
                self.objective_count()
            )))
        }
    }

    #[inline]
    pub fn cost_vector(&self, e: EdgeId) -> &[S] {
        let j = self.objectives.len();
        &self.costs[e.index() * j..(e.index() + 1) * j]
    }

    #[inline]
    pub(crate) fn cost_unchecked(&self, e: EdgeId, j: usize) -> S {
        self.costs[e.index() * self.objectives.len() + j]
    }

    /// Layer `j` cost of every edge, in edge order.
    pub fn layer_costs(&self, j: usize) -> Result<Vec<S>> {
        self.check_objective(j)?;
        Ok((0..self.edge_count())
            .map(|e| self.cost_unchecked(EdgeId(e as u32), j))
            .collect())
    }

    /// Outgoing edges of `v` in ascending target order.
    pub fn neighbors(&self, v: VertexId) -> Result<impl Iterator<Item = Edge<'_, S>> + '_> {
        self.topology.check_vertex(v)?;
        Ok(self.neighbors_unchecked(v))
    }

    #[inline]
    pub(crate) fn neighbors_unchecked(&self, v: VertexId) -> impl Iterator<Item = Edge<'_, S>> + '_ {
        self.topology.out_edges_unchecked(v).map(move |(id, to)| Edge {
            id,
            from: v,
            to,
            costs: self.cost_vector(id),
        })
    }

    pub fn degree(&self, v: VertexId) -> Result<usize> {
        self.topology.degree(v)
    }

    pub fn edge(&self, u: VertexId, v: VertexId) -> Option<Edge<'_, S>> {
        self.topology.find_edge(u, v).map(|id| Edge {
            id,
            from: u,
            to: v,
            costs: self.cost_vector(id),
        })
    }

    /// Cost of `e` under objective `j`.
    pub fn edge_cost(&self, e: &Edge<'_, S>, j: usize) -> Result<S> {
        self.check_objective(j)?;
        Ok(e.costs[j])
    }

    /// Same topology, different layers.
    pub fn with_layers(&self, layers: Vec<ObjectiveLayer<S>>) -> Result<Self> {
        Graph::new(self.shared_topology(), layers)
    }

    /// For every edge `u -> v` there is `v -> u` with an identical cost
    /// vector.
    pub fn is_cost_symmetric(&self) -> bool {
        (0..self.edge_count()).all(|e| {
            let (u, v) = self.topology.endpoints(EdgeId(e as u32));
            match self.topology.find_edge(v, u) {
                Some(back) => self.cost_vector(back) == self.cost_vector(EdgeId(e as u32)),
                None => false,
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{grid_to_graph, CornerCutting, GridMap};
    use crate::objectives::{label_distance, label_uniform};

    fn free_grid(w: usize, h: usize) -> Topology {
        grid_to_graph(&GridMap::open(w, h), CornerCutting::Forbid)
    }

    #[test]
    fn single_cell_has_no_neighbors() {
        let t = free_grid(1, 1);
        assert_eq!(t.out_edges(VertexId(0)).unwrap().count(), 0);
        assert_eq!(t.degree(VertexId(0)).unwrap(), 0);
    }

    #[test]
    fn three_by_three_degrees() {
        let t = free_grid(3, 3);
        assert_eq!(t.degree(VertexId(4)).unwrap(), 8);
        assert_eq!(t.degree(VertexId(0)).unwrap(), 3);
        assert_eq!(t.degree(VertexId(1)).unwrap(), 5);
        assert_eq!(t.max_degree(), 8);
        let targets: Vec<u32> = t.out_edges(VertexId(4)).unwrap().map(|(_, v)| v.0).collect();
        assert_eq!(targets, vec![0, 1, 2, 3, 5, 6, 7, 8]);
    }

    #[test]
    fn out_of_range_vertex_is_usage_error() {
        let t = free_grid(2, 2);
        assert!(matches!(t.degree(VertexId(4)), Err(Error::Usage(_))));
        assert!(t.out_edges(VertexId(9)).is_err());
    }

    #[test]
    fn isolated_vertex_has_degree_zero() {
        let t = Topology::from_arcs(3, &[(0, 1), (1, 0)], None, true).unwrap();
        assert_eq!(t.degree(VertexId(2)).unwrap(), 0);
    }

    #[test]
    fn rejects_self_loops_and_duplicates() {
        assert!(Topology::from_arcs(2, &[(0, 0)], None, false).is_err());
        assert!(Topology::from_arcs(2, &[(0, 1), (0, 1)], None, false).is_err());
        assert!(Topology::from_arcs(2, &[(0, 2)], None, false).is_err());
    }

    #[test]
    fn edge_costs_per_layer() {
        let t = Arc::new(free_grid(3, 3));
        let g: Graph<f64> = Graph::new(
            t.clone(),
            vec![
                label_distance(&t, std::f64::consts::SQRT_2).unwrap(),
                label_uniform(&t, 1.5).unwrap(),
            ],
        )
        .unwrap();
        let horiz = g.edge(VertexId(0), VertexId(1)).unwrap();
        let diag = g.edge(VertexId(0), VertexId(4)).unwrap();
        assert_eq!(g.edge_cost(&horiz, 0).unwrap(), 1.0);
        assert!((g.edge_cost(&diag, 0).unwrap() - std::f64::consts::SQRT_2).abs() < 1e-8);
        assert_eq!(g.edge_cost(&diag, 1).unwrap(), 1.5);
        assert!(g.edge_cost(&diag, 2).is_err());
        assert!(g.is_cost_symmetric());
        assert_eq!(g.edge_count(), t.edge_count());
    }

    #[test]
    fn rejects_duplicate_names_and_bad_costs() {
        let t = Arc::new(free_grid(2, 2));
        let a = label_uniform::<f64>(&t, 1.0).unwrap();
        assert!(Graph::new(t.clone(), vec![a.clone(), a.clone()]).is_err());
        let mut bad = a.clone();
        bad.costs[0] = 0.0;
        assert!(Graph::new(t.clone(), vec![bad]).is_err());
        let mut short = a;
        short.costs.pop();
        assert!(Graph::new(t, vec![short]).is_err());
    }
}
