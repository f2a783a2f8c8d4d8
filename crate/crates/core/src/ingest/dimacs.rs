use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{Geometry, Graph, Topology};
use crate::objectives::{calibrate_haversine_scale, Heuristic, HeuristicMode, ObjectiveLayer};
use crate::scalar::Scalar;

/// Node count listed for the NY instance in the benchmark's environment
/// table. Loaders compare against it and only warn on mismatch.
pub const REFERENCE_NY_NODES: usize = 365_050;
/// Edge count listed alongside [`REFERENCE_NY_NODES`].
pub const REFERENCE_NY_EDGES: usize = 264_346;

/// Arcs of one DIMACS `.gr` file with 0-based endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimacsArcs {
    pub node_count: usize,
    pub arcs: Vec<(u32, u32, u64)>,
    /// Zero-weight arcs raised to 1.
    pub clamped: usize,
}

pub fn parse_dimacs_gr(text: &str) -> Result<DimacsArcs> {
    let mut problem: Option<(usize, usize)> = None;
    let mut arcs = Vec::new();
    let mut clamped = 0;
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let mut parts = line.split_whitespace();
        match parts.next() {
            None | Some("c") => continue,
            Some("p") => {
                if problem.is_some() {
                    return Err(Error::parse(lineno, "second problem line"));
                }
                let kind = parts.next();
                let n = parse_field::<usize>(parts.next(), lineno, "node count")?;
                let m = parse_field::<usize>(parts.next(), lineno, "arc count")?;
                if kind != Some("sp") {
                    return Err(Error::parse(lineno, "expected 'p sp <nodes> <arcs>'"));
                }
                problem = Some((n, m));
                arcs.reserve(m);
            }
            Some("a") => {
                let (n, _) = problem.ok_or_else(|| Error::parse(lineno, "arc before problem line"))?;
                let u = parse_field::<usize>(parts.next(), lineno, "arc tail")?;
                let v = parse_field::<usize>(parts.next(), lineno, "arc head")?;
                let mut w = parse_field::<u64>(parts.next(), lineno, "arc weight")?;
                for id in [u, v] {
                    if id == 0 || id > n {
                        return Err(Error::parse(lineno, format!("node id {id} outside 1..={n}")));
                    }
                }
                if w == 0 {
                    w = 1;
                    clamped += 1;
                }
                arcs.push(((u - 1) as u32, (v - 1) as u32, w));
            }
            Some(other) => {
                return Err(Error::parse(lineno, format!("unknown line type {other:?}")));
            }
        }
    }
    let (node_count, m) = problem.ok_or_else(|| Error::parse(0, "missing problem line"))?;
    if arcs.len() != m {
        return Err(Error::parse(
            0,
            format!("problem line declares {m} arcs, found {}", arcs.len()),
        ));
    }
    if clamped > 0 {
        log::warn!("{clamped} zero-weight arcs clamped to 1");
    }
    Ok(DimacsArcs {
        node_count,
        arcs,
        clamped,
    })
}

/// Parses a `.co` file into `(longitude, latitude)` micro-degrees indexed by
/// 0-based node id. Every node declared by the problem line (or, without
/// one, up to the largest id seen) must appear exactly once.
pub fn parse_dimacs_co(text: &str) -> Result<Vec<(i32, i32)>> {
    let mut declared: Option<usize> = None;
    let mut coords: BTreeMap<usize, (i32, i32)> = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let mut parts = line.split_whitespace();
        match parts.next() {
            None | Some("c") => continue,
            Some("p") => {
                // "p aux sp co <n>"
                let n = parts.last();
                declared = Some(parse_field(n, lineno, "coordinate count")?);
            }
            Some("v") => {
                let id = parse_field::<usize>(parts.next(), lineno, "node id")?;
                let lon = parse_field::<i32>(parts.next(), lineno, "longitude")?;
                let lat = parse_field::<i32>(parts.next(), lineno, "latitude")?;
                if id == 0 {
                    return Err(Error::parse(lineno, "node ids start at 1"));
                }
                if coords.insert(id - 1, (lon, lat)).is_some() {
                    return Err(Error::parse(lineno, format!("duplicate node id {id}")));
                }
            }
            Some(other) => {
                return Err(Error::parse(lineno, format!("unknown line type {other:?}")));
            }
        }
    }
    let n = declared.unwrap_or_else(|| coords.keys().next_back().map_or(0, |&k| k + 1));
    if n == 0 && declared.is_some() {
        return Ok(Vec::new());
    }
    if coords.len() != n || coords.keys().next_back().is_some_and(|&k| k >= n) {
        let missing = (0..n).find(|k| !coords.contains_key(k));
        return Err(Error::parse(
            0,
            match missing {
                Some(k) => format!("missing coordinates for node {}", k + 1),
                None => format!("coordinates listed for {} nodes, expected {n}", coords.len()),
            },
        ));
    }
    Ok(coords.into_values().collect())
}

/// The files making up one road network.
#[derive(Debug, Clone)]
pub struct RoadNetwork {
    pub distance: DimacsArcs,
    pub time: Option<DimacsArcs>,
    pub coords: Option<Vec<(i32, i32)>>,
}

impl RoadNetwork {
    pub fn build<S: Scalar>(&self, mode: HeuristicMode) -> Result<Graph<S>> {
        build_road_graph(&self.distance, self.time.as_ref(), self.coords.as_deref(), mode)
    }
}

/// Collapses parallel arcs to the minimum weight per `(from, to)` key.
fn merge_parallel(arcs: &DimacsArcs) -> BTreeMap<(u32, u32), u64> {
    let mut merged = BTreeMap::new();
    for &(u, v, w) in &arcs.arcs {
        merged
            .entry((u, v))
            .and_modify(|old: &mut u64| *old = (*old).min(w))
            .or_insert(w);
    }
    merged
}

/// Directed road graph with a `distance` layer and, when supplied, a `time`
/// layer. Self-loop arcs are dropped; parallel arcs keep the cheapest weight
/// per layer.
pub fn build_road_graph<S: Scalar>(
    distance: &DimacsArcs,
    time: Option<&DimacsArcs>,
    coords: Option<&[(i32, i32)]>,
    mode: HeuristicMode,
) -> Result<Graph<S>> {
    let n = distance.node_count;
    let mut dist = merge_parallel(distance);
    dist.retain(|&(u, v), _| u != v);
    let time = match time {
        None => None,
        Some(t) => {
            if t.node_count != n {
                return Err(Error::Build(format!(
                    "distance file has {n} nodes, time file has {}",
                    t.node_count
                )));
            }
            let mut t = merge_parallel(t);
            t.retain(|&(u, v), _| u != v);
            if let Some(&(u, v)) = t
                .keys()
                .find(|k| !dist.contains_key(k))
                .or_else(|| dist.keys().find(|k| !t.contains_key(k)))
            {
                return Err(Error::Build(format!(
                    "arc {} -> {} is not present in both weight files",
                    u + 1,
                    v + 1
                )));
            }
            Some(t)
        }
    };
    if let Some(c) = coords {
        if c.len() != n {
            return Err(Error::Build(format!("{} coordinates for {n} nodes", c.len())));
        }
    }
    let keys: Vec<(u32, u32)> = dist.keys().copied().collect();
    let geometry = coords.map(|c| Geometry::LonLat(c.to_vec()));
    let topology = Arc::new(Topology::from_arcs(n, &keys, geometry, false)?);

    let to_s = |w: u64| S::from_u64(w).expect("integer weight representable");
    let dist_costs: Vec<S> = dist.values().map(|&w| to_s(w)).collect();
    let has_coords = coords.is_some();
    let distance_heuristic = match (mode, has_coords) {
        (_, false) => (Heuristic::Zero, true),
        (HeuristicMode::Admissible, true) => (
            Heuristic::Haversine {
                scale: calibrate_haversine_scale(&topology, &dist_costs)?,
            },
            true,
        ),
        (HeuristicMode::PaperFaithful, true) => (Heuristic::Haversine { scale: 1.0 }, false),
    };
    let mut layers = vec![ObjectiveLayer {
        name: "distance".into(),
        costs: dist_costs,
        heuristic: distance_heuristic.0,
        admissible: distance_heuristic.1,
    }];
    if let Some(t) = time {
        let (heuristic, admissible) = match (mode, has_coords) {
            (HeuristicMode::PaperFaithful, true) => (Heuristic::Haversine { scale: 1.0 }, false),
            _ => (Heuristic::Zero, true),
        };
        layers.push(ObjectiveLayer {
            name: "time".into(),
            costs: t.values().map(|&w| to_s(w)).collect(),
            heuristic,
            admissible,
        });
    }
    Graph::new(topology, layers)
}

/// Pearson correlation between two layers' edge costs.
pub fn weight_correlation<S: Scalar>(g: &Graph<S>, a: usize, b: usize) -> Result<f64> {
    let xs: Vec<f64> = g.layer_costs(a)?.into_iter().map(S::to_f64_lossy).collect();
    let ys: Vec<f64> = g.layer_costs(b)?.into_iter().map(S::to_f64_lossy).collect();
    let n = xs.len() as f64;
    if xs.is_empty() {
        return Err(Error::usage("correlation of an empty edge set"));
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    Ok(sxy / (sxx * syy).sqrt())
}

fn parse_field<T: std::str::FromStr>(field: Option<&str>, lineno: usize, what: &str) -> Result<T> {
    let f = field.ok_or_else(|| Error::parse(lineno, format!("missing {what}")))?;
    f.parse().map_err(|_| Error::parse(lineno, format!("bad {what} {f:?}")))
}
