//! Objective layers: per-edge cost labelers and their A* heuristics.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Geometry, Graph, Topology, VertexId};
use crate::scalar::Scalar;

const EARTH_RADIUS_M: f64 = 6_371_000.0;

/// Lower-bound estimate of the remaining cost to the goal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Heuristic {
    Zero,
    /// Straight-line distance in cell units times `scale`.
    Euclidean {
        scale: f64,
    },
    /// Great-circle metres times `scale`.
    Haversine {
        scale: f64,
    },
}

/// How heuristics are assigned to layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeuristicMode {
    /// Geometric heuristics only where they provably underestimate; zero
    /// elsewhere.
    #[default]
    Admissible,
    /// Euclidean (grids) or Haversine (road networks) on every layer.
    PaperFaithful,
}

impl FromStr for HeuristicMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "admissible" => Ok(HeuristicMode::Admissible),
            "paper-faithful" => Ok(HeuristicMode::PaperFaithful),
            _ => Err(Error::usage(format!(
                "heuristic mode must be admissible|paper-faithful, got {s:?}"
            ))),
        }
    }
}

impl fmt::Display for HeuristicMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HeuristicMode::Admissible => "admissible",
            HeuristicMode::PaperFaithful => "paper-faithful",
        })
    }
}

/// A named per-edge cost assignment plus its heuristic.
#[derive(Debug, Clone)]
pub struct ObjectiveLayer<S> {
    pub name: String,
    pub costs: Vec<S>,
    pub heuristic: Heuristic,
    /// The heuristic is consistent for these costs, so A* may close
    /// vertices on first expansion.
    pub admissible: bool,
}

impl<S> ObjectiveLayer<S> {
    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Replaces the heuristic with the plain geometric one for the
    /// topology's geometry.
    fn with_geometric_heuristic(mut self, topo: &Topology) -> Self {
        let geometric = match topo.geometry() {
            Some(Geometry::Grid(_)) => Heuristic::Euclidean { scale: 1.0 },
            Some(Geometry::LonLat(_)) => Heuristic::Haversine { scale: 1.0 },
            None => Heuristic::Zero,
        };
        if geometric != self.heuristic {
            self.heuristic = geometric;
            self.admissible = geometric == Heuristic::Zero;
        }
        self
    }
}

/// Integer costs drawn uniformly from `low..=high`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSpec {
    pub low: u32,
    pub high: u32,
    pub seed: u64,
}

impl RandomSpec {
    pub fn new(low: u32, high: u32, seed: u64) -> Result<Self> {
        if low == 0 || low > high {
            return Err(Error::usage(format!(
                "random range {low}..={high} must satisfy 1 <= low <= high"
            )));
        }
        Ok(RandomSpec { low, high, seed })
    }
}

/// Orthogonal moves cost 1, diagonal moves `diagonal_cost` (normally √2).
/// The Euclidean heuristic is scaled down when `diagonal_cost < √2` so it
/// stays consistent.
pub fn label_distance<S: Scalar>(topo: &Topology, diagonal_cost: f64) -> Result<ObjectiveLayer<S>> {
    let grid = topo
        .grid()
        .ok_or_else(|| Error::usage("distance labeling needs grid geometry"))?;
    if !(diagonal_cost > 0.0 && diagonal_cost.is_finite()) {
        return Err(Error::usage(format!(
            "diagonal cost must be positive, got {diagonal_cost}"
        )));
    }
    let diag = S::from_f64_lossy(diagonal_cost);
    let costs = (0..topo.edge_count())
        .map(|e| {
            let (u, v) = topo.endpoints(EdgeId(e as u32));
            let (r1, c1) = grid.cells[u.index()];
            let (r2, c2) = grid.cells[v.index()];
            if r1 != r2 && c1 != c2 {
                diag
            } else {
                S::one()
            }
        })
        .collect();
    Ok(ObjectiveLayer {
        name: "distance".into(),
        costs,
        heuristic: Heuristic::Euclidean {
            scale: (diagonal_cost / std::f64::consts::SQRT_2).min(1.0),
        },
        admissible: true,
    })
}

/// Every edge costs `c`.
pub fn label_uniform<S: Scalar>(topo: &Topology, c: S) -> Result<ObjectiveLayer<S>> {
    if !c.is_finite_positive() {
        return Err(Error::usage(format!("uniform cost must be positive, got {c:?}")));
    }
    Ok(ObjectiveLayer {
        name: "uniform".into(),
        costs: vec![c; topo.edge_count()],
        heuristic: Heuristic::Zero,
        admissible: true,
    })
}

/// One uniform integer draw per undirected vertex pair, made in ascending
/// `(min id, max id)` order so the layer depends only on the seed.
pub fn label_random<S: Scalar>(topo: &Topology, spec: RandomSpec) -> ObjectiveLayer<S> {
    let mut keyed: Vec<((u32, u32), u32)> = (0..topo.edge_count())
        .map(|e| {
            let (u, v) = topo.endpoints(EdgeId(e as u32));
            ((u.0.min(v.0), u.0.max(v.0)), e as u32)
        })
        .collect();
    keyed.sort_unstable();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut costs = vec![S::zero(); topo.edge_count()];
    let mut last_key = None;
    let mut value = S::zero();
    for (key, e) in keyed {
        if last_key != Some(key) {
            value = S::from_u32(rng.gen_range(spec.low..=spec.high)).expect("small integer");
            last_key = Some(key);
        }
        costs[e as usize] = value;
    }
    ObjectiveLayer {
        name: "random".into(),
        costs,
        heuristic: Heuristic::Zero,
        admissible: true,
    }
}

/// Edge `(u, v)` costs `maxdeg + 1 - (deg(u) + deg(v)) / 2`, so edges
/// between well-connected vertices are cheap. Always at least 1.
pub fn label_safety<S: Scalar>(topo: &Topology) -> ObjectiveLayer<S> {
    let top = S::from_usize(topo.max_degree() + 1).expect("degree representable");
    let two = S::one() + S::one();
    let degree = |v: VertexId| topo.edge_range(v).len();
    let costs = (0..topo.edge_count())
        .map(|e| {
            let (u, v) = topo.endpoints(EdgeId(e as u32));
            top - S::from_usize(degree(u) + degree(v)).expect("degree representable") / two
        })
        .collect();
    ObjectiveLayer {
        name: "safety".into(),
        costs,
        heuristic: Heuristic::Zero,
        admissible: true,
    }
}

/// Great-circle distance in metres between two `(lon, lat)` micro-degree
/// coordinates.
pub fn haversine_m(a: (i32, i32), b: (i32, i32)) -> f64 {
    let to_rad = |micro: i32| (micro as f64 * 1e-6).to_radians();
    let (lon1, lat1) = (to_rad(a.0), to_rad(a.1));
    let (lon2, lat2) = (to_rad(b.0), to_rad(b.1));
    let s_lat = ((lat2 - lat1) / 2.0).sin();
    let s_lon = ((lon2 - lon1) / 2.0).sin();
    let h = s_lat * s_lat + lat1.cos() * lat2.cos() * s_lon * s_lon;
    2.0 * EARTH_RADIUS_M * h.sqrt().min(1.0).asin()
}

/// Heuristic estimate from `v` to `goal`.
pub fn heuristic_value(h: Heuristic, topo: &Topology, v: VertexId, goal: VertexId) -> Result<f64> {
    topo.check_vertex(v)?;
    topo.check_vertex(goal)?;
    match (h, topo.geometry()) {
        (Heuristic::Zero, _) => Ok(0.0),
        (Heuristic::Euclidean { scale }, Some(Geometry::Grid(g))) => {
            let (r1, c1) = g.cells[v.index()];
            let (r2, c2) = g.cells[goal.index()];
            let dr = r1 as f64 - r2 as f64;
            let dc = c1 as f64 - c2 as f64;
            Ok(scale * (dr * dr + dc * dc).sqrt())
        }
        (Heuristic::Haversine { scale }, Some(Geometry::LonLat(c))) => {
            Ok(scale * haversine_m(c[v.index()], c[goal.index()]))
        }
        (h, _) => Err(Error::usage(format!("heuristic {h:?} needs matching geometry"))),
    }
}

/// Largest `s` such that `s * haversine(u, v) <= cost(u, v)` on every edge
/// with non-zero length. By the triangle inequality `s * haversine(v, goal)`
/// then never overestimates. Returns 0 when no edge has length.
pub fn calibrate_haversine_scale<S: Scalar>(topo: &Topology, costs: &[S]) -> Result<f64> {
    let coords = match topo.geometry() {
        Some(Geometry::LonLat(c)) => c,
        _ => return Err(Error::usage("haversine calibration needs lon/lat geometry")),
    };
    let mut scale = f64::INFINITY;
    for (e, cost) in costs.iter().enumerate().take(topo.edge_count()) {
        let (u, v) = topo.endpoints(EdgeId(e as u32));
        let len = haversine_m(coords[u.index()], coords[v.index()]);
        if len > 0.0 {
            scale = scale.min(cost.to_f64_lossy() / len);
        }
    }
    Ok(if scale.is_finite() { scale } else { 0.0 })
}

/// One term of the objective mini-language.
#[derive(Debug, Clone, PartialEq)]
pub enum ObjectiveSpec {
    Distance,
    Time,
    Uniform(f64),
    /// Seed `None` lets the caller derive one.
    Random {
        low: u32,
        high: u32,
        seed: Option<u64>,
    },
    Safety,
}

impl ObjectiveSpec {
    pub fn base_name(&self) -> &'static str {
        match self {
            ObjectiveSpec::Distance => "distance",
            ObjectiveSpec::Time => "time",
            ObjectiveSpec::Uniform(_) => "uniform",
            ObjectiveSpec::Random { .. } => "random",
            ObjectiveSpec::Safety => "safety",
        }
    }
}

impl FromStr for ObjectiveSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let bad = || Error::usage(format!("bad objective term {s:?}"));
        let num = |p: &str| p.parse::<u64>().map_err(|_| bad());
        match parts.as_slice() {
            ["distance"] => Ok(ObjectiveSpec::Distance),
            ["time"] => Ok(ObjectiveSpec::Time),
            ["safety"] => Ok(ObjectiveSpec::Safety),
            ["uniform", c] => {
                let c: f64 = c.parse().map_err(|_| bad())?;
                if c > 0.0 && c.is_finite() {
                    Ok(ObjectiveSpec::Uniform(c))
                } else {
                    Err(Error::usage(format!("uniform cost must be positive in {s:?}")))
                }
            }
            ["random", lo, hi] | ["random", lo, hi, _] => {
                let low = u32::try_from(num(lo)?).map_err(|_| bad())?;
                let high = u32::try_from(num(hi)?).map_err(|_| bad())?;
                RandomSpec::new(low, high, 0)?;
                let seed = match parts.get(3) {
                    Some(p) => Some(num(p)?),
                    None => None,
                };
                Ok(ObjectiveSpec::Random { low, high, seed })
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for ObjectiveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectiveSpec::Uniform(c) => write!(f, "uniform:{c}"),
            ObjectiveSpec::Random {
                low,
                high,
                seed: Some(s),
            } => write!(f, "random:{low}:{high}:{s}"),
            ObjectiveSpec::Random { low, high, seed: None } => write!(f, "random:{low}:{high}"),
            other => f.write_str(other.base_name()),
        }
    }
}

/// Parses a comma-separated objective list such as
/// `distance,uniform:1,random:1:20:7`.
pub fn parse_objectives(list: &str) -> Result<Vec<ObjectiveSpec>> {
    let specs = list
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(str::parse)
        .collect::<Result<Vec<_>>>()?;
    if specs.is_empty() {
        return Err(Error::usage("empty objective list"));
    }
    Ok(specs)
}

/// Settings applied when turning objective specs into layers.
#[derive(Debug, Clone, Copy)]
pub struct LayerOptions {
    pub mode: HeuristicMode,
    pub diagonal_cost: f64,
    /// Seed for `random` terms that do not carry one.
    pub random_seed: u64,
}

impl Default for LayerOptions {
    fn default() -> Self {
        LayerOptions {
            mode: HeuristicMode::Admissible,
            diagonal_cost: std::f64::consts::SQRT_2,
            random_seed: 0,
        }
    }
}

/// Labels `base`'s topology with one layer per spec. `distance` and `time`
/// on a road network reuse the layers already present in `base`; on a grid,
/// `distance` is computed from cell geometry. Repeated names get a `#k`
/// suffix.
pub fn assemble_graph<S: Scalar>(base: &Graph<S>, specs: &[ObjectiveSpec], opts: &LayerOptions) -> Result<Graph<S>> {
    let topo = base.topology();
    let mut layers: Vec<ObjectiveLayer<S>> = Vec::with_capacity(specs.len());
    for (k, spec) in specs.iter().enumerate() {
        let layer = match spec {
            ObjectiveSpec::Distance | ObjectiveSpec::Time if base.objective_index(spec.base_name()).is_some() => {
                let j = base.objective_index(spec.base_name()).expect("checked");
                let info = &base.objectives()[j];
                ObjectiveLayer {
                    name: spec.base_name().into(),
                    costs: base.layer_costs(j)?,
                    heuristic: info.heuristic,
                    admissible: info.admissible,
                }
            }
            ObjectiveSpec::Distance => label_distance(topo, opts.diagonal_cost)?,
            ObjectiveSpec::Time => {
                return Err(Error::usage("the time objective needs a road network with a time file"))
            }
            ObjectiveSpec::Uniform(c) => label_uniform(topo, S::from_f64_lossy(*c))?,
            ObjectiveSpec::Random { low, high, seed } => {
                let seed = seed.unwrap_or_else(|| opts.random_seed.wrapping_add(k as u64));
                label_random(topo, RandomSpec::new(*low, *high, seed)?)
            }
            ObjectiveSpec::Safety => label_safety(topo),
        };
        let layer = match opts.mode {
            HeuristicMode::Admissible => layer,
            // Road layers taken from `base` already carry the mode's heuristic.
            HeuristicMode::PaperFaithful if matches!(topo.geometry(), Some(Geometry::Grid(_))) => {
                layer.with_geometric_heuristic(topo)
            }
            HeuristicMode::PaperFaithful => match layer.heuristic {
                Heuristic::Haversine { .. } => layer,
                _ => layer.with_geometric_heuristic(topo),
            },
        };
        let mut name = layer.name.clone();
        let mut suffix = 2;
        while layers.iter().any(|l| l.name == name) {
            name = format!("{}#{suffix}", layer.name);
            suffix += 1;
        }
        layers.push(layer.renamed(name));
    }
    base.with_layers(layers)
}
