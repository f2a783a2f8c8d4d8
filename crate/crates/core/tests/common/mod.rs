//! Shared instance generators for the integration suites.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vbmo_core::ingest::{grid_to_graph, CornerCutting, GridMap};
use vbmo_core::objectives::{assemble_graph, LayerOptions, ObjectiveSpec};
use vbmo_core::{Graph, Scalar, VertexId};

/// Rows of the six-plan, six-objective worked voting example.
pub const WORKED_EXAMPLE: [[&str; 6]; 6] = [
    ["0", "1/10", "1/2", "3/5", "0", "7/10"],
    ["1/10", "0", "1/5", "1/5", "1", "3/10"],
    ["1/5", "7/10", "0", "1/10", "7/10", "1/5"],
    ["1", "4/5", "1", "0", "3/10", "1"],
    ["1/2", "1", "1/5", "1", "0", "3/5"],
    ["1/2", "1", "1/5", "1/10", "1", "0"],
];

pub const WORKED_BORDA: [[u32; 6]; 6] = [
    [6, 5, 4, 3, 6, 2],
    [5, 6, 5, 4, 3, 4],
    [4, 4, 6, 5, 4, 5],
    [2, 3, 3, 6, 5, 1],
    [3, 2, 5, 2, 6, 3],
    [3, 2, 5, 5, 3, 6],
];

pub const WORKED_CAV: [[i32; 6]; 6] = [
    [1, 0, 0, 0, 1, 0],
    [0, 1, 0, 0, -1, 0],
    [0, 0, 1, 0, 0, 0],
    [-1, 0, -1, 1, 0, -1],
    [0, -1, 0, -1, 1, 0],
    [0, -1, 0, 0, -1, 1],
];

/// One planning query on a random grid.
pub struct Instance<S> {
    pub graph: Graph<S>,
    pub start: VertexId,
    pub goal: VertexId,
    pub map: GridMap,
    pub specs: Vec<ObjectiveSpec>,
}

pub fn random_map(rng: &mut ChaCha8Rng, max_w: usize, max_h: usize, density: f64) -> GridMap {
    let w = rng.gen_range(2..=max_w);
    let h = rng.gen_range(2..=max_h);
    let mut map = GridMap::open(w, h);
    for r in 0..h {
        for c in 0..w {
            if rng.gen_bool(density) {
                map.set_blocked(r, c);
            }
        }
    }
    map
}

pub fn random_spec(rng: &mut ChaCha8Rng) -> ObjectiveSpec {
    match rng.gen_range(0..4) {
        0 => ObjectiveSpec::Distance,
        1 => ObjectiveSpec::Uniform([1.0, 1.5, 2.0, 10.0][rng.gen_range(0..4)]),
        2 => {
            let low = rng.gen_range(1..=3);
            let high = low + rng.gen_range(0..20);
            ObjectiveSpec::Random {
                low,
                high,
                seed: Some(rng.gen()),
            }
        }
        _ => ObjectiveSpec::Safety,
    }
}

/// Random grid, objectives and connected start/goal pair. Retries until the
/// sampled cells are connected.
pub fn random_instance<S: Scalar>(
    rng: &mut ChaCha8Rng,
    max_side: usize,
    objectives: std::ops::RangeInclusive<usize>,
) -> Instance<S> {
    let specs: Vec<ObjectiveSpec> = (0..rng.gen_range(objectives)).map(|_| random_spec(rng)).collect();
    instance_with(rng, max_side, specs)
}

pub fn instance_with<S: Scalar>(rng: &mut ChaCha8Rng, max_side: usize, specs: Vec<ObjectiveSpec>) -> Instance<S> {
    loop {
        let density = rng.gen_range(0.0..0.3);
        let map = random_map(rng, max_side, max_side, density);
        let topo = grid_to_graph(&map, CornerCutting::Forbid);
        let n = topo.vertex_count();
        if n < 2 {
            continue;
        }
        let (labels, _) = topo.components();
        let s = rng.gen_range(0..n);
        let t = rng.gen_range(0..n);
        if s == t || labels[s] != labels[t] {
            continue;
        }
        let base = Graph::new(topo, vec![]).unwrap();
        let graph = assemble_graph(&base, &specs, &LayerOptions::default()).unwrap();
        return Instance {
            graph,
            start: VertexId(s as u32),
            goal: VertexId(t as u32),
            map,
            specs,
        };
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
