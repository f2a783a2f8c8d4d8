//! Reading grid maps and road networks into a base graph.

use std::path::Path;

use vbmo_core::ingest::{
    parse_dimacs_co, parse_dimacs_gr, parse_movingai, GridMap, RoadNetwork, REFERENCE_NY_EDGES, REFERENCE_NY_NODES,
};
use vbmo_core::{Error, Graph, HeuristicMode, Result, VertexId};

use crate::MapArgs;

pub struct Environment {
    /// Topology plus any layers that come with the input (road networks).
    pub base: Graph<f64>,
    grid: Option<GridMap>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))
}

pub fn load_environment(args: &MapArgs, mode: HeuristicMode) -> Result<Environment> {
    let is_road = args.map.extension().is_some_and(|x| x == "gr");
    if !is_road {
        if args.time.is_some() || args.coords.is_some() {
            return Err(Error::Usage(
                "--time and --coords apply only to DIMACS .gr networks".into(),
            ));
        }
        let map = parse_movingai(&read(&args.map)?)?;
        let topo = vbmo_core::ingest::grid_to_graph(&map, args.corner_cutting);
        return Ok(Environment {
            base: Graph::new(topo, vec![])?,
            grid: Some(map),
        });
    }
    let network = RoadNetwork {
        distance: parse_dimacs_gr(&read(&args.map)?)?,
        time: args
            .time
            .as_deref()
            .map(read)
            .transpose()?
            .as_deref()
            .map(parse_dimacs_gr)
            .transpose()?,
        coords: args
            .coords
            .as_deref()
            .map(read)
            .transpose()?
            .as_deref()
            .map(parse_dimacs_co)
            .transpose()?,
    };
    Ok(Environment {
        base: network.build(mode)?,
        grid: None,
    })
}

impl Environment {
    /// Resolves `row,col` on grids or a 1-based node id on road networks.
    pub fn vertex(&self, text: &str, role: &str) -> Result<VertexId> {
        match &self.grid {
            Some(map) => {
                let bad = || Error::Usage(format!("{role} must be row,col, got {text:?}"));
                let (r, c) = text.split_once(',').ok_or_else(bad)?;
                let r: usize = r.trim().parse().map_err(|_| bad())?;
                let c: usize = c.trim().parse().map_err(|_| bad())?;
                if r >= map.height() || c >= map.width() {
                    return Err(Error::Usage(format!(
                        "{role} cell ({r},{c}) is outside the {}x{} map",
                        map.height(),
                        map.width()
                    )));
                }
                let grid = self.base.topology().grid().expect("grid topology");
                grid.vertex_at(r, c)
                    .ok_or_else(|| Error::Usage(format!("{role} cell ({r},{c}) is an obstacle")))
            }
            None => {
                let id: usize = text
                    .trim()
                    .parse()
                    .map_err(|_| Error::Usage(format!("{role} must be a node id, got {text:?}")))?;
                if id == 0 || id > self.base.vertex_count() {
                    return Err(Error::Usage(format!(
                        "{role} node {id} outside 1..={}",
                        self.base.vertex_count()
                    )));
                }
                Ok(VertexId::from(id - 1))
            }
        }
    }

    /// `[row, col]` per vertex on grids.
    pub fn cells(&self, path: &[VertexId]) -> Option<Vec<[u32; 2]>> {
        let grid = self.base.topology().grid()?;
        Some(
            path.iter()
                .map(|v| {
                    let (r, c) = grid.cells[v.index()];
                    [r, c]
                })
                .collect(),
        )
    }

    /// Remark on how a road network's size compares with the published NY
    /// figures.
    pub fn reference_note(&self) -> Option<String> {
        if self.grid.is_some() {
            return None;
        }
        let (n, m) = (self.base.vertex_count(), self.base.edge_count());
        if n == REFERENCE_NY_NODES && m == REFERENCE_NY_EDGES {
            return None;
        }
        Some(format!(
            "{n} nodes and {m} arcs; the published NY figures are {REFERENCE_NY_NODES} nodes and \
             {REFERENCE_NY_EDGES} edges"
        ))
    }
}
