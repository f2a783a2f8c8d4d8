//! Map and road-network loaders.

mod dimacs;
mod movingai;

pub use dimacs::{
    build_road_graph, parse_dimacs_co, parse_dimacs_gr, weight_correlation, DimacsArcs, RoadNetwork,
    REFERENCE_NY_EDGES, REFERENCE_NY_NODES,
};
pub use movingai::{grid_to_graph, parse_movingai, CornerCutting, GridMap};
