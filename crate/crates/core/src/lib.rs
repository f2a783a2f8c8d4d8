//! Voting-based multi-objective path planning.
//!
//! One optimal A* plan is computed per objective over a shared graph
//! topology; every plan is then scored under every objective, the scores are
//! min-max normalized per objective, and range, Borda or combined-approval
//! voting picks the plan to return. An equally-weighted-sum A* baseline, a
//! brute-force oracle and a benchmark harness ship alongside.
//!
//! The numeric code is generic over [`Scalar`]; the aliases below fix the
//! common choices.

pub mod bench;
pub mod error;
pub mod graph;
pub mod ingest;
pub mod objectives;
pub mod oracle;
pub mod scalar;
pub mod search;
pub mod voting;

pub use error::{Error, Result};
pub use graph::{Edge, EdgeId, Geometry, Graph, GridGeometry, Topology, VertexId};
pub use objectives::{HeuristicMode, ObjectiveLayer, ObjectiveSpec};
pub use scalar::{Rational, Scalar};
pub use search::{astar, astar_weighted, evaluate_plan, Plan, PlanSource, PlanTies, SearchConfig};
pub use voting::{vbmo, Mechanism, ScoreMatrix, TieBreak, VbmoConfig, VbmoReport, VoteOutcome};

pub type Graph64 = Graph<f64>;
pub type Graph32 = Graph<f32>;
pub type GraphQ = Graph<Rational>;
pub type Plan64 = Plan<f64>;
pub type ScoreMatrix64 = ScoreMatrix<f64>;
pub type ScoreMatrixQ = ScoreMatrix<Rational>;
pub type VbmoReport64 = VbmoReport<f64>;
