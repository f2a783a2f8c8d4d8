//! Score matrices, the three voting mechanisms, dominance tools and the
//! end-to-end voting planner.

mod dominance;
mod matrix;
mod mechanisms;
mod planner;

pub use dominance::{dominates, dominates_approx, pareto_filter, pareto_filter_approx};
pub use matrix::{build_score_matrix, ScoreMatrix};
pub use mechanisms::{
    borda_points, cav_values, vote, vote_borda, vote_cav, vote_range, Mechanism, TieBreak, VoteOutcome,
};
pub use planner::{plan_all, select, vbmo, PlanReport, VbmoConfig, VbmoReport};
