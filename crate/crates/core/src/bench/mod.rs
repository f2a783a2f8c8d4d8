//! Experiment harness: pair sampling, paired runs of VBMO and the weighted
//! baseline, significance tests and summary tables.

pub mod corpus;
pub mod experiment;
pub mod sampling;
pub mod summary;
pub mod wilcoxon;

pub use corpus::{cave_map, load_maps, rooms_map, spread, synthetic_corpus};
pub use experiment::{
    run_experiment, ExperimentConfig, ExperimentOutput, ExperimentRecord, MapInstance, Planner, CSV_HEADER,
};
pub use sampling::sample_pairs;
pub use summary::{describe_objectives, render_comparison, summarize, ComparisonRow, Summary};
pub use wilcoxon::{wilcoxon_signed_rank, WilcoxonResult};

use crate::error::Result;
use crate::scalar::Scalar;
use crate::voting::ScoreMatrix;

/// Range total of a cost vector normalized against `m`'s column extremes.
/// Plans outside the extremes score outside `[0, J-1]`; nothing is clamped.
pub fn score_plan<S: Scalar>(m: &ScoreMatrix<S>, costs: &[S]) -> Result<S> {
    Ok(m.normalize_external(costs)?.into_iter().fold(S::zero(), |a, b| a + b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn score_of_matrix_rows_matches_range_total() {
        let m = ScoreMatrix::from_raw(vec![vec![1.0, 9.0], vec![5.0, 3.0]]).unwrap();
        assert_eq!(score_plan(&m, &[1.0, 9.0]).unwrap(), 1.0);
        assert_eq!(score_plan(&m, &[3.0, 6.0]).unwrap(), 1.0);
        // Worse than both plans on both objectives: exceeds J - 1.
        assert_eq!(score_plan(&m, &[9.0, 12.0]).unwrap(), 2.0 + 1.5);
        assert!(score_plan(&m, &[1.0]).is_err());
    }
}
