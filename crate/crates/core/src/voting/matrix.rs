use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::Scalar;
use crate::search::{evaluate_plan_objective, Plan};

/// Plan-by-objective costs: row `i` is plan `i`, column `j` objective `j`.
///
/// Raw values that agree within the scalar's merge tolerance are merged to
/// the smallest of them before normalization, so summation-order noise never
/// separates plans of equal cost. Each column is then min-max normalized to
/// `[0, 1]`; a column whose plans all agree normalizes to zeros. Column
/// extremes are therefore exactly 0 and 1.
#[derive(Debug, Clone)]
pub struct ScoreMatrix<S> {
    raw: Vec<Vec<S>>,
    normalized: Vec<Vec<S>>,
    evaluations: usize,
}

impl<S: Scalar> ScoreMatrix<S> {
    /// Normalizes a square raw cost matrix.
    pub fn from_raw(raw: Vec<Vec<S>>) -> Result<Self> {
        check_square(&raw)?;
        let mut raw = raw;
        let n = raw.len();
        for j in 0..n {
            merge_column(&mut raw, j);
        }
        let mut normalized = vec![vec![S::zero(); n]; n];
        for j in 0..n {
            let (lo, hi) = column_extremes(&raw, j);
            if hi > lo {
                for i in 0..n {
                    normalized[i][j] = (raw[i][j] - lo) / (hi - lo);
                }
            }
        }
        Ok(ScoreMatrix {
            raw,
            normalized,
            evaluations: 0,
        })
    }

    /// Wraps an already-normalized matrix (entries in `[0, 1]`). The raw
    /// matrix is taken to be the normalized one.
    pub fn from_normalized(normalized: Vec<Vec<S>>) -> Result<Self> {
        check_square(&normalized)?;
        if let Some(v) = normalized.iter().flatten().find(|v| **v < S::zero() || **v > S::one()) {
            return Err(Error::usage(format!("normalized score {v:?} outside [0, 1]")));
        }
        Ok(ScoreMatrix {
            raw: normalized.clone(),
            normalized,
            evaluations: 0,
        })
    }

    /// Number of plans (equal to the number of objectives).
    pub fn size(&self) -> usize {
        self.raw.len()
    }

    pub fn raw(&self) -> &[Vec<S>] {
        &self.raw
    }

    pub fn normalized(&self) -> &[Vec<S>] {
        &self.normalized
    }

    /// Plan-cost evaluations performed while building the matrix.
    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    /// `(min, max)` of each raw column.
    pub fn extremes(&self) -> Vec<(S, S)> {
        (0..self.size()).map(|j| column_extremes(&self.raw, j)).collect()
    }

    /// Normalizes an outside cost vector against this matrix's column
    /// extremes. Results may fall outside `[0, 1]`; degenerate columns
    /// contribute 0.
    pub fn normalize_external(&self, costs: &[S]) -> Result<Vec<S>> {
        if costs.len() != self.size() {
            return Err(Error::usage(format!(
                "cost vector of length {} for a {}-objective matrix",
                costs.len(),
                self.size()
            )));
        }
        Ok(self
            .extremes()
            .into_iter()
            .zip(costs)
            .map(|((lo, hi), &c)| {
                if hi > lo {
                    let c = if crate::scalar::approx_eq(c, lo) {
                        lo
                    } else if crate::scalar::approx_eq(c, hi) {
                        hi
                    } else {
                        c
                    };
                    (c - lo) / (hi - lo)
                } else {
                    S::zero()
                }
            })
            .collect())
    }
}

fn check_square<S>(m: &[Vec<S>]) -> Result<()> {
    let n = m.len();
    if n == 0 {
        return Err(Error::usage("score matrix needs at least one plan"));
    }
    if let Some(row) = m.iter().find(|r| r.len() != n) {
        return Err(Error::usage(format!(
            "score matrix must be square: {n} plans, row of length {}",
            row.len()
        )));
    }
    Ok(())
}

fn column_extremes<S: Scalar>(m: &[Vec<S>], j: usize) -> (S, S) {
    let mut lo = m[0][j];
    let mut hi = m[0][j];
    for row in &m[1..] {
        if row[j] < lo {
            lo = row[j];
        }
        if row[j] > hi {
            hi = row[j];
        }
    }
    (lo, hi)
}

fn merge_column<S: Scalar>(m: &mut [Vec<S>], j: usize) {
    let mut order: Vec<usize> = (0..m.len()).collect();
    order.sort_by(|&a, &b| m[a][j].partial_cmp(&m[b][j]).unwrap_or(std::cmp::Ordering::Equal));
    let mut anchor = m[order[0]][j];
    for &i in &order[1..] {
        if crate::scalar::approx_eq(m[i][j], anchor) {
            m[i][j] = anchor;
        } else {
            anchor = m[i][j];
        }
    }
}

/// Evaluates every plan under every objective of `g` (exactly `J^2` plan
/// evaluations) and normalizes the result.
pub fn build_score_matrix<S: Scalar>(plans: &[Plan<S>], g: &Graph<S>) -> Result<ScoreMatrix<S>> {
    let j_count = g.objective_count();
    if plans.len() != j_count {
        return Err(Error::usage(format!("{} plans for {j_count} objectives", plans.len())));
    }
    let mut evaluations = 0;
    let mut raw = vec![vec![S::zero(); j_count]; j_count];
    for j in 0..j_count {
        for (i, plan) in plans.iter().enumerate() {
            raw[i][j] = evaluate_plan_objective(g, &plan.vertices, j)?;
            evaluations += 1;
        }
    }
    let mut m = ScoreMatrix::from_raw(raw)?;
    m.evaluations = evaluations;
    Ok(m)
}
