use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ScoreMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mechanism {
    /// Lowest sum of normalized scores.
    Range,
    /// Highest sum of `(J + 1) - rank` points, dense ranks per objective.
    Borda,
    /// Combined approval: +1 at score 0, -1 at score 1, 0 otherwise;
    /// highest sum wins.
    Cav,
}

impl Mechanism {
    pub const ALL: [Mechanism; 3] = [Mechanism::Range, Mechanism::Borda, Mechanism::Cav];

    pub fn name(self) -> &'static str {
        match self {
            Mechanism::Range => "range",
            Mechanism::Borda => "borda",
            Mechanism::Cav => "cav",
        }
    }
}

impl fmt::Display for Mechanism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mechanism {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "range" => Ok(Mechanism::Range),
            "borda" => Ok(Mechanism::Borda),
            "cav" => Ok(Mechanism::Cav),
            _ => Err(Error::usage(format!("mechanism must be range|borda|cav, got {s:?}"))),
        }
    }
}

/// How the winner is picked among plans sharing the best total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    LowestIndex,
    /// Uniform choice from the tie set with a seeded generator.
    Random(u64),
}

impl FromStr for TieBreak {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "lowest" {
            return Ok(TieBreak::LowestIndex);
        }
        match s.split_once(':') {
            Some(("random", seed)) => seed
                .parse()
                .map(TieBreak::Random)
                .map_err(|_| Error::usage(format!("bad tie-break seed {seed:?}"))),
            _ => Err(Error::usage(format!(
                "tie-break must be lowest|random:<seed>, got {s:?}"
            ))),
        }
    }
}

/// Result of one vote.
#[derive(Debug, Clone)]
pub struct VoteOutcome<S> {
    pub mechanism: Mechanism,
    pub winner: usize,
    /// Per-plan score sum, point total or approval total.
    pub totals: Vec<S>,
    /// Plans sharing the winning total, ascending.
    pub tie_set: Vec<usize>,
    /// Per-plan, per-objective contribution (normalized score, points or
    /// approval value).
    pub grid: Vec<Vec<S>>,
}

fn tally<S: Scalar>(
    mechanism: Mechanism,
    grid: Vec<Vec<S>>,
    lower_is_better: bool,
    tie_break: TieBreak,
) -> VoteOutcome<S> {
    let totals: Vec<S> = grid
        .iter()
        .map(|row| row.iter().fold(S::zero(), |acc, &v| acc + v))
        .collect();
    let mut best = totals[0];
    for &t in &totals[1..] {
        if (lower_is_better && t < best) || (!lower_is_better && t > best) {
            best = t;
        }
    }
    let tie_set: Vec<usize> = (0..totals.len()).filter(|&i| totals[i] == best).collect();
    let winner = match tie_break {
        TieBreak::LowestIndex => tie_set[0],
        TieBreak::Random(seed) => tie_set[ChaCha8Rng::seed_from_u64(seed).gen_range(0..tie_set.len())],
    };
    VoteOutcome {
        mechanism,
        winner,
        totals,
        tie_set,
        grid,
    }
}

/// Dense Borda points per plan and objective.
pub fn borda_points<S: Scalar>(m: &ScoreMatrix<S>) -> Vec<Vec<u32>> {
    let n = m.size();
    let norm = m.normalized();
    let mut points = vec![vec![0u32; n]; n];
    for j in 0..n {
        let mut distinct: Vec<S> = norm.iter().map(|row| row[j]).collect();
        distinct.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        distinct.dedup_by(|a, b| a == b);
        for i in 0..n {
            let rank = distinct.iter().position(|&v| v == norm[i][j]).expect("value present") + 1;
            points[i][j] = (n + 1 - rank) as u32;
        }
    }
    points
}

/// Combined-approval values per plan and objective.
pub fn cav_values<S: Scalar>(m: &ScoreMatrix<S>) -> Vec<Vec<i32>> {
    m.normalized()
        .iter()
        .map(|row| {
            row.iter()
                .map(|&v| {
                    if v == S::one() {
                        -1
                    } else if v == S::zero() {
                        1
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect()
}

pub fn vote_range<S: Scalar>(m: &ScoreMatrix<S>) -> VoteOutcome<S> {
    vote(m, Mechanism::Range, TieBreak::LowestIndex)
}

pub fn vote_borda<S: Scalar>(m: &ScoreMatrix<S>) -> VoteOutcome<S> {
    vote(m, Mechanism::Borda, TieBreak::LowestIndex)
}

pub fn vote_cav<S: Scalar>(m: &ScoreMatrix<S>) -> VoteOutcome<S> {
    vote(m, Mechanism::Cav, TieBreak::LowestIndex)
}

pub fn vote<S: Scalar>(m: &ScoreMatrix<S>, mechanism: Mechanism, tie_break: TieBreak) -> VoteOutcome<S> {
    let to_s = |v: i64| S::from_i64(v).expect("small integer");
    match mechanism {
        Mechanism::Range => tally(mechanism, m.normalized().to_vec(), true, tie_break),
        Mechanism::Borda => {
            let grid = borda_points(m)
                .into_iter()
                .map(|row| row.into_iter().map(|p| to_s(p as i64)).collect())
                .collect();
            tally(mechanism, grid, false, tie_break)
        }
        Mechanism::Cav => {
            let grid = cav_values(m)
                .into_iter()
                .map(|row| row.into_iter().map(|v| to_s(v as i64)).collect())
                .collect();
            tally(mechanism, grid, false, tie_break)
        }
    }
}
