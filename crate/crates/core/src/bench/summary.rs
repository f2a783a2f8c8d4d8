use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::experiment::{ExperimentConfig, ExperimentOutput, ExperimentRecord, Planner};
use super::wilcoxon::wilcoxon_signed_rank;
use crate::objectives::ObjectiveSpec;
use crate::voting::Mechanism;

pub const ALPHA: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlannerStats {
    pub runs: usize,
    pub mean_score: f64,
    pub mean_time_ms: f64,
    pub mean_expansions: f64,
}

/// Paired VBMO-vs-Weighted comparison of one quantity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairedTest {
    pub n: usize,
    pub vbmo_mean: f64,
    pub weighted_mean: f64,
    /// `None` when fewer than 6 pairs are available.
    pub p_value: Option<f64>,
    pub significant: bool,
    /// Planner with the lower mean, when the difference is significant.
    pub better: Option<Planner>,
}

impl PairedTest {
    fn new(pairs: &[(f64, f64)]) -> Self {
        let (a, b): (Vec<f64>, Vec<f64>) = pairs.iter().copied().unzip();
        let p_value = wilcoxon_signed_rank(&a, &b).ok().map(|r| r.p_value);
        let significant = p_value.is_some_and(|p| p < ALPHA);
        let vbmo_mean = mean(&a);
        let weighted_mean = mean(&b);
        let better = significant.then_some(if vbmo_mean < weighted_mean {
            Planner::Vbmo
        } else {
            Planner::Weighted
        });
        PairedTest {
            n: pairs.len(),
            vbmo_mean,
            weighted_mean,
            p_value,
            significant,
            better,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MapTally {
    pub vbmo_better: usize,
    pub weighted_better: usize,
    pub no_difference: usize,
}

/// One voting mechanism against the weighted baseline.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub score: PairedTest,
    pub time: PairedTest,
    /// Score comparison per map.
    pub per_map: BTreeMap<String, PairedTest>,
    pub maps: MapTally,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub experiment: String,
    pub objectives: Vec<String>,
    pub maps: usize,
    pub records: usize,
    /// Keyed by record label (`vbmo-range`, `weighted`, ...).
    pub planners: BTreeMap<String, PlannerStats>,
    /// Mechanism, then source objective, to percent of runs selected.
    pub selection_frequency: BTreeMap<String, BTreeMap<String, f64>>,
    /// Keyed by mechanism; present when the baseline ran.
    pub comparisons: BTreeMap<String, Comparison>,
    pub failures: usize,
    pub dominated_winners: usize,
}

impl Summary {
    /// Objective with the largest selection share under `mechanism`.
    pub fn most_selected(&self, mechanism: Mechanism) -> Option<(&str, f64)> {
        self.selection_frequency
            .get(mechanism.name())?
            .iter()
            .max_by(|a, b| a.1.total_cmp(b.1).then_with(|| b.0.cmp(a.0)))
            .map(|(k, v)| (k.as_str(), *v))
    }
}

fn mean(v: &[f64]) -> f64 {
    if v.is_empty() {
        0.0
    } else {
        v.iter().sum::<f64>() / v.len() as f64
    }
}

pub fn summarize(cfg: &ExperimentConfig, out: &ExperimentOutput) -> Summary {
    let records = &out.records;
    let mut by_label: BTreeMap<String, Vec<&ExperimentRecord>> = BTreeMap::new();
    for r in records {
        by_label.entry(r.label()).or_default().push(r);
    }
    let planners = by_label
        .iter()
        .map(|(label, rs)| {
            let n = rs.len() as f64;
            let stats = PlannerStats {
                runs: rs.len(),
                mean_score: rs.iter().map(|r| r.score).sum::<f64>() / n,
                mean_time_ms: rs.iter().map(|r| r.time_ms).sum::<f64>() / n,
                mean_expansions: rs.iter().map(|r| r.expansions as f64).sum::<f64>() / n,
            };
            (label.clone(), stats)
        })
        .collect();

    let mut selection_frequency: BTreeMap<String, BTreeMap<String, f64>> = BTreeMap::new();
    for r in records {
        if let (Some(m), Some(obj)) = (r.mechanism, &r.winner_objective) {
            *selection_frequency
                .entry(m.name().into())
                .or_default()
                .entry(obj.clone())
                .or_default() += 1.0;
        }
    }
    for counts in selection_frequency.values_mut() {
        let total: f64 = counts.values().sum();
        counts.values_mut().for_each(|c| *c = 100.0 * *c / total);
    }

    let weighted: BTreeMap<(&str, usize), &ExperimentRecord> = records
        .iter()
        .filter(|r| r.planner == Planner::Weighted)
        .map(|r| ((r.map.as_str(), r.pair), r))
        .collect();
    let mut comparisons = BTreeMap::new();
    if !weighted.is_empty() {
        for &m in &cfg.mechanisms {
            let paired: Vec<(&ExperimentRecord, &ExperimentRecord)> = records
                .iter()
                .filter(|r| r.mechanism == Some(m))
                .filter_map(|r| weighted.get(&(r.map.as_str(), r.pair)).map(|w| (r, *w)))
                .collect();
            let scores: Vec<(f64, f64)> = paired.iter().map(|(v, w)| (v.score, w.score)).collect();
            let times: Vec<(f64, f64)> = paired.iter().map(|(v, w)| (v.time_ms, w.time_ms)).collect();
            let mut per_map_pairs: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
            for (v, w) in &paired {
                per_map_pairs.entry(v.map.clone()).or_default().push((v.score, w.score));
            }
            let per_map: BTreeMap<String, PairedTest> = per_map_pairs
                .into_iter()
                .map(|(k, p)| (k, PairedTest::new(&p)))
                .collect();
            let mut maps = MapTally::default();
            for t in per_map.values() {
                match t.better {
                    Some(Planner::Vbmo) => maps.vbmo_better += 1,
                    Some(Planner::Weighted) => maps.weighted_better += 1,
                    None => maps.no_difference += 1,
                }
            }
            comparisons.insert(
                m.name().to_owned(),
                Comparison {
                    score: PairedTest::new(&scores),
                    time: PairedTest::new(&times),
                    per_map,
                    maps,
                },
            );
        }
    }

    let mut map_ids: Vec<&str> = records.iter().map(|r| r.map.as_str()).collect();
    map_ids.dedup();
    Summary {
        experiment: cfg.name.clone(),
        objectives: cfg.objectives.iter().map(ToString::to_string).collect(),
        maps: map_ids.len(),
        records: records.len(),
        planners,
        selection_frequency,
        comparisons,
        failures: out.failures.len(),
        dominated_winners: out.dominated_winners,
    }
}

/// `Distance, Time, Uniform = 10` style label for an objective list.
pub fn describe_objectives(specs: &[ObjectiveSpec]) -> String {
    specs
        .iter()
        .map(|s| match s {
            ObjectiveSpec::Distance => "Distance".to_owned(),
            ObjectiveSpec::Time => "Time".to_owned(),
            ObjectiveSpec::Uniform(c) => format!("Uniform = {c}"),
            ObjectiveSpec::Random { low, high, .. } => format!("Random = [{low},{high}]"),
            ObjectiveSpec::Safety => "Safety".to_owned(),
        })
        .collect::<Vec<_>>()
        .join(", ")
}

/// Score and time of VBMO-range against Weighted for one configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub objectives: String,
    pub vbmo_score: f64,
    pub weighted_score: f64,
    pub score_better: Option<Planner>,
    pub vbmo_time_ms: f64,
    pub weighted_time_ms: f64,
    pub time_better: Option<Planner>,
}

impl ComparisonRow {
    /// `None` when the summary has no range-vs-weighted comparison.
    pub fn from_summary(objectives: impl Into<String>, s: &Summary) -> Option<Self> {
        let c = s.comparisons.get(Mechanism::Range.name())?;
        Some(ComparisonRow {
            objectives: objectives.into(),
            vbmo_score: c.score.vbmo_mean,
            weighted_score: c.score.weighted_mean,
            score_better: c.score.better,
            vbmo_time_ms: c.time.vbmo_mean,
            weighted_time_ms: c.time.weighted_mean,
            time_better: c.time.better,
        })
    }
}

/// Plain-text table; `*` marks the significantly better value.
pub fn render_comparison(rows: &[ComparisonRow]) -> String {
    let width = rows
        .iter()
        .map(|r| r.objectives.len())
        .max()
        .unwrap_or(0)
        .max("Objectives Used".len());
    let cell = |v: f64, star: bool, digits: usize| format!("{v:.digits$}{}", if star { "*" } else { "" });
    let mut out = String::new();
    let _ = writeln!(out, "{:width$} | {:>21} | {:>23}", "", "Score", "Time (ms)");
    let _ = writeln!(
        out,
        "{:width$} | {:>10} {:>10} | {:>11} {:>11}",
        "Objectives Used", "VBMO", "Weighted", "VBMO", "Weighted"
    );
    let _ = writeln!(out, "{}", "-".repeat(width + 52));
    for r in rows {
        let _ = writeln!(
            out,
            "{:width$} | {:>10} {:>10} | {:>11} {:>11}",
            r.objectives,
            cell(r.vbmo_score, r.score_better == Some(Planner::Vbmo), 2),
            cell(r.weighted_score, r.score_better == Some(Planner::Weighted), 2),
            cell(r.vbmo_time_ms, r.time_better == Some(Planner::Vbmo), 3),
            cell(r.weighted_time_ms, r.time_better == Some(Planner::Weighted), 3),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexId;
    use crate::objectives::parse_objectives;

    fn rec(map: &str, pair: usize, planner: Planner, mechanism: Option<Mechanism>, score: f64) -> ExperimentRecord {
        ExperimentRecord {
            map: map.into(),
            pair,
            start: VertexId(0),
            goal: VertexId(1),
            planner,
            mechanism,
            score,
            time_ms: 2.0,
            expansions: 10,
            winner_objective: mechanism.map(|_| if pair.is_multiple_of(4) { "uniform" } else { "distance" }.to_owned()),
        }
    }

    fn cfg() -> ExperimentConfig {
        let mut c = ExperimentConfig::new("x", parse_objectives("distance,uniform:1,random:1:20").unwrap());
        c.mechanisms = vec![Mechanism::Range];
        c
    }

    #[test]
    fn single_record_means() {
        let out = ExperimentOutput {
            records: vec![rec("m", 0, Planner::Vbmo, Some(Mechanism::Range), 0.75)],
            ..Default::default()
        };
        let s = summarize(&cfg(), &out);
        let p = &s.planners["vbmo-range"];
        assert_eq!(
            (p.runs, p.mean_score, p.mean_time_ms, p.mean_expansions),
            (1, 0.75, 2.0, 10.0)
        );
        assert_eq!(s.selection_frequency["range"]["uniform"], 100.0);
        assert!(s.comparisons.is_empty());
    }

    #[test]
    fn paired_comparison_and_frequencies() {
        let mut records = Vec::new();
        for pair in 0..12 {
            records.push(rec(
                "m",
                pair,
                Planner::Vbmo,
                Some(Mechanism::Range),
                0.5 + pair as f64 / 100.0,
            ));
            records.push(rec("m", pair, Planner::Weighted, None, 1.0 + pair as f64 / 50.0));
        }
        let s = summarize(
            &cfg(),
            &ExperimentOutput {
                records,
                ..Default::default()
            },
        );
        let c = &s.comparisons["range"];
        assert_eq!(c.score.n, 12);
        assert!(c.score.p_value.unwrap() < 0.001);
        assert_eq!(c.score.better, Some(Planner::Vbmo));
        assert_eq!(c.time.p_value, Some(1.0));
        assert_eq!(
            c.maps,
            MapTally {
                vbmo_better: 1,
                weighted_better: 0,
                no_difference: 0
            }
        );
        assert_eq!(s.most_selected(Mechanism::Range), Some(("distance", 75.0)));

        let row = ComparisonRow::from_summary(describe_objectives(&cfg().objectives), &s).unwrap();
        assert_eq!(row.objectives, "Distance, Uniform = 1, Random = [1,20]");
        let text = render_comparison(&[row]);
        assert!(text.contains("0.56*"), "{text}");
        assert!(text.lines().nth(1).unwrap().starts_with("Objectives Used"));
    }
}
