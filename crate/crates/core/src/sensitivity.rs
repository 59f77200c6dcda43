//! One-criterion weight sweeps and rank-reversal detection.

use serde::{Deserialize, Serialize};

use crate::extent::WeightVector;
use crate::model::{aggregate, rank, Aggregation, DecisionMatrix, ModelError, RankingResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityPoint {
    pub weight: f64,
    pub criteria_weights: Vec<f64>,
    pub ranking: RankingResult,
}

/// Two alternatives swap order somewhere between two adjacent grid values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankReversal {
    pub from_weight: f64,
    pub to_weight: f64,
    /// Weight at which the two scores are equal.
    pub threshold: f64,
    /// Ahead at `from_weight`.
    pub leader_before: String,
    /// Ahead at `to_weight`.
    pub leader_after: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    pub criterion: String,
    pub baseline_weight: f64,
    pub criteria_labels: Vec<String>,
    pub points: Vec<SensitivityPoint>,
    pub reversals: Vec<RankReversal>,
}

/// Criteria weights with `criterion` set to `value` and the others rescaled
/// proportionally to fill `1 - value`. If every other weight is zero they
/// share the remainder equally. The baseline value returns the baseline
/// weights unchanged.
pub fn perturbed_weights(
    baseline: &WeightVector,
    criterion: &str,
    value: f64,
) -> Result<WeightVector, ModelError> {
    if !(0.0..=1.0).contains(&value) {
        return Err(ModelError::GridOutOfRange(value));
    }
    let index = baseline
        .labels
        .iter()
        .position(|l| l == criterion)
        .ok_or_else(|| ModelError::UnknownCriterion(criterion.to_owned()))?;
    let mut weights = baseline.weights.clone();
    if value == weights[index] {
        return Ok(WeightVector {
            labels: baseline.labels.clone(),
            weights,
            diagnostics: Vec::new(),
        });
    }
    let others = weights.len() - 1;
    let rest: f64 = weights
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != index)
        .map(|(_, w)| w)
        .sum();
    for (i, w) in weights.iter_mut().enumerate() {
        if i == index {
            *w = value;
        } else if rest > 0.0 {
            *w *= (1.0 - value) / rest;
        } else {
            *w = (1.0 - value) / others as f64;
        }
    }
    Ok(WeightVector {
        labels: baseline.labels.clone(),
        weights,
        diagnostics: Vec::new(),
    })
}

/// Parses a comma-separated list of weights in `[0, 1]`.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    let grid = text
        .split(',')
        .map(|part| {
            let value: f64 = part
                .trim()
                .parse()
                .map_err(|_| format!("grid value {part:?} is not a number"))?;
            if (0.0..=1.0).contains(&value) {
                Ok(value)
            } else {
                Err(format!("grid value {value} is outside [0, 1]"))
            }
        })
        .collect::<Result<Vec<f64>, String>>()?;
    if grid.is_empty() {
        return Err("grid must list at least one weight".into());
    }
    Ok(grid)
}

pub fn sensitivity_sweep(
    baseline: &WeightVector,
    dm: &DecisionMatrix,
    mode: Aggregation,
    criterion: &str,
    grid: &[f64],
) -> Result<SensitivityReport, ModelError> {
    if grid.is_empty() {
        return Err(ModelError::EmptyGrid);
    }
    let baseline_weight = baseline
        .get(criterion)
        .ok_or_else(|| ModelError::UnknownCriterion(criterion.to_owned()))?;
    let points = grid
        .iter()
        .map(|&g| {
            let weights = perturbed_weights(baseline, criterion, g)?;
            let scores = aggregate(&weights, dm, mode)?;
            Ok(SensitivityPoint {
                weight: g,
                criteria_weights: weights.weights,
                ranking: rank(&scores, mode),
            })
        })
        .collect::<Result<Vec<_>, ModelError>>()?;
    let reversals = points
        .windows(2)
        .flat_map(|pair| reversals_between(&pair[0], &pair[1], &dm.rows))
        .collect();
    Ok(SensitivityReport {
        criterion: criterion.to_owned(),
        baseline_weight,
        criteria_labels: baseline.labels.clone(),
        points,
        reversals,
    })
}

fn reversals_between(
    before: &SensitivityPoint,
    after: &SensitivityPoint,
    alternatives: &[String],
) -> Vec<RankReversal> {
    let mut events = Vec::new();
    for (i, a) in alternatives.iter().enumerate() {
        for b in &alternatives[i + 1..] {
            let rank = |p: &SensitivityPoint, x: &str| p.ranking.rank_of(x).expect("ranked");
            let a_first_before = rank(before, a) < rank(before, b);
            let a_first_after = rank(after, a) < rank(after, b);
            if a_first_before == a_first_after {
                continue;
            }
            let score = |p: &SensitivityPoint, x: &str| p.ranking.score_of(x).expect("ranked");
            let gap_before = score(before, a) - score(before, b);
            let gap_after = score(after, a) - score(after, b);
            // Scores are affine in the swept weight, so the gap crosses zero
            // at the linear interpolation point.
            let span = after.weight - before.weight;
            let threshold = if gap_before == gap_after {
                before.weight
            } else {
                before.weight + span * gap_before / (gap_before - gap_after)
            };
            let (leader_before, leader_after) = if a_first_before { (a, b) } else { (b, a) };
            events.push(RankReversal {
                from_weight: before.weight,
                to_weight: after.weight,
                threshold,
                leader_before: leader_before.clone(),
                leader_after: leader_after.clone(),
            });
        }
    }
    events
}
