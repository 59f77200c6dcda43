//! Goal → criteria → alternatives hierarchy, decision matrix, score
//! aggregation and ranking.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::extent::WeightVector;

/// Column sums of a decision matrix built from computed weights.
pub const COMPUTED_COLUMN_TOLERANCE: f64 = 1e-9;
/// Column sums of a decision matrix transcribed at three printed decimals.
pub const PRINTED_COLUMN_TOLERANCE: f64 = 2e-3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    pub name: String,
}

impl Node {
    pub fn new(id: impl Into<String>, name: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            name: name.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hierarchy {
    pub goal: String,
    pub criteria: Vec<Node>,
    pub alternatives: Vec<Node>,
}

impl Hierarchy {
    pub fn criterion_ids(&self) -> Vec<String> {
        self.criteria.iter().map(|n| n.id.clone()).collect()
    }

    pub fn alternative_ids(&self) -> Vec<String> {
        self.alternatives.iter().map(|n| n.id.clone()).collect()
    }

    pub fn criterion_index(&self, id: &str) -> Option<usize> {
        self.criteria.iter().position(|n| n.id == id)
    }

    pub fn alternative_name(&self, id: &str) -> Option<&str> {
        self.alternatives
            .iter()
            .find(|n| n.id == id)
            .map(|n| n.name.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Aggregation {
    /// `Σ_c w_c · v[o][c]`.
    #[default]
    WeightedSum,
    /// The weighted sum divided by the number of criteria.
    PaperMean,
}

impl Aggregation {
    pub fn as_str(self) -> &'static str {
        match self {
            Aggregation::WeightedSum => "weighted-sum",
            Aggregation::PaperMean => "paper-mean",
        }
    }
}

impl fmt::Display for Aggregation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Aggregation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "weighted-sum" => Ok(Aggregation::WeightedSum),
            "paper-mean" => Ok(Aggregation::PaperMean),
            other => Err(format!(
                "unknown aggregation {other:?}; expected paper-mean or weighted-sum"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("weights for criterion {criterion} do not cover the alternatives: missing {missing:?}, extra {extra:?}")]
    MismatchedAlternatives {
        criterion: String,
        missing: Vec<String>,
        extra: Vec<String>,
    },
    #[error("no weights supplied for criterion {0}")]
    MissingCriterion(String),
    #[error("criteria weights {weights:?} do not match decision-matrix columns {columns:?}")]
    LabelMismatch {
        weights: Vec<String>,
        columns: Vec<String>,
    },
    #[error("unknown criterion {0}")]
    UnknownCriterion(String),
    #[error("sensitivity weight {0} is outside [0, 1]")]
    GridOutOfRange(f64),
    #[error("sensitivity grid is empty")]
    EmptyGrid,
}

/// Local priorities of each alternative (rows) under each criterion (columns).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionMatrix {
    pub rows: Vec<String>,
    pub columns: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

impl DecisionMatrix {
    pub fn get(&self, alternative: &str, criterion: &str) -> Option<f64> {
        let r = self.rows.iter().position(|x| x == alternative)?;
        let c = self.columns.iter().position(|x| x == criterion)?;
        Some(self.values[r][c])
    }

    pub fn column(&self, index: usize) -> Vec<f64> {
        self.values.iter().map(|row| row[index]).collect()
    }

    pub fn column_sums(&self) -> Vec<f64> {
        (0..self.columns.len())
            .map(|c| self.values.iter().map(|row| row[c]).sum())
            .collect()
    }
}

/// Assembles the decision matrix from one weight vector per criterion.
/// Rows follow `alternatives`, columns follow `criteria`.
pub fn build_decision_matrix(
    alternatives: &[String],
    criteria: &[String],
    weights_per_criterion: &BTreeMap<String, WeightVector>,
) -> Result<DecisionMatrix, ModelError> {
    let mut values = vec![vec![0.0; criteria.len()]; alternatives.len()];
    for (c, criterion) in criteria.iter().enumerate() {
        let wv = weights_per_criterion
            .get(criterion)
            .ok_or_else(|| ModelError::MissingCriterion(criterion.clone()))?;
        let missing: Vec<String> = alternatives
            .iter()
            .filter(|a| !wv.labels.contains(a))
            .cloned()
            .collect();
        let extra: Vec<String> = wv
            .labels
            .iter()
            .filter(|l| !alternatives.contains(l))
            .cloned()
            .collect();
        if !missing.is_empty() || !extra.is_empty() || wv.labels.len() != alternatives.len() {
            return Err(ModelError::MismatchedAlternatives {
                criterion: criterion.clone(),
                missing,
                extra,
            });
        }
        for (r, alternative) in alternatives.iter().enumerate() {
            values[r][c] = wv.get(alternative).expect("checked above");
        }
    }
    Ok(DecisionMatrix {
        rows: alternatives.to_vec(),
        columns: criteria.to_vec(),
        values,
    })
}

/// Overall score of every alternative, in decision-matrix row order.
pub fn aggregate(
    criteria_weights: &WeightVector,
    dm: &DecisionMatrix,
    mode: Aggregation,
) -> Result<Vec<(String, f64)>, ModelError> {
    let mismatch = || ModelError::LabelMismatch {
        weights: criteria_weights.labels.clone(),
        columns: dm.columns.clone(),
    };
    if criteria_weights.len() != dm.columns.len() {
        return Err(mismatch());
    }
    let weights: Vec<f64> = dm
        .columns
        .iter()
        .map(|c| criteria_weights.get(c).ok_or_else(mismatch))
        .collect::<Result<_, _>>()?;
    let divisor = match mode {
        Aggregation::WeightedSum => 1.0,
        Aggregation::PaperMean => dm.columns.len() as f64,
    };
    Ok(dm
        .rows
        .iter()
        .zip(&dm.values)
        .map(|(id, row)| {
            let sum: f64 = row.iter().zip(&weights).map(|(v, w)| v * w).sum();
            (id.clone(), sum / divisor)
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedAlternative {
    pub alternative: String,
    pub rank: usize,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingResult {
    pub aggregation: Aggregation,
    pub entries: Vec<RankedAlternative>,
}

impl RankingResult {
    pub fn order(&self) -> Vec<&str> {
        self.entries
            .iter()
            .map(|e| e.alternative.as_str())
            .collect()
    }

    pub fn rank_of(&self, alternative: &str) -> Option<usize> {
        self.entries
            .iter()
            .find(|e| e.alternative == alternative)
            .map(|e| e.rank)
    }

    pub fn score_of(&self, alternative: &str) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.alternative == alternative)
            .map(|e| e.score)
    }
}

/// Sorts by descending score. `scores` must be in declaration order; equal
/// scores keep that order.
pub fn rank(scores: &[(String, f64)], aggregation: Aggregation) -> RankingResult {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    // Stable sort keeps declaration order among ties.
    order.sort_by(|&a, &b| scores[b].1.total_cmp(&scores[a].1));
    let entries = order
        .into_iter()
        .enumerate()
        .map(|(position, i)| RankedAlternative {
            alternative: scores[i].0.clone(),
            rank: position + 1,
            score: scores[i].1,
        })
        .collect();
    RankingResult {
        aggregation,
        entries,
    }
}
