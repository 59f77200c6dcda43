//! Evaluates a session document: per-node weights and consistency, the
//! decision matrix, the final ranking and sensitivity sweeps.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::consistency::{crisp_consistency_ratio, ConsistencyError, CrReport};
use crate::extent::{extent_weights, Cell, FuzzyComparisonMatrix, MatrixError, WeightVector};
use crate::fuzzy::FuzzyError;
use crate::model::{
    aggregate, build_decision_matrix, rank, Aggregation, DecisionMatrix, ModelError, RankingResult,
    PRINTED_COLUMN_TOLERANCE,
};
use crate::sensitivity::{sensitivity_sweep, SensitivityReport};
use crate::session::{
    JudgmentSet, ResultsCache, SessionDocument, CRITERIA_NODE, CRITERIA_WEIGHT_TOLERANCE,
};

/// A comparison node: the criteria level or the alternatives under one
/// criterion.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NodeId {
    Criteria,
    Criterion(String),
}

impl NodeId {
    pub fn parse(s: &str) -> Self {
        if s == CRITERIA_NODE {
            NodeId::Criteria
        } else {
            NodeId::Criterion(s.to_owned())
        }
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeId::Criteria => f.write_str(CRITERIA_NODE),
            NodeId::Criterion(id) => f.write_str(id),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeSource {
    Precomputed,
    Judgments,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MissingCells {
    pub node: String,
    pub cells: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EngineError {
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("incomplete judgments: {}", describe_missing(.0))]
    Incomplete(Vec<MissingCells>),
    #[error("node {0} uses precomputed priorities and has no comparison matrix")]
    PrecomputedNode(String),
    #[error("precomputed priority for node {node} is invalid: {reason}")]
    InvalidPrecomputed { node: String, reason: String },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
    #[error(transparent)]
    Consistency(#[from] ConsistencyError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn describe_missing(missing: &[MissingCells]) -> String {
    missing
        .iter()
        .map(|m| {
            let cells: Vec<String> = m.cells.iter().map(Cell::to_string).collect();
            format!("node {} missing {}", m.node, cells.join(" "))
        })
        .collect::<Vec<_>>()
        .join("; ")
}

static EMPTY: JudgmentSet = JudgmentSet::new();

pub fn node_source(doc: &SessionDocument, node: &NodeId) -> Result<NodeSource, EngineError> {
    let precomputed = match node {
        NodeId::Criteria => doc.precomputed.criteria_weights.is_some(),
        NodeId::Criterion(id) => {
            if doc.hierarchy.criterion_index(id).is_none() {
                return Err(EngineError::UnknownNode(id.clone()));
            }
            doc.precomputed.decision_matrix.is_some()
        }
    };
    Ok(if precomputed {
        NodeSource::Precomputed
    } else {
        NodeSource::Judgments
    })
}

/// Labels of the elements compared at `node`.
pub fn node_labels(doc: &SessionDocument, node: &NodeId) -> Vec<String> {
    match node {
        NodeId::Criteria => doc.hierarchy.criterion_ids(),
        NodeId::Criterion(_) => doc.hierarchy.alternative_ids(),
    }
}

pub fn node_judgments<'a>(doc: &'a SessionDocument, node: &NodeId) -> &'a JudgmentSet {
    match node {
        NodeId::Criteria => &doc.judgments.criteria,
        NodeId::Criterion(id) => doc.judgments.alternatives.get(id).unwrap_or(&EMPTY),
    }
}

/// Upper-triangle cells still without a judgment; empty for precomputed nodes.
pub fn missing_cells(doc: &SessionDocument, node: &NodeId) -> Result<Vec<Cell>, EngineError> {
    if node_source(doc, node)? == NodeSource::Precomputed {
        return Ok(Vec::new());
    }
    let judged = node_judgments(doc, node);
    Ok(Cell::upper_triangle(node_labels(doc, node).len())
        .filter(|c| !judged.contains_key(c))
        .collect())
}

pub fn node_matrix(
    doc: &SessionDocument,
    node: &NodeId,
) -> Result<FuzzyComparisonMatrix, EngineError> {
    if node_source(doc, node)? == NodeSource::Precomputed {
        return Err(EngineError::PrecomputedNode(node.to_string()));
    }
    FuzzyComparisonMatrix::from_judgments(node_labels(doc, node), node_judgments(doc, node))
        .map_err(|e| match e {
            MatrixError::Incomplete { missing } => EngineError::Incomplete(vec![MissingCells {
                node: node.to_string(),
                cells: missing,
            }]),
            other => other.into(),
        })
}

fn precomputed_weights(doc: &SessionDocument, node: &NodeId) -> Result<WeightVector, EngineError> {
    let labels = node_labels(doc, node);
    let invalid = |reason: String| EngineError::InvalidPrecomputed {
        node: node.to_string(),
        reason,
    };
    let (values, tolerance) = match node {
        NodeId::Criteria => (
            doc.precomputed.criteria_weights.clone().unwrap_or_default(),
            CRITERIA_WEIGHT_TOLERANCE,
        ),
        NodeId::Criterion(id) => {
            let c = doc
                .hierarchy
                .criterion_index(id)
                .ok_or_else(|| EngineError::UnknownNode(id.clone()))?;
            let grid = doc
                .precomputed
                .decision_matrix
                .as_deref()
                .unwrap_or_default();
            let column = grid
                .iter()
                .map(|row| row.get(c).copied())
                .collect::<Option<Vec<f64>>>()
                .ok_or_else(|| invalid("decision matrix row is too short".into()))?;
            (column, PRINTED_COLUMN_TOLERANCE)
        }
    };
    WeightVector::from_values(labels, values, tolerance).map_err(|e| invalid(e.to_string()))
}

/// Priorities of the children of `node`, from precomputed values when present
/// and by extent analysis of the judgments otherwise.
pub fn node_weights(doc: &SessionDocument, node: &NodeId) -> Result<WeightVector, EngineError> {
    match node_source(doc, node)? {
        NodeSource::Precomputed => precomputed_weights(doc, node),
        NodeSource::Judgments => recomputed_weights(doc, node),
    }
}

/// Priorities derived from the judgments, never from precomputed values.
pub fn recomputed_weights(
    doc: &SessionDocument,
    node: &NodeId,
) -> Result<WeightVector, EngineError> {
    Ok(extent_weights(&node_matrix(doc, node)?)?)
}

pub fn node_consistency(doc: &SessionDocument, node: &NodeId) -> Result<CrReport, EngineError> {
    Ok(crisp_consistency_ratio(&node_matrix(doc, node)?)?)
}

fn all_nodes(doc: &SessionDocument) -> impl Iterator<Item = NodeId> + '_ {
    std::iter::once(NodeId::Criteria).chain(
        doc.hierarchy
            .criteria
            .iter()
            .map(|c| NodeId::Criterion(c.id.clone())),
    )
}

/// Every node's missing cells, for nodes that have any.
pub fn incomplete_nodes(doc: &SessionDocument) -> Vec<MissingCells> {
    all_nodes(doc)
        .filter_map(|node| {
            let cells = missing_cells(doc, &node).ok()?;
            (!cells.is_empty()).then(|| MissingCells {
                node: node.to_string(),
                cells,
            })
        })
        .collect()
}

fn require_complete(doc: &SessionDocument) -> Result<(), EngineError> {
    let missing = incomplete_nodes(doc);
    if missing.is_empty() {
        Ok(())
    } else {
        Err(EngineError::Incomplete(missing))
    }
}

pub fn criteria_weights(doc: &SessionDocument) -> Result<WeightVector, EngineError> {
    node_weights(doc, &NodeId::Criteria)
}

pub fn decision_matrix(doc: &SessionDocument) -> Result<DecisionMatrix, EngineError> {
    let per_criterion = doc
        .hierarchy
        .criteria
        .iter()
        .map(|c| {
            let w = node_weights(doc, &NodeId::Criterion(c.id.clone()))?;
            Ok((c.id.clone(), w))
        })
        .collect::<Result<BTreeMap<_, _>, EngineError>>()?;
    Ok(build_decision_matrix(
        &doc.hierarchy.alternative_ids(),
        &doc.hierarchy.criterion_ids(),
        &per_criterion,
    )?)
}

/// Final ranking. `mode` overrides the document's aggregation setting.
pub fn ranking(
    doc: &SessionDocument,
    mode: Option<Aggregation>,
) -> Result<RankingResult, EngineError> {
    require_complete(doc)?;
    let mode = mode.unwrap_or(doc.settings.aggregation);
    let weights = criteria_weights(doc)?;
    let dm = decision_matrix(doc)?;
    Ok(rank(&aggregate(&weights, &dm, mode)?, mode))
}

pub fn sensitivity(
    doc: &SessionDocument,
    criterion: &str,
    grid: &[f64],
    mode: Option<Aggregation>,
) -> Result<SensitivityReport, EngineError> {
    if doc.hierarchy.criterion_index(criterion).is_none() {
        return Err(ModelError::UnknownCriterion(criterion.to_owned()).into());
    }
    require_complete(doc)?;
    let mode = mode.unwrap_or(doc.settings.aggregation);
    let weights = criteria_weights(doc)?;
    let dm = decision_matrix(doc)?;
    Ok(sensitivity_sweep(&weights, &dm, mode, criterion, grid)?)
}

/// Recomputes the cached results. When the session cannot be ranked yet the
/// cache keeps whatever is computable and is marked dirty.
pub fn refresh_results(doc: &mut SessionDocument) {
    let criteria_weights = criteria_weights(doc).ok().map(|w| w.weights);
    let ranking = ranking(doc, None).ok();
    doc.results = Some(ResultsCache {
        dirty: ranking.is_none(),
        criteria_weights,
        ranking,
    });
}
