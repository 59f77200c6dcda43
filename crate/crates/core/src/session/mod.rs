//! Session documents: the persisted form of one decision problem.
//!
//! A document is JSON. Judgments keep only the strict upper triangle of each
//! comparison matrix, keyed `"(row,col)"`; the diagonal and the reciprocal
//! lower triangle are never stored.

mod dataset;
mod raw;
mod store;

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::extent::Cell;
use crate::fuzzy::LinguisticGrade;
use crate::model::{Aggregation, Hierarchy, Node, RankingResult};

pub use dataset::paper_dataset;
pub use store::{SessionId, SessionStore, StoreError};

pub const CURRENT_VERSION: u64 = 1;
pub const PAPER_SCALE: &str = "paper-table-1";
/// Reserved node id naming the criteria-level comparison matrix.
pub const CRITERIA_NODE: &str = "criteria";

pub const CRITERIA_WEIGHT_TOLERANCE: f64 = 1e-3;

pub type JudgmentSet = BTreeMap<Cell, LinguisticGrade>;

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Judgments {
    pub criteria: JudgmentSet,
    /// Alternative comparisons under each criterion, keyed by criterion id.
    pub alternatives: BTreeMap<String, JudgmentSet>,
}

impl Judgments {
    pub fn is_empty(&self) -> bool {
        self.criteria.is_empty() && self.alternatives.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Precomputed {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub criteria_weights: Option<Vec<f64>>,
    /// Rows are alternatives and columns criteria, in declaration order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decision_matrix: Option<Vec<Vec<f64>>>,
}

impl Precomputed {
    pub fn is_empty(&self) -> bool {
        self.criteria_weights.is_none() && self.decision_matrix.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Settings {
    pub aggregation: Aggregation,
    pub scale: String,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            aggregation: Aggregation::WeightedSum,
            scale: PAPER_SCALE.to_owned(),
        }
    }
}

/// Last computed outputs. `dirty` is set when judgments changed and the
/// cached values could not be recomputed.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ResultsCache {
    pub dirty: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub criteria_weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranking: Option<RankingResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SessionDocument {
    pub version: u64,
    #[serde(flatten)]
    pub hierarchy: Hierarchy,
    #[serde(skip_serializing_if = "Judgments::is_empty")]
    pub judgments: Judgments,
    #[serde(skip_serializing_if = "Precomputed::is_empty")]
    pub precomputed: Precomputed,
    pub settings: Settings,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub results: Option<ResultsCache>,
}

impl SessionDocument {
    /// An empty judgment-mode session over the given hierarchy.
    pub fn new(goal: impl Into<String>, criteria: Vec<Node>, alternatives: Vec<Node>) -> Self {
        Self {
            version: CURRENT_VERSION,
            hierarchy: Hierarchy {
                goal: goal.into(),
                criteria,
                alternatives,
            },
            judgments: Judgments::default(),
            precomputed: Precomputed::default(),
            settings: Settings::default(),
            results: None,
        }
    }

    /// Checks every document invariant and returns all violations found.
    pub fn validate(&self) -> Vec<Violation> {
        raw::validate(self)
    }

    /// Ids of nodes whose judgments use the equal-importance grade.
    pub fn equal_importance_nodes(&self) -> Vec<String> {
        let uses_ei = |set: &JudgmentSet| set.values().any(|g| g.is_equal_importance());
        let mut nodes = Vec::new();
        if uses_ei(&self.judgments.criteria) {
            nodes.push(CRITERIA_NODE.to_owned());
        }
        for criterion in &self.hierarchy.criteria {
            if self
                .judgments
                .alternatives
                .get(&criterion.id)
                .is_some_and(uses_ei)
            {
                nodes.push(criterion.id.clone());
            }
        }
        nodes
    }

    /// Human-readable notes that do not invalidate the document.
    pub fn notes(&self) -> Vec<String> {
        self.equal_importance_nodes()
            .into_iter()
            .map(|node| {
                format!(
                    "node {node}: equal-importance judgments use the asymmetric triple (1,1,2), \
                     which is not its own reciprocal"
                )
            })
            .collect()
    }
}

/// One failed document invariant, located by a JSON-style path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl Violation {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SessionError {
    #[error("malformed session document: {0}")]
    Parse(String),
    #[error("unsupported session version {0}; expected {CURRENT_VERSION}")]
    Version(String),
    #[error("invalid session document:\n{}", list_violations(.0))]
    Validation(Vec<Violation>),
    #[error("storage error at {path}: {source}")]
    Storage {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

fn list_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| format!("  {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Parses and fully validates a document.
pub fn load_from_slice(bytes: &[u8]) -> Result<SessionDocument, SessionError> {
    raw::parse(bytes)
}

pub fn load_from_reader<R: Read>(mut reader: R) -> Result<SessionDocument, SessionError> {
    let mut bytes = Vec::new();
    reader
        .read_to_end(&mut bytes)
        .map_err(|source| SessionError::Storage {
            path: PathBuf::from("<stream>"),
            source,
        })?;
    load_from_slice(&bytes)
}

pub fn load_session(path: &Path) -> Result<SessionDocument, SessionError> {
    let bytes = fs::read(path).map_err(|source| SessionError::Storage {
        path: path.to_owned(),
        source,
    })?;
    load_from_slice(&bytes)
}

/// Canonical serialization: pretty JSON with fixed key order and a trailing
/// newline.
pub fn to_canonical_bytes(doc: &SessionDocument) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(doc).expect("documents always serialize");
    bytes.push(b'\n');
    bytes
}

/// Validates and writes the document atomically (temporary file + rename).
pub fn save_session(doc: &SessionDocument, path: &Path) -> Result<(), SessionError> {
    let violations = doc.validate();
    if !violations.is_empty() {
        return Err(SessionError::Validation(violations));
    }
    write_atomic(path, &to_canonical_bytes(doc))
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), SessionError> {
    let storage = |source| SessionError::Storage {
        path: path.to_owned(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(storage)?;
    tmp.write_all(bytes).map_err(storage)?;
    tmp.as_file().sync_all().map_err(storage)?;
    tmp.persist(path).map_err(|e| storage(e.error))?;
    Ok(())
}
