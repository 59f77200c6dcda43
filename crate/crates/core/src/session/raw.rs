use std::collections::{BTreeMap, HashSet};

use serde::Deserialize;

use super::{
    JudgmentSet, Judgments, Precomputed, ResultsCache, SessionDocument, SessionError, Settings,
    Violation, CRITERIA_NODE, CRITERIA_WEIGHT_TOLERANCE, CURRENT_VERSION, PAPER_SCALE,
};
use crate::extent::Cell;
use crate::model::{Hierarchy, Node, PRINTED_COLUMN_TOLERANCE};

/// The document as written, before grade strings, cell keys and setting
/// names are interpreted.
#[derive(Deserialize)]
struct RawDocument {
    #[serde(default)]
    goal: String,
    #[serde(default)]
    criteria: Vec<Node>,
    #[serde(default)]
    alternatives: Vec<Node>,
    #[serde(default)]
    judgments: RawJudgments,
    #[serde(default)]
    precomputed: Precomputed,
    #[serde(default)]
    settings: RawSettings,
    #[serde(default)]
    results: Option<ResultsCache>,
}

#[derive(Deserialize, Default)]
struct RawJudgments {
    #[serde(default)]
    criteria: BTreeMap<String, String>,
    #[serde(default)]
    alternatives: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Deserialize, Default)]
struct RawSettings {
    aggregation: Option<String>,
    scale: Option<String>,
}

pub(super) fn parse(bytes: &[u8]) -> Result<SessionDocument, SessionError> {
    let value: serde_json::Value =
        serde_json::from_slice(bytes).map_err(|e| SessionError::Parse(e.to_string()))?;
    if !value.is_object() {
        return Err(SessionError::Parse("document must be a JSON object".into()));
    }
    match value.get("version") {
        Some(v) if v.as_u64() == Some(CURRENT_VERSION) => {}
        Some(v) => return Err(SessionError::Version(v.to_string())),
        None => return Err(SessionError::Version("<missing>".into())),
    }
    let raw: RawDocument =
        serde_json::from_value(value).map_err(|e| SessionError::Parse(e.to_string()))?;

    let mut violations = Vec::new();
    let judgments = Judgments {
        criteria: parse_cells(
            &raw.judgments.criteria,
            "judgments.criteria",
            &mut violations,
        ),
        alternatives: raw
            .judgments
            .alternatives
            .iter()
            .map(|(node, cells)| {
                let path = format!("judgments.alternatives.{node}");
                (node.clone(), parse_cells(cells, &path, &mut violations))
            })
            .collect(),
    };
    let aggregation = match raw.settings.aggregation.as_deref() {
        None => Default::default(),
        Some(s) => s.parse().unwrap_or_else(|msg: String| {
            violations.push(Violation::new("settings.aggregation", msg));
            Default::default()
        }),
    };
    let doc = SessionDocument {
        version: CURRENT_VERSION,
        hierarchy: Hierarchy {
            goal: raw.goal,
            criteria: raw.criteria,
            alternatives: raw.alternatives,
        },
        judgments,
        precomputed: raw.precomputed,
        settings: Settings {
            aggregation,
            scale: raw.settings.scale.unwrap_or_else(|| PAPER_SCALE.to_owned()),
        },
        results: raw.results,
    };
    violations.extend(validate(&doc));
    if violations.is_empty() {
        Ok(doc)
    } else {
        Err(SessionError::Validation(violations))
    }
}

fn parse_cells(
    cells: &BTreeMap<String, String>,
    path: &str,
    violations: &mut Vec<Violation>,
) -> JudgmentSet {
    let mut set = JudgmentSet::new();
    for (key, grade) in cells {
        let cell_path = format!("{path}[\"{key}\"]");
        let cell = match key.parse::<Cell>() {
            Ok(c) => c,
            Err(e) => {
                violations.push(Violation::new(cell_path, e.to_string()));
                continue;
            }
        };
        match grade.parse() {
            Ok(g) => {
                if set.insert(cell, g).is_some() {
                    violations.push(Violation::new(
                        cell_path,
                        format!("cell {cell} is given twice"),
                    ));
                }
            }
            Err(e) => violations.push(Violation::new(cell_path, format!("{e}"))),
        }
    }
    set
}

fn check_ids(nodes: &[Node], level: &str, violations: &mut Vec<Violation>) {
    if nodes.is_empty() {
        violations.push(Violation::new(
            level,
            format!("at least one entry is required in {level}"),
        ));
    }
    let mut seen = HashSet::new();
    for (i, node) in nodes.iter().enumerate() {
        let path = format!("{level}[{i}].id");
        if node.id.trim().is_empty() {
            violations.push(Violation::new(path, "id must not be empty"));
        } else if !seen.insert(node.id.as_str()) {
            violations.push(Violation::new(path, format!("duplicate id {:?}", node.id)));
        }
    }
}

fn check_cells(set: &JudgmentSet, n: usize, path: &str, violations: &mut Vec<Violation>) {
    for cell in set.keys() {
        if cell.row >= cell.col {
            violations.push(Violation::new(
                format!("{path}[\"{cell}\"]"),
                "only strict upper-triangle cells (row < col) may be judged",
            ));
        } else if cell.col >= n {
            violations.push(Violation::new(
                format!("{path}[\"{cell}\"]"),
                format!("cell is outside the {n}x{n} matrix"),
            ));
        }
    }
}

fn check_unit_interval(value: f64, path: String, violations: &mut Vec<Violation>) {
    if !(0.0..=1.0).contains(&value) {
        violations.push(Violation::new(
            path,
            format!("value {value} is outside [0, 1]"),
        ));
    }
}

/// Semantic checks on an already typed document.
pub(super) fn validate(doc: &SessionDocument) -> Vec<Violation> {
    let mut violations = Vec::new();
    let h = &doc.hierarchy;
    if doc.version != CURRENT_VERSION {
        violations.push(Violation::new(
            "version",
            format!("expected {CURRENT_VERSION}"),
        ));
    }
    check_ids(&h.criteria, "criteria", &mut violations);
    check_ids(&h.alternatives, "alternatives", &mut violations);
    if let Some(i) = h.criteria.iter().position(|c| c.id == CRITERIA_NODE) {
        violations.push(Violation::new(
            format!("criteria[{i}].id"),
            format!("{CRITERIA_NODE:?} is reserved for the criteria comparison node"),
        ));
    }
    if doc.settings.scale != PAPER_SCALE {
        violations.push(Violation::new(
            "settings.scale",
            format!(
                "unknown scale {:?}; only {PAPER_SCALE:?} is supported",
                doc.settings.scale
            ),
        ));
    }

    let (nc, na) = (h.criteria.len(), h.alternatives.len());
    check_cells(
        &doc.judgments.criteria,
        nc,
        "judgments.criteria",
        &mut violations,
    );
    for (node, set) in &doc.judgments.alternatives {
        let path = format!("judgments.alternatives.{node}");
        if h.criterion_index(node).is_none() {
            violations.push(Violation::new(path, format!("unknown criterion {node:?}")));
            continue;
        }
        check_cells(set, na, &path, &mut violations);
    }

    if let Some(weights) = &doc.precomputed.criteria_weights {
        let path = "precomputed.criteria_weights";
        if !doc.judgments.criteria.is_empty() {
            violations.push(Violation::new(
                path,
                "criteria priorities are given both as judgments and precomputed",
            ));
        }
        if weights.len() != nc {
            violations.push(Violation::new(
                path,
                format!("expected {nc} weights, found {}", weights.len()),
            ));
        }
        for (i, &w) in weights.iter().enumerate() {
            check_unit_interval(w, format!("{path}[{i}]"), &mut violations);
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > CRITERIA_WEIGHT_TOLERANCE {
            violations.push(Violation::new(
                path,
                format!("weights sum to {sum}, expected 1 within {CRITERIA_WEIGHT_TOLERANCE}"),
            ));
        }
    }

    if let Some(grid) = &doc.precomputed.decision_matrix {
        let path = "precomputed.decision_matrix";
        for node in doc.judgments.alternatives.keys() {
            violations.push(Violation::new(
                format!("judgments.alternatives.{node}"),
                "alternative priorities are given both as judgments and a precomputed decision matrix",
            ));
        }
        if grid.len() != na {
            violations.push(Violation::new(
                path,
                format!(
                    "expected {na} rows (one per alternative), found {}",
                    grid.len()
                ),
            ));
        }
        let mut well_shaped = grid.len() == na;
        for (r, row) in grid.iter().enumerate() {
            if row.len() != nc {
                well_shaped = false;
                violations.push(Violation::new(
                    format!("{path}[{r}]"),
                    format!(
                        "expected {nc} columns (one per criterion), found {}",
                        row.len()
                    ),
                ));
            }
            for (c, &v) in row.iter().enumerate() {
                check_unit_interval(v, format!("{path}[{r}][{c}]"), &mut violations);
            }
        }
        if well_shaped {
            for (c, criterion) in h.criteria.iter().enumerate() {
                let sum: f64 = grid.iter().map(|row| row[c]).sum();
                if (sum - 1.0).abs() > PRINTED_COLUMN_TOLERANCE {
                    violations.push(Violation::new(
                        format!("{path}[*][{c}]"),
                        format!(
                            "column for {} sums to {sum}, expected 1 within {PRINTED_COLUMN_TOLERANCE}",
                            criterion.id
                        ),
                    ));
                }
            }
        }
    }
    violations
}
