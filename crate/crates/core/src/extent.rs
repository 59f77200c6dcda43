//! Weight derivation by extent analysis.
//!
//! Each row of a fuzzy comparison matrix is summed and scaled by the inverse
//! of the matrix-wide sum, giving one synthetic extent per element. Elements
//! are then scored by the least degree of possibility that their extent is
//! at least as large as any other, and those scores are normalized.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::fuzzy::{sorted_sum, FuzzyError, LinguisticGrade, TriangularFuzzyNumber};

const RECIPROCITY_TOLERANCE: f64 = 1e-9;

/// Zero-based position of a comparison, written `(row,col)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }

    /// All strict upper-triangle cells of an `n × n` matrix, row-major.
    pub fn upper_triangle(n: usize) -> impl Iterator<Item = Cell> {
        (0..n).flat_map(move |row| (row + 1..n).map(move |col| Cell { row, col }))
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed cell key {0:?}; expected \"(row,col)\"")]
pub struct CellParseError(pub String);

impl FromStr for Cell {
    type Err = CellParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || CellParseError(s.to_owned());
        let inner = s
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(err)?;
        let (row, col) = inner.split_once(',').ok_or_else(err)?;
        let parse = |p: &str| {
            let p = p.trim();
            if p.is_empty() || !p.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err());
            }
            p.parse::<usize>().map_err(|_| err())
        };
        Ok(Cell::new(parse(row)?, parse(col)?))
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Cell {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MatrixError {
    #[error("comparison matrix needs at least one element")]
    Empty,
    #[error("matrix has {rows} rows but {labels} labels")]
    Shape { labels: usize, rows: usize },
    #[error("cell {cell}: {reason}")]
    InvalidCell { cell: Cell, reason: String },
    #[error("judgment at {cell} lies outside the strict upper triangle of a {n}x{n} matrix")]
    OutsideUpperTriangle { cell: Cell, n: usize },
    #[error("missing judgments for cells {}", list_cells(.missing))]
    Incomplete { missing: Vec<Cell> },
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
}

fn list_cells(cells: &[Cell]) -> String {
    cells
        .iter()
        .map(Cell::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

/// A reciprocal `n × n` matrix of triangular fuzzy judgments.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyComparisonMatrix {
    labels: Vec<String>,
    entries: Vec<Vec<TriangularFuzzyNumber>>,
}

impl FuzzyComparisonMatrix {
    /// Builds a matrix from upper-triangle linguistic judgments. The diagonal
    /// is crisp 1 and the lower triangle holds the reciprocals, so the result
    /// is reciprocal by construction. Every upper cell must be judged.
    pub fn from_judgments(
        labels: Vec<String>,
        judgments: &BTreeMap<Cell, LinguisticGrade>,
    ) -> Result<Self, MatrixError> {
        let n = labels.len();
        if n == 0 {
            return Err(MatrixError::Empty);
        }
        if let Some(&cell) = judgments.keys().find(|c| c.row >= c.col || c.col >= n) {
            return Err(MatrixError::OutsideUpperTriangle { cell, n });
        }
        let missing: Vec<Cell> = Cell::upper_triangle(n)
            .filter(|c| !judgments.contains_key(c))
            .collect();
        if !missing.is_empty() {
            return Err(MatrixError::Incomplete { missing });
        }
        let mut entries = vec![vec![TriangularFuzzyNumber::ONE; n]; n];
        for (cell, grade) in judgments {
            let value = grade.tfn();
            entries[cell.row][cell.col] = value;
            entries[cell.col][cell.row] = value.reciprocal()?;
        }
        Ok(Self { labels, entries })
    }

    /// Builds a matrix from explicit entries, checking the unit diagonal,
    /// positivity and reciprocity (within `1e-9`).
    pub fn from_entries(
        labels: Vec<String>,
        entries: Vec<Vec<TriangularFuzzyNumber>>,
    ) -> Result<Self, MatrixError> {
        let n = labels.len();
        if n == 0 {
            return Err(MatrixError::Empty);
        }
        if entries.len() != n {
            return Err(MatrixError::Shape {
                labels: n,
                rows: entries.len(),
            });
        }
        for (row, values) in entries.iter().enumerate() {
            if values.len() != n {
                return Err(MatrixError::InvalidCell {
                    cell: Cell::new(row, values.len().min(n)),
                    reason: format!("row has {} entries, expected {n}", values.len()),
                });
            }
        }
        let invalid = |row, col, reason: String| MatrixError::InvalidCell {
            cell: Cell::new(row, col),
            reason,
        };
        for row in 0..n {
            for col in 0..n {
                let e = entries[row][col];
                if !(e.lower <= e.middle && e.middle <= e.upper) || !e.upper.is_finite() {
                    return Err(invalid(
                        row,
                        col,
                        format!("{e} is not an ordered finite triple"),
                    ));
                }
                if !e.is_positive() {
                    return Err(invalid(
                        row,
                        col,
                        format!("{e} has a non-positive lower bound"),
                    ));
                }
                if row == col {
                    if !e.approx_eq(&TriangularFuzzyNumber::ONE, RECIPROCITY_TOLERANCE) {
                        return Err(invalid(
                            row,
                            col,
                            format!("diagonal entry {e} must be (1,1,1)"),
                        ));
                    }
                } else if row < col {
                    let expected = e.reciprocal()?;
                    let mirror = entries[col][row];
                    if !mirror.approx_eq(&expected, RECIPROCITY_TOLERANCE) {
                        return Err(invalid(
                            col,
                            row,
                            format!("{mirror} is not the reciprocal of {e} at ({row},{col})"),
                        ));
                    }
                }
            }
        }
        Ok(Self { labels, entries })
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn entry(&self, row: usize, col: usize) -> TriangularFuzzyNumber {
        self.entries[row][col]
    }

    pub fn rows(&self) -> &[Vec<TriangularFuzzyNumber>] {
        &self.entries
    }

    /// Whether any off-diagonal entry is the equal-importance triple or its
    /// reciprocal.
    pub fn has_equal_importance(&self) -> bool {
        let equal = crate::fuzzy::Intensity::Equal.tfn();
        let inverse = equal.reciprocal().expect("positive");
        (0..self.order()).any(|row| {
            (0..self.order()).any(|col| {
                row != col && {
                    let e = self.entries[row][col];
                    e == equal || e == inverse
                }
            })
        })
    }

    /// Relabels and reorders the matrix so that new position `i` holds old
    /// element `permutation[i]`.
    pub fn permuted(&self, permutation: &[usize]) -> Self {
        let labels = permutation
            .iter()
            .map(|&p| self.labels[p].clone())
            .collect();
        let entries = permutation
            .iter()
            .map(|&r| permutation.iter().map(|&c| self.entries[r][c]).collect())
            .collect();
        Self { labels, entries }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagnosticKind {
    ZeroWeight,
    EiAsymmetry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub message: String,
}

impl Diagnostic {
    pub fn zero_weight(label: &str) -> Self {
        Self {
            kind: DiagnosticKind::ZeroWeight,
            label: Some(label.to_owned()),
            message: format!(
                "{label} receives zero weight: another element dominates it completely"
            ),
        }
    }

    pub fn ei_asymmetry() -> Self {
        Self {
            kind: DiagnosticKind::EiAsymmetry,
            label: None,
            message: "equal-importance judgments use the asymmetric triple (1,1,2), \
                      so they are not their own reciprocal"
                .to_owned(),
        }
    }
}

/// Normalized priorities of the children of one hierarchy node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    pub labels: Vec<String>,
    pub weights: Vec<f64>,
    #[serde(default)]
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WeightError {
    #[error("{labels} labels but {weights} weights")]
    Length { labels: usize, weights: usize },
    #[error("weight {value} for {label} is outside [0, 1]")]
    OutOfRange { label: String, value: f64 },
    #[error("weights sum to {sum}, expected 1 within {tolerance}")]
    Sum { sum: f64, tolerance: f64 },
}

impl WeightVector {
    /// Wraps externally supplied priorities, checking range and that they sum
    /// to 1 within `tolerance`. Values are kept verbatim.
    pub fn from_values(
        labels: Vec<String>,
        weights: Vec<f64>,
        tolerance: f64,
    ) -> Result<Self, WeightError> {
        if labels.len() != weights.len() {
            return Err(WeightError::Length {
                labels: labels.len(),
                weights: weights.len(),
            });
        }
        for (label, &value) in labels.iter().zip(&weights) {
            if !(0.0..=1.0).contains(&value) {
                return Err(WeightError::OutOfRange {
                    label: label.clone(),
                    value,
                });
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > tolerance {
            return Err(WeightError::Sum { sum, tolerance });
        }
        Ok(Self {
            labels,
            weights,
            diagnostics: Vec::new(),
        })
    }

    pub fn uniform(labels: Vec<String>) -> Self {
        let w = 1.0 / labels.len() as f64;
        let weights = vec![w; labels.len()];
        Self {
            labels,
            weights,
            diagnostics: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.weights[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.labels
            .iter()
            .map(String::as_str)
            .zip(self.weights.iter().copied())
    }
}

/// Intermediate quantities of one extent-analysis run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtentAnalysis {
    pub extents: Vec<TriangularFuzzyNumber>,
    /// Minimum degree of possibility of each extent over all others,
    /// before normalization.
    pub min_possibility: Vec<f64>,
    pub weights: WeightVector,
}

/// Fuzzy synthetic extent of every row.
pub fn synthetic_extents(
    matrix: &FuzzyComparisonMatrix,
) -> Result<Vec<TriangularFuzzyNumber>, FuzzyError> {
    let row_sums: Vec<TriangularFuzzyNumber> = matrix
        .rows()
        .iter()
        .map(TriangularFuzzyNumber::sum)
        .collect();
    let inverse_total = TriangularFuzzyNumber::sum(&row_sums).reciprocal()?;
    row_sums.iter().map(|s| s.try_mul(&inverse_total)).collect()
}

/// Degree of possibility that `a ≥ b`.
pub fn possibility(a: &TriangularFuzzyNumber, b: &TriangularFuzzyNumber) -> f64 {
    if a.middle >= b.middle {
        1.0
    } else if b.lower >= a.upper {
        0.0
    } else {
        // The denominator is strictly negative in this branch.
        (b.lower - a.upper) / ((a.middle - a.upper) - (b.middle - b.lower))
    }
}

/// For each extent, the smallest possibility that it is at least every other.
pub fn min_possibility(extents: &[TriangularFuzzyNumber]) -> Vec<f64> {
    if extents.len() == 1 {
        return vec![1.0];
    }
    extents
        .iter()
        .enumerate()
        .map(|(i, si)| {
            extents
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .map(|(_, sk)| possibility(si, sk))
                .fold(1.0, f64::min)
        })
        .collect()
}

/// Runs the full extent analysis and keeps the intermediate values.
pub fn analyze(matrix: &FuzzyComparisonMatrix) -> Result<ExtentAnalysis, FuzzyError> {
    let extents = synthetic_extents(matrix)?;
    let min_possibility = min_possibility(&extents);
    // At least one element has the largest middle value and so scores 1.
    let total = sorted_sum(min_possibility.clone());
    let weights: Vec<f64> = min_possibility.iter().map(|d| d / total).collect();

    let mut diagnostics: Vec<Diagnostic> = matrix
        .labels()
        .iter()
        .zip(&weights)
        .filter(|(_, &w)| w == 0.0)
        .map(|(label, _)| Diagnostic::zero_weight(label))
        .collect();
    if matrix.has_equal_importance() {
        diagnostics.push(Diagnostic::ei_asymmetry());
    }

    Ok(ExtentAnalysis {
        extents,
        min_possibility,
        weights: WeightVector {
            labels: matrix.labels().to_vec(),
            weights,
            diagnostics,
        },
    })
}

/// Normalized weights of the matrix elements.
pub fn extent_weights(matrix: &FuzzyComparisonMatrix) -> Result<WeightVector, FuzzyError> {
    analyze(matrix).map(|a| a.weights)
}
