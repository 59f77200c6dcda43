//! Crisp consistency ratio of a fuzzy comparison matrix.

use serde::{Deserialize, Serialize};

use crate::extent::FuzzyComparisonMatrix;

/// Random consistency index for orders 1 through 10.
pub const RANDOM_INDEX: [f64; 10] = [0.0, 0.0, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41, 1.45, 1.49];

/// Ratios at or below this are conventionally acceptable.
pub const ACCEPTABLE_RATIO: f64 = 0.10;

const POWER_TOLERANCE: f64 = 1e-10;
const POWER_MAX_ITERATIONS: usize = 1000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConsistencyError {
    #[error("no random index for a matrix of order {0}; at most 10 is supported")]
    UnsupportedOrder(usize),
    #[error("power iteration did not converge within {0} iterations")]
    NoConvergence(usize),
    #[error("matrix entries must be positive and finite")]
    NonPositive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrReport {
    pub n: usize,
    pub lambda_max: f64,
    pub consistency_index: f64,
    pub consistency_ratio: f64,
    pub acceptable: bool,
}

/// Defuzzifies the upper triangle by centroid and mirrors exact crisp
/// reciprocals into the lower triangle.
pub fn crisp_matrix(matrix: &FuzzyComparisonMatrix) -> Vec<Vec<f64>> {
    let n = matrix.order();
    let mut crisp = vec![vec![1.0; n]; n];
    for row in 0..n {
        for col in row + 1..n {
            let value = matrix.entry(row, col).centroid();
            crisp[row][col] = value;
            crisp[col][row] = 1.0 / value;
        }
    }
    crisp
}

/// Principal eigenvalue and eigenvector of a positive square matrix.
///
/// Starts from the uniform vector and rescales by the largest component each
/// step; the returned vector has maximum component 1.
pub fn principal_eigen(matrix: &[Vec<f64>]) -> Result<(f64, Vec<f64>), ConsistencyError> {
    let n = matrix.len();
    if matrix
        .iter()
        .flatten()
        .any(|&x| !(x.is_finite() && x > 0.0))
    {
        return Err(ConsistencyError::NonPositive);
    }
    let mut vector = vec![1.0; n];
    let mut lambda = f64::NAN;
    for _ in 0..POWER_MAX_ITERATIONS {
        let product: Vec<f64> = matrix
            .iter()
            .map(|row| row.iter().zip(&vector).map(|(a, x)| a * x).sum())
            .collect();
        let scale = product.iter().copied().fold(f64::MIN, f64::max);
        let next: Vec<f64> = product.iter().map(|p| p / scale).collect();
        let shift = next
            .iter()
            .zip(&vector)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let settled = (scale - lambda).abs() <= POWER_TOLERANCE * scale.max(1.0);
        lambda = scale;
        vector = next;
        if settled && shift <= POWER_TOLERANCE {
            return Ok((lambda, vector));
        }
    }
    Err(ConsistencyError::NoConvergence(POWER_MAX_ITERATIONS))
}

/// Consistency report of an already crisp reciprocal matrix.
pub fn consistency_of_crisp(matrix: &[Vec<f64>]) -> Result<CrReport, ConsistencyError> {
    let n = matrix.len();
    if n > RANDOM_INDEX.len() {
        return Err(ConsistencyError::UnsupportedOrder(n));
    }
    let (lambda_max, _) = principal_eigen(matrix)?;
    let (consistency_index, consistency_ratio) = if n <= 2 {
        (0.0, 0.0)
    } else {
        let ci = (lambda_max - n as f64) / (n as f64 - 1.0);
        (ci, ci / RANDOM_INDEX[n - 1])
    };
    Ok(CrReport {
        n,
        lambda_max,
        consistency_index,
        consistency_ratio,
        acceptable: consistency_ratio <= ACCEPTABLE_RATIO,
    })
}

pub fn crisp_consistency_ratio(
    matrix: &FuzzyComparisonMatrix,
) -> Result<CrReport, ConsistencyError> {
    let n = matrix.order();
    if n > RANDOM_INDEX.len() {
        return Err(ConsistencyError::UnsupportedOrder(n));
    }
    consistency_of_crisp(&crisp_matrix(matrix))
}
