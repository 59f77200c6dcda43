//! Triangular fuzzy numbers and the linguistic comparison scale.

mod scale;

use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

pub use scale::{Direction, GradeParseError, Intensity, LinguisticGrade};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FuzzyError {
    #[error("bounds must satisfy lower <= middle <= upper, got ({0}, {1}, {2})")]
    Unordered(f64, f64, f64),
    #[error("bounds must be finite, got ({0}, {1}, {2})")]
    NonFinite(f64, f64, f64),
    #[error("operation requires a strictly positive lower bound, got {0}")]
    NonPositive(f64),
}

/// A triangular fuzzy number `(lower, middle, upper)`.
///
/// Membership rises linearly from `lower` to a peak of 1 at `middle` and falls
/// back to 0 at `upper`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangularFuzzyNumber {
    pub lower: f64,
    pub middle: f64,
    pub upper: f64,
}

impl TriangularFuzzyNumber {
    pub const ZERO: Self = Self::crisp(0.0);
    pub const ONE: Self = Self::crisp(1.0);

    pub fn new(lower: f64, middle: f64, upper: f64) -> Result<Self, FuzzyError> {
        if !(lower.is_finite() && middle.is_finite() && upper.is_finite()) {
            return Err(FuzzyError::NonFinite(lower, middle, upper));
        }
        if !(lower <= middle && middle <= upper) {
            return Err(FuzzyError::Unordered(lower, middle, upper));
        }
        Ok(Self {
            lower,
            middle,
            upper,
        })
    }

    /// A degenerate triangle concentrated on a single value.
    pub const fn crisp(value: f64) -> Self {
        Self {
            lower: value,
            middle: value,
            upper: value,
        }
    }

    /// Builds a number without checking the ordering. Callers guarantee it.
    pub(crate) const fn from_ordered(lower: f64, middle: f64, upper: f64) -> Self {
        Self {
            lower,
            middle,
            upper,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.lower > 0.0
    }

    fn require_positive(&self) -> Result<(), FuzzyError> {
        if self.is_positive() {
            Ok(())
        } else {
            Err(FuzzyError::NonPositive(self.lower))
        }
    }

    /// Componentwise product, the usual approximation for positive operands.
    pub fn try_mul(&self, other: &Self) -> Result<Self, FuzzyError> {
        self.require_positive()?;
        other.require_positive()?;
        Ok(Self::from_ordered(
            self.lower * other.lower,
            self.middle * other.middle,
            self.upper * other.upper,
        ))
    }

    /// `(1/upper, 1/middle, 1/lower)`.
    pub fn reciprocal(&self) -> Result<Self, FuzzyError> {
        self.require_positive()?;
        Ok(Self::from_ordered(
            1.0 / self.upper,
            1.0 / self.middle,
            1.0 / self.lower,
        ))
    }

    /// Degree of membership of `x`, in `[0, 1]`.
    pub fn membership(&self, x: f64) -> f64 {
        let Self {
            lower,
            middle,
            upper,
        } = *self;
        if x == middle {
            1.0
        } else if x < lower || x > upper {
            0.0
        } else if x < middle {
            (x - lower) / (middle - lower)
        } else {
            (upper - x) / (upper - middle)
        }
    }

    /// Centroid `(lower + middle + upper) / 3`.
    pub fn centroid(&self) -> f64 {
        (self.lower + self.middle + self.upper) / 3.0
    }

    /// Fuzzy sum of many numbers.
    ///
    /// Each component is summed in ascending order, so the result does not
    /// depend on the order of the inputs.
    pub fn sum<'a, I>(terms: I) -> Self
    where
        I: IntoIterator<Item = &'a Self>,
    {
        let (mut lower, mut middle, mut upper): (Vec<f64>, Vec<f64>, Vec<f64>) =
            (vec![], vec![], vec![]);
        for t in terms {
            lower.push(t.lower);
            middle.push(t.middle);
            upper.push(t.upper);
        }
        Self::from_ordered(sorted_sum(lower), sorted_sum(middle), sorted_sum(upper))
    }

    pub fn approx_eq(&self, other: &Self, tolerance: f64) -> bool {
        (self.lower - other.lower).abs() <= tolerance
            && (self.middle - other.middle).abs() <= tolerance
            && (self.upper - other.upper).abs() <= tolerance
    }
}

pub(crate) fn sorted_sum(mut values: Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    values.into_iter().sum()
}

impl Add for TriangularFuzzyNumber {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self::from_ordered(
            self.lower + rhs.lower,
            self.middle + rhs.middle,
            self.upper + rhs.upper,
        )
    }
}

impl fmt::Display for TriangularFuzzyNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.lower, self.middle, self.upper)
    }
}
