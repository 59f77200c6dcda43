use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::TriangularFuzzyNumber;

/// The five verbal intensities of the comparison scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Intensity {
    Equal,
    Moderate,
    Strong,
    VeryStrong,
    Extreme,
}

impl Intensity {
    pub const ALL: [Intensity; 5] = [
        Intensity::Equal,
        Intensity::Moderate,
        Intensity::Strong,
        Intensity::VeryStrong,
        Intensity::Extreme,
    ];

    pub fn abbreviation(self) -> &'static str {
        match self {
            Intensity::Equal => "EI",
            Intensity::Moderate => "MI",
            Intensity::Strong => "SI",
            Intensity::VeryStrong => "VSI",
            Intensity::Extreme => "EMI",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Intensity::Equal => "Equal importance",
            Intensity::Moderate => "Moderate importance",
            Intensity::Strong => "Strong importance",
            Intensity::VeryStrong => "Very strong importance",
            Intensity::Extreme => "Extremely more importance",
        }
    }

    /// Crisp intensity 1, 3, 5, 7 or 9.
    pub fn crisp_value(self) -> u8 {
        match self {
            Intensity::Equal => 1,
            Intensity::Moderate => 3,
            Intensity::Strong => 5,
            Intensity::VeryStrong => 7,
            Intensity::Extreme => 9,
        }
    }

    pub fn tfn(self) -> TriangularFuzzyNumber {
        let (l, m, u) = match self {
            Intensity::Equal => (1.0, 1.0, 2.0),
            Intensity::Moderate => (2.0, 3.0, 4.0),
            Intensity::Strong => (4.0, 5.0, 6.0),
            Intensity::VeryStrong => (6.0, 7.0, 8.0),
            Intensity::Extreme => (8.0, 9.0, 10.0),
        };
        TriangularFuzzyNumber::from_ordered(l, m, u)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    /// Row element dominates the column element.
    Direct,
    /// Column element dominates the row element.
    Reciprocal,
}

/// A linguistic judgment such as `SI` or `1/VSI`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinguisticGrade {
    pub intensity: Intensity,
    pub direction: Direction,
}

impl LinguisticGrade {
    pub const fn direct(intensity: Intensity) -> Self {
        Self {
            intensity,
            direction: Direction::Direct,
        }
    }

    pub const fn reciprocal(intensity: Intensity) -> Self {
        Self {
            intensity,
            direction: Direction::Reciprocal,
        }
    }

    /// All ten grades, direct ones first.
    pub fn all() -> impl Iterator<Item = LinguisticGrade> {
        Intensity::ALL
            .into_iter()
            .map(Self::direct)
            .chain(Intensity::ALL.into_iter().map(Self::reciprocal))
    }

    pub fn inverse(self) -> Self {
        match self.direction {
            Direction::Direct => Self::reciprocal(self.intensity),
            Direction::Reciprocal => Self::direct(self.intensity),
        }
    }

    pub fn is_equal_importance(self) -> bool {
        self.intensity == Intensity::Equal
    }

    pub fn tfn(self) -> TriangularFuzzyNumber {
        let base = self.intensity.tfn();
        match self.direction {
            Direction::Direct => base,
            // Scale values are strictly positive.
            Direction::Reciprocal => base.reciprocal().expect("scale triples are positive"),
        }
    }
}

impl fmt::Display for LinguisticGrade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.direction {
            Direction::Direct => f.write_str(self.intensity.abbreviation()),
            Direction::Reciprocal => write!(f, "1/{}", self.intensity.abbreviation()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error(
    "unknown linguistic grade {0:?}; expected one of EI, MI, SI, VSI, EMI or their 1/ reciprocals"
)]
pub struct GradeParseError(pub String);

impl FromStr for LinguisticGrade {
    type Err = GradeParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (direction, abbreviation) = match s.strip_prefix("1/") {
            Some(rest) => (Direction::Reciprocal, rest),
            None => (Direction::Direct, s),
        };
        Intensity::ALL
            .into_iter()
            .find(|i| i.abbreviation() == abbreviation)
            .map(|intensity| LinguisticGrade {
                intensity,
                direction,
            })
            .ok_or_else(|| GradeParseError(s.to_owned()))
    }
}

impl Serialize for LinguisticGrade {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LinguisticGrade {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
