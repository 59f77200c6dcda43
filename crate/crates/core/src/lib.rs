//! Fuzzy analytic hierarchy process engine.
//!
//! Judgments are made on a five-grade linguistic scale and mapped to
//! triangular fuzzy numbers. Each comparison matrix is reduced to crisp
//! priorities by extent analysis; criteria priorities and per-criterion
//! alternative priorities are then combined into a ranking.

pub mod consistency;
pub mod engine;
pub mod export;
pub mod extent;
pub mod fuzzy;
pub mod model;
pub mod sensitivity;
pub mod session;

pub use consistency::{crisp_consistency_ratio, CrReport};
pub use extent::{extent_weights, Cell, FuzzyComparisonMatrix, WeightVector};
pub use fuzzy::{LinguisticGrade, TriangularFuzzyNumber};
pub use model::{Aggregation, DecisionMatrix, Hierarchy, Node, RankingResult};
pub use session::{paper_dataset, SessionDocument};
