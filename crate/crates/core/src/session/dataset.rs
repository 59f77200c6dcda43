use super::{Precomputed, SessionDocument};
use crate::model::{Aggregation, Node};

const CRITERIA: [(&str, &str, f64); 3] = [
    ("economic", "Economic Prosperity", 0.4532),
    ("quality-of-life", "Quality of Life", 0.3105),
    ("environmental", "Environmental Protection", 0.2363),
];

/// Local priorities per alternative, columns in `CRITERIA` order.
const ALTERNATIVES: [(&str, &str, [f64; 3]); 9] = [
    ("fall-detection", "Fall Detection", [0.109, 0.096, 0.14]),
    ("medical-fridges", "Medical Fridges", [0.084, 0.11, 0.039]),
    ("sportsmen-care", "Sportsmen Care", [0.069, 0.0836, 0.153]),
    (
        "patient-surveillance",
        "Patient Surveillance",
        [0.117, 0.0954, 0.121],
    ),
    (
        "chronic-disease-management",
        "Chronic Disease Management",
        [0.079, 0.104, 0.025],
    ),
    (
        "ultraviolet-radiation",
        "Ultraviolet Radiation",
        [0.193, 0.132, 0.176],
    ),
    (
        "hygienic-hand-control",
        "Hygienic Hand Control",
        [0.098, 0.094, 0.12],
    ),
    ("sleep-control", "Sleep Control", [0.068, 0.143, 0.059]),
    ("dental-health", "Dental Health", [0.183, 0.142, 0.167]),
];

/// The healthcare IoT prioritization study: three sustainability criteria
/// and nine IoT applications, with fixed priorities.
pub fn paper_dataset() -> SessionDocument {
    let mut doc = SessionDocument::new(
        "Prioritize IoT usage in the healthcare sector for sustainable development",
        CRITERIA
            .iter()
            .map(|&(id, name, _)| Node::new(id, name))
            .collect(),
        ALTERNATIVES
            .iter()
            .map(|&(id, name, _)| Node::new(id, name))
            .collect(),
    );
    doc.precomputed = Precomputed {
        criteria_weights: Some(CRITERIA.iter().map(|&(_, _, w)| w).collect()),
        decision_matrix: Some(
            ALTERNATIVES
                .iter()
                .map(|(_, _, row)| row.to_vec())
                .collect(),
        ),
    };
    doc.settings.aggregation = Aggregation::PaperMean;
    doc
}
