//! The two worked assessments of the university virtual assistant, shipped
//! with the library. The JSON files also live under `fixtures/` in this
//! crate so the CLI and store can be pointed at them directly.

use crate::assessment::AssessmentDocument;

pub const PROMPT_INJECTION_JSON: &str = include_str!("../fixtures/prompt_injection.json");
pub const TRAINING_DATA_POISONING_JSON: &str =
    include_str!("../fixtures/training_data_poisoning.json");

pub fn prompt_injection() -> AssessmentDocument {
    AssessmentDocument::from_json(PROMPT_INJECTION_JSON).expect("bundled fixture parses")
}

pub fn training_data_poisoning() -> AssessmentDocument {
    AssessmentDocument::from_json(TRAINING_DATA_POISONING_JSON).expect("bundled fixture parses")
}

pub fn all() -> Vec<AssessmentDocument> {
    vec![prompt_injection(), training_data_poisoning()]
}
