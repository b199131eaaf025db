//! Inputs shared by the criterion benches.

use llmrisk_core::{fixtures, AssessmentDocument, FactorAssignment, RatingScheme};

/// The sixteen assignments of the prompt-injection worked example.
pub fn prompt_injection_assignments() -> Vec<FactorAssignment> {
    fixtures::prompt_injection().assignments()
}

/// `n` evaluated copies of the two worked assessments, re-targeted so that
/// each threat of a ten-entry catalog gets at most one document.
pub fn spread_assessments(n: usize) -> Vec<AssessmentDocument> {
    let base = fixtures::all();
    (0..n.min(10))
        .map(|i| {
            let mut doc = base[i % 2].clone();
            doc.id = format!("bench_{i:02}");
            doc.threat = format!("LLM{:02}", i + 1);
            doc
        })
        .collect()
}

pub fn scheme() -> RatingScheme {
    RatingScheme::bundled()
}
