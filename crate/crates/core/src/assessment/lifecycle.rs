use super::{has_treatment, section_issues, AssessmentDocument, Status, INCOMPLETE};
use crate::error::{Error, Result};
use crate::rating::RatingScheme;

/// Moves a document one step along
/// identified → analyzed → evaluated → treated → monitored.
///
/// Entry guards: `analyzed` needs all three analysis sections, `evaluated`
/// needs a complete and well-formed factor assignment, `treated` needs a
/// recorded control adjustment or an acceptance note.
pub fn advance_status(
    doc: &AssessmentDocument,
    target: Status,
    scheme: &RatingScheme,
) -> Result<AssessmentDocument> {
    if doc.status.next() != Some(target) {
        return Err(Error::Sequencing {
            from: doc.status.to_string(),
            to: target.to_string(),
        });
    }
    if let Some(guard) = unmet_guard(doc, target, scheme) {
        return Err(Error::GuardUnmet {
            target: target.to_string(),
            guard,
        });
    }
    let mut next = doc.clone();
    next.status = target;
    next.revision = doc.revision + 1;
    Ok(next)
}

fn unmet_guard(doc: &AssessmentDocument, target: Status, scheme: &RatingScheme) -> Option<String> {
    if target >= Status::Analyzed && !doc.has_all_sections() {
        return Some(
            "scenario analysis, dependency mapping and impact analysis must all be present"
                .to_string(),
        );
    }
    if target == Status::Evaluated {
        let issues = section_issues(doc, scheme);
        if let Some(first) = issues.first() {
            let missing: Vec<_> = issues
                .iter()
                .filter(|i| i.code == INCOMPLETE)
                .filter_map(|i| i.locus.clone())
                .collect();
            return Some(if missing.is_empty() {
                first.message.clone()
            } else {
                format!(
                    "all factors must be assigned, missing: {}",
                    missing.join(", ")
                )
            });
        }
    }
    if target == Status::Treated && !has_treatment(doc) {
        return Some("a control adjustment or an acceptance note must be recorded".to_string());
    }
    None
}
