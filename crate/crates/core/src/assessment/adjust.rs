use serde::{Deserialize, Serialize};

use super::{evaluate_document, AssessmentDocument, ControlAdjustment, Derivation};
use crate::error::{Error, Result};
use crate::rating::{FactorAssignment, RatingScheme, RiskRating};
use crate::report::Issue;

/// Outcome of a what-if run: the derived document and both ratings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WhatIf {
    pub before: RiskRating,
    pub after: RiskRating,
    pub document: AssessmentDocument,
}

pub(super) fn adjustment_issues(adj: &ControlAdjustment, scheme: &RatingScheme) -> Vec<Issue> {
    let mut issues = Vec::new();
    for (factor, &score) in &adj.overrides {
        if scheme.factor(factor).is_none() {
            issues.push(
                Issue::new(
                    "unknown_factor",
                    format!(
                        "adjustment `{}` overrides unknown factor `{factor}`",
                        adj.label
                    ),
                )
                .at(factor),
            );
        }
        if score > 9 {
            issues.push(
                Issue::new(
                    "score_out_of_range",
                    format!("adjustment `{}` sets `{factor}` to {score}", adj.label),
                )
                .at(factor),
            );
        }
    }
    issues
}

/// Re-rates `doc` with the adjustment's scores swapped in. The source
/// document is left untouched; the derived one records the adjustment,
/// points back at its source, and carries the next revision number.
pub fn apply_adjustment(
    doc: &AssessmentDocument,
    adjustment: &ControlAdjustment,
    scheme: &RatingScheme,
) -> Result<WhatIf> {
    for (factor, &score) in &adjustment.overrides {
        if scheme.factor(factor).is_none() {
            return Err(Error::UnknownFactor(factor.clone()));
        }
        if score > 9 {
            return Err(Error::ScoreOutOfRange {
                factor: factor.clone(),
                score: score.into(),
            });
        }
    }

    let before = evaluate_document(doc, scheme)?;

    let mut derived = doc.clone();
    for (factor, &score) in &adjustment.overrides {
        let def = scheme.factor(factor).expect("checked above");
        let label = def.anchor_label(score).map(str::to_string);
        let section = derived.section_mut(def.category);
        let rationale = if adjustment.note.is_empty() {
            format!("what-if: {}", adjustment.label)
        } else {
            adjustment.note.clone()
        };
        match section.iter_mut().find(|a| &a.factor_id == factor) {
            Some(existing) => {
                existing.score = score;
                existing.anchor_label = label;
                existing.rationale = rationale;
            }
            None => section.push(FactorAssignment {
                factor_id: factor.clone(),
                score,
                anchor_label: label,
                rationale,
            }),
        }
    }
    derived.adjustments.push(adjustment.clone());
    derived.revision = doc.revision + 1;
    derived.derived_from = Some(Derivation {
        document: doc.id.clone(),
        revision: doc.revision,
        adjustment: adjustment.label.clone(),
    });

    let after = evaluate_document(&derived, scheme)?;
    Ok(WhatIf {
        before,
        after,
        document: derived,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::fixtures;
    use crate::rating::{Level, Severity};
    use crate::rational::Rational;

    fn robust_filtering() -> ControlAdjustment {
        ControlAdjustment {
            label: "Robust prompt validation and filtering".into(),
            overrides: BTreeMap::from([
                ("ease_of_exploit".to_string(), 3),
                ("ease_of_discovery".to_string(), 3),
            ]),
            note: String::new(),
        }
    }

    #[test]
    fn hardened_filter_lowers_likelihood_only() {
        // hand mean: 6+4+7+6 + 3+3+9+8 = 46, 46/8 = 5.75
        let scores = [6i64, 4, 7, 6, 3, 3, 9, 8];
        let oracle = Rational::new(scores.iter().sum(), 8);
        assert_eq!(oracle, Rational::new(23, 4));

        let doc = fixtures::prompt_injection();
        let out = apply_adjustment(&doc, &robust_filtering(), &RatingScheme::bundled()).unwrap();
        assert_eq!(out.before.likelihood_score, Rational::new(27, 4));
        assert_eq!(out.after.likelihood_score, oracle);
        assert_eq!(out.after.likelihood_level, Level::Medium);
        assert_eq!(out.after.final_impact_score, Rational::new(9, 2));
        assert_eq!(out.after.severity, Severity::Medium);
        assert_eq!(
            out.before.technical_impact_score,
            out.after.technical_impact_score
        );
        assert_eq!(
            out.before.business_impact_score,
            out.after.business_impact_score
        );

        assert_eq!(doc, fixtures::prompt_injection());
        assert!(out.document.revision > doc.revision);
        let derivation = out.document.derived_from.as_ref().unwrap();
        assert_eq!(
            derivation.adjustment,
            "Robust prompt validation and filtering"
        );
        let eoe = out
            .document
            .assignments()
            .into_iter()
            .find(|a| a.factor_id == "ease_of_exploit")
            .unwrap();
        assert_eq!(eoe.anchor_label.as_deref(), Some("Difficult"));
    }

    #[test]
    fn empty_adjustment_is_identity() {
        let doc = fixtures::training_data_poisoning();
        let out = apply_adjustment(
            &doc,
            &ControlAdjustment {
                label: "noop".into(),
                ..Default::default()
            },
            &RatingScheme::bundled(),
        )
        .unwrap();
        assert_eq!(out.before, out.after);
    }

    #[test]
    fn unknown_override_rejected() {
        let adj = ControlAdjustment {
            label: "bogus".into(),
            overrides: BTreeMap::from([("luck".to_string(), 1)]),
            note: String::new(),
        };
        let err = apply_adjustment(
            &fixtures::prompt_injection(),
            &adj,
            &RatingScheme::bundled(),
        )
        .unwrap_err();
        assert_eq!(err.code(), "unknown_factor");
    }
}
