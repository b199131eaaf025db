//! Assessment documents: scenario analysis, dependency mapping and impact
//! analysis for one threat, plus lifecycle state and what-if adjustments.

mod adjust;
mod lifecycle;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, StakeholderGroup};
use crate::error::{Error, Result};
use crate::rating::{self, FactorAssignment, FactorCategory, RatingScheme, RiskRating};
use crate::report::{Issue, ValidationReport};

pub use adjust::{apply_adjustment, WhatIf};
pub use lifecycle::advance_status;

pub const DOCUMENT_FORMAT_VERSION: u32 = 1;

/// Scheme reference meaning "whatever scheme the tool was started with".
pub const DEFAULT_SCHEME_REF: &str = "default";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Identified,
    Analyzed,
    Evaluated,
    Treated,
    Monitored,
}

impl Status {
    pub const ALL: [Status; 5] = [
        Status::Identified,
        Status::Analyzed,
        Status::Evaluated,
        Status::Treated,
        Status::Monitored,
    ];

    pub fn next(self) -> Option<Status> {
        match self {
            Status::Identified => Some(Status::Analyzed),
            Status::Analyzed => Some(Status::Evaluated),
            Status::Evaluated => Some(Status::Treated),
            Status::Treated => Some(Status::Monitored),
            Status::Monitored => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Identified => "identified",
            Status::Analyzed => "analyzed",
            Status::Evaluated => "evaluated",
            Status::Treated => "treated",
            Status::Monitored => "monitored",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Status {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Status::ALL
            .into_iter()
            .find(|st| st.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Usage {
                what: "status".to_string(),
                value: s.to_string(),
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioAnalysis {
    pub threat_agent: String,
    #[serde(default)]
    pub method: String,
    pub assignments: Vec<FactorAssignment>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub name: String,
    #[serde(default)]
    pub weakness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DependencyMapping {
    pub components: Vec<Component>,
    pub assignments: Vec<FactorAssignment>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImpactAnalysis {
    pub technical: Vec<FactorAssignment>,
    pub business: Vec<FactorAssignment>,
}

/// A what-if: absolute replacement scores for some factors.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ControlAdjustment {
    pub label: String,
    #[serde(default)]
    pub overrides: BTreeMap<String, u8>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

/// Records which revision of which document a derived document came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    pub document: String,
    pub revision: u64,
    pub adjustment: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssessmentDocument {
    pub format_version: u32,
    pub id: String,
    /// Catalog code (`LLM01`) or threat name.
    pub threat: String,
    #[serde(default)]
    pub system_context: String,
    pub stakeholder: StakeholderGroup,
    #[serde(default = "default_scheme_ref")]
    pub scheme: String,
    pub status: Status,
    #[serde(default)]
    pub revision: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<ScenarioAnalysis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dependencies: Option<DependencyMapping>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub impact: Option<ImpactAnalysis>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub adjustments: Vec<ControlAdjustment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub acceptance_note: Option<String>,
    /// Free-text treatment disposition (mitigate, transfer, accept, ...).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disposition: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub review_notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derived_from: Option<Derivation>,
}

fn default_scheme_ref() -> String {
    DEFAULT_SCHEME_REF.to_string()
}

impl AssessmentDocument {
    /// A fresh document in the `Identified` state with no analysis yet.
    pub fn new(
        id: impl Into<String>,
        threat: impl Into<String>,
        stakeholder: StakeholderGroup,
    ) -> Self {
        AssessmentDocument {
            format_version: DOCUMENT_FORMAT_VERSION,
            id: id.into(),
            threat: threat.into(),
            system_context: String::new(),
            stakeholder,
            scheme: default_scheme_ref(),
            status: Status::Identified,
            revision: 0,
            scenario: None,
            dependencies: None,
            impact: None,
            adjustments: Vec::new(),
            acceptance_note: None,
            disposition: None,
            review_notes: Vec::new(),
            derived_from: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        crate::format::from_json(text, "assessment document")
    }

    pub fn to_json(&self) -> String {
        crate::format::to_canonical_json(self)
    }

    pub fn has_all_sections(&self) -> bool {
        self.scenario.is_some() && self.dependencies.is_some() && self.impact.is_some()
    }

    /// Every assignment in the document, in section order.
    pub fn assignments(&self) -> Vec<FactorAssignment> {
        self.sections()
            .flat_map(|(_, a)| a.iter().cloned())
            .collect()
    }

    fn sections(&self) -> impl Iterator<Item = (FactorCategory, &Vec<FactorAssignment>)> {
        let scenario = self
            .scenario
            .iter()
            .map(|s| (FactorCategory::ThreatAgent, &s.assignments));
        let deps = self
            .dependencies
            .iter()
            .map(|d| (FactorCategory::Vulnerability, &d.assignments));
        let impact = self.impact.iter().flat_map(|i| {
            [
                (FactorCategory::TechnicalImpact, &i.technical),
                (FactorCategory::BusinessImpact, &i.business),
            ]
        });
        scenario.chain(deps).chain(impact)
    }

    pub(crate) fn section_mut(&mut self, category: FactorCategory) -> &mut Vec<FactorAssignment> {
        match category {
            FactorCategory::ThreatAgent => {
                &mut self
                    .scenario
                    .get_or_insert_with(|| ScenarioAnalysis {
                        threat_agent: String::new(),
                        method: String::new(),
                        assignments: Vec::new(),
                    })
                    .assignments
            }
            FactorCategory::Vulnerability => {
                &mut self
                    .dependencies
                    .get_or_insert_with(|| DependencyMapping {
                        components: Vec::new(),
                        assignments: Vec::new(),
                    })
                    .assignments
            }
            FactorCategory::TechnicalImpact | FactorCategory::BusinessImpact => {
                let impact = self.impact.get_or_insert_with(|| ImpactAnalysis {
                    technical: Vec::new(),
                    business: Vec::new(),
                });
                if category == FactorCategory::TechnicalImpact {
                    &mut impact.technical
                } else {
                    &mut impact.business
                }
            }
        }
    }
}

pub(crate) const INCOMPLETE: &str = "incomplete_factors";

/// Problems with the factor sections: unknown, misplaced, duplicated or
/// out-of-range assignments, and weighted factors with no assignment
/// (reported with code `incomplete_factors`, one issue per factor).
pub fn section_issues(doc: &AssessmentDocument, scheme: &RatingScheme) -> Vec<Issue> {
    let mut issues = Vec::new();
    let mut seen = BTreeSet::new();
    for (section, assignments) in doc.sections() {
        for a in assignments {
            let id = a.factor_id.as_str();
            match scheme.factor(id) {
                None => issues
                    .push(Issue::new("unknown_factor", format!("unknown factor `{id}`")).at(id)),
                Some(def) if def.category != section => issues.push(
                    Issue::new(
                        "misplaced_factor",
                        format!(
                            "factor `{id}` belongs to {} but is recorded under {section}",
                            def.category
                        ),
                    )
                    .at(id),
                ),
                Some(_) => {}
            }
            if a.score > 9 {
                issues.push(
                    Issue::new(
                        "score_out_of_range",
                        format!("score {} for `{id}` is outside 0..=9", a.score),
                    )
                    .at(id),
                );
            }
            if !seen.insert(id) {
                issues.push(
                    Issue::new(
                        "duplicate_assignment",
                        format!("factor `{id}` assigned twice"),
                    )
                    .at(id),
                );
            }
        }
    }
    for factor in &scheme.factors {
        if !factor.weight.is_zero() && !seen.contains(factor.id.as_str()) {
            issues.push(
                Issue::new(INCOMPLETE, format!("missing factor `{}`", factor.id)).at(&factor.id),
            );
        }
    }
    issues
}

pub fn validate_document(
    doc: &AssessmentDocument,
    catalog: &Catalog,
    scheme: &RatingScheme,
) -> ValidationReport {
    let mut report = ValidationReport::default();

    if doc.format_version != DOCUMENT_FORMAT_VERSION {
        report.error(Issue::new(
            "format_version",
            format!("unsupported document format_version {}", doc.format_version),
        ));
    }
    if !crate::store::valid_document_id(&doc.id) {
        report.error(
            Issue::new("document_id", format!("invalid document id `{}`", doc.id)).at(&doc.id),
        );
    }

    for issue in section_issues(doc, scheme) {
        if issue.code == INCOMPLETE && doc.status < Status::Evaluated {
            report.warn(issue);
        } else {
            report.error(issue);
        }
    }

    if doc.status >= Status::Analyzed {
        for (present, name) in [
            (doc.scenario.is_some(), "scenario"),
            (doc.dependencies.is_some(), "dependencies"),
            (doc.impact.is_some(), "impact"),
        ] {
            if !present {
                report.error(
                    Issue::new(
                        "missing_section",
                        format!("status {} requires the {name} section", doc.status),
                    )
                    .at(name),
                );
            }
        }
    }
    if doc.status >= Status::Treated && !has_treatment(doc) {
        report.error(Issue::new(
            "treatment_missing",
            format!(
                "status {} requires a recorded control adjustment or acceptance note",
                doc.status
            ),
        ));
    }
    for adj in &doc.adjustments {
        for issue in adjust::adjustment_issues(adj, scheme) {
            report.error(issue);
        }
    }

    if catalog.resolve(&doc.threat).is_none() {
        report.warn(
            Issue::new(
                "unresolved_threat",
                format!("unresolved threat reference `{}`", doc.threat),
            )
            .at(&doc.threat),
        );
    }
    if doc.scheme != DEFAULT_SCHEME_REF && doc.scheme != scheme.id {
        report.warn(Issue::new(
            "scheme_mismatch",
            format!(
                "document names scheme `{}` but `{}` is in use",
                doc.scheme, scheme.id
            ),
        ));
    }
    for (_, assignments) in doc.sections() {
        for a in assignments {
            if a.rationale.trim().is_empty() {
                report.warn(
                    Issue::new(
                        "missing_rationale",
                        format!("no rationale recorded for `{}`", a.factor_id),
                    )
                    .at(&a.factor_id),
                );
            }
            let Some(def) = scheme.factor(&a.factor_id) else {
                continue;
            };
            if let Some(label) = &a.anchor_label {
                if def.anchors.iter().any(|an| an.value == a.score)
                    && def.anchor_label(a.score) != Some(label.as_str())
                {
                    report.warn(
                        Issue::new(
                            "anchor_mismatch",
                            format!(
                                "label `{label}` for `{}` differs from the scheme anchor at {}",
                                a.factor_id, a.score
                            ),
                        )
                        .at(&a.factor_id),
                    );
                }
            }
        }
    }

    report
}

pub(crate) fn has_treatment(doc: &AssessmentDocument) -> bool {
    !doc.adjustments.is_empty()
        || doc
            .acceptance_note
            .as_deref()
            .is_some_and(|n| !n.trim().is_empty())
}

/// Rates the document's sixteen factor assignments.
pub fn evaluate_document(doc: &AssessmentDocument, scheme: &RatingScheme) -> Result<RiskRating> {
    let issues = section_issues(doc, scheme);
    if !issues.is_empty() {
        let (missing, other): (Vec<_>, Vec<_>) =
            issues.into_iter().partition(|i| i.code == INCOMPLETE);
        if !other.is_empty() {
            return Err(Error::InvalidDocument(other));
        }
        return Err(Error::IncompleteFactors {
            missing: missing.into_iter().filter_map(|i| i.locus).collect(),
        });
    }
    rating::evaluate(&doc.assignments(), scheme)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixtures_validate() {
        let catalog = Catalog::bundled();
        let scheme = RatingScheme::bundled();
        for doc in fixtures::all() {
            let report = validate_document(&doc, &catalog, &scheme);
            assert!(report.errors.is_empty(), "{}: {report}", doc.id);
            assert!(report.warnings.is_empty(), "{}: {report}", doc.id);
        }
    }

    #[test]
    fn evaluated_with_fifteen_factors_is_an_error() {
        let mut doc = fixtures::prompt_injection();
        doc.dependencies
            .as_mut()
            .unwrap()
            .assignments
            .retain(|a| a.factor_id != "awareness");
        let report = validate_document(&doc, &Catalog::bundled(), &RatingScheme::bundled());
        assert_eq!(report.errors.len(), 1, "{report}");
        assert_eq!(report.errors[0].code, INCOMPLETE);
        assert!(report.errors[0].message.contains("awareness"));
    }

    #[test]
    fn unknown_threat_is_a_warning() {
        let mut doc = fixtures::prompt_injection();
        doc.threat = "LLM99".into();
        let report = validate_document(&doc, &Catalog::bundled(), &RatingScheme::bundled());
        assert!(report.errors.is_empty());
        assert_eq!(report.warnings.len(), 1);
        assert!(report.warnings[0]
            .message
            .contains("unresolved threat reference"));
    }

    #[test]
    fn draft_missing_factors_only_warn() {
        let mut doc = AssessmentDocument::new("draft", "LLM01", StakeholderGroup::EndUser);
        let report = validate_document(&doc, &Catalog::bundled(), &RatingScheme::bundled());
        assert!(report.errors.is_empty(), "{report}");
        assert_eq!(
            report
                .warnings
                .iter()
                .filter(|w| w.code == INCOMPLETE)
                .count(),
            16
        );
        doc.status = Status::Analyzed;
        let report = validate_document(&doc, &Catalog::bundled(), &RatingScheme::bundled());
        assert_eq!(
            report
                .errors
                .iter()
                .filter(|e| e.code == "missing_section")
                .count(),
            3
        );
    }

    #[test]
    fn misplaced_factor_is_rejected_by_both_paths() {
        let mut doc = fixtures::prompt_injection();
        let moved = doc.scenario.as_mut().unwrap().assignments.remove(0);
        doc.dependencies.as_mut().unwrap().assignments.push(moved);
        let report = validate_document(&doc, &Catalog::bundled(), &RatingScheme::bundled());
        assert!(report.errors.iter().any(|e| e.code == "misplaced_factor"));
        assert!(matches!(
            evaluate_document(&doc, &RatingScheme::bundled()),
            Err(Error::InvalidDocument(_))
        ));
    }

    #[test]
    fn evaluate_fixtures() {
        let scheme = RatingScheme::bundled();
        let pi = evaluate_document(&fixtures::prompt_injection(), &scheme).unwrap();
        assert_eq!(pi.severity, rating::Severity::High);
        let dp = evaluate_document(&fixtures::training_data_poisoning(), &scheme).unwrap();
        assert_eq!(dp.severity, rating::Severity::Medium);
    }

    #[test]
    fn removing_impact_lists_eight_missing() {
        let mut doc = fixtures::prompt_injection();
        doc.impact = None;
        match evaluate_document(&doc, &RatingScheme::bundled()) {
            Err(Error::IncompleteFactors { missing }) => {
                assert_eq!(missing.len(), 8);
                assert!(missing.contains(&"loss_of_confidentiality".to_string()));
                assert!(missing.contains(&"privacy_violation".to_string()));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn document_json_roundtrip() {
        let doc = fixtures::training_data_poisoning();
        assert_eq!(AssessmentDocument::from_json(&doc.to_json()).unwrap(), doc);
    }
}
