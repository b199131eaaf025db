//! Threat matrix: the catalog joined with evaluated assessments.
//!
//! Rows for threats without an evaluated assessment keep their rating cells
//! blank, which is how the generic matrix is meant to be used as a template.

mod render;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::assessment::{evaluate_document, validate_document, AssessmentDocument, Status};
use crate::catalog::{Catalog, StakeholderGroup, ThreatEntry};
use crate::error::{Error, Result};
use crate::rating::{Level, RatingScheme, RiskRating, Severity};

pub use render::{render, OutputFormat};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixRow {
    pub id: String,
    pub name: String,
    pub causes: Vec<String>,
    pub consequences: Vec<String>,
    pub static_controls: Vec<String>,
    pub dynamic_controls: Vec<String>,
    pub traditional_cybersec: bool,
    pub stakeholders: Vec<StakeholderGroup>,
    /// All three rating cells, or none of them.
    pub rating: Option<RiskRating>,
    pub assessment_ref: Option<String>,
}

impl MatrixRow {
    fn blank(entry: &ThreatEntry) -> Self {
        MatrixRow {
            id: entry.id.clone(),
            name: entry.name.clone(),
            causes: entry.causes.clone(),
            consequences: entry.consequences.clone(),
            static_controls: entry.static_controls.clone(),
            dynamic_controls: entry.dynamic_controls.clone(),
            traditional_cybersec: entry.traditional_cybersec,
            stakeholders: entry.stakeholders.iter().copied().collect(),
            rating: None,
            assessment_ref: None,
        }
    }

    pub fn likelihood_level(&self) -> Option<Level> {
        self.rating.as_ref().map(|r| r.likelihood_level)
    }

    pub fn impact_level(&self) -> Option<Level> {
        self.rating.as_ref().map(|r| r.impact_level)
    }

    pub fn severity(&self) -> Option<Severity> {
        self.rating.as_ref().map(|r| r.severity)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixMetadata {
    pub scheme_id: String,
    pub catalog_version: u32,
    /// Left empty by [`build_matrix`] so output stays byte-identical across
    /// runs; callers that want a timestamp set it themselves.
    pub generated_at: Option<String>,
    pub stakeholder_filter: Option<StakeholderGroup>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreatMatrix {
    pub metadata: MatrixMetadata,
    pub rows: Vec<MatrixRow>,
}

impl ThreatMatrix {
    pub fn row(&self, id: &str) -> Option<&MatrixRow> {
        self.rows.iter().find(|r| r.id == id)
    }

    pub fn assessed_rows(&self) -> impl Iterator<Item = &MatrixRow> {
        self.rows.iter().filter(|r| r.rating.is_some())
    }
}

pub fn build_matrix(
    catalog: &Catalog,
    assessments: &[AssessmentDocument],
    scheme: &RatingScheme,
    stakeholder_filter: Option<StakeholderGroup>,
) -> Result<ThreatMatrix> {
    let mut by_threat: HashMap<&str, &AssessmentDocument> = HashMap::new();
    for doc in assessments {
        let report = validate_document(doc, catalog, scheme);
        if !report.is_ok() {
            return Err(Error::InvalidDocument(report.errors));
        }
        let entry = catalog
            .resolve(&doc.threat)
            .ok_or_else(|| Error::UnknownThreat {
                document: doc.id.clone(),
                threat: doc.threat.clone(),
            })?;
        if let Some(previous) = by_threat.insert(entry.id.as_str(), doc) {
            return Err(Error::AmbiguousAssessment {
                threat: entry.id.clone(),
                first: previous.id.clone(),
                second: doc.id.clone(),
            });
        }
    }

    let mut rows = Vec::new();
    for entry in &catalog.entries {
        if stakeholder_filter.is_some_and(|g| !entry.concerns(g)) {
            continue;
        }
        let mut row = MatrixRow::blank(entry);
        if let Some(doc) = by_threat.get(entry.id.as_str()) {
            row.assessment_ref = Some(doc.id.clone());
            if doc.status >= Status::Evaluated {
                row.rating = Some(evaluate_document(doc, scheme)?);
            }
        }
        rows.push(row);
    }

    Ok(ThreatMatrix {
        metadata: MatrixMetadata {
            scheme_id: scheme.id.clone(),
            catalog_version: catalog.format_version,
            generated_at: None,
            stakeholder_filter,
        },
        rows,
    })
}
