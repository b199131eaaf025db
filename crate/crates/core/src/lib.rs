//! Risk assessment toolkit for LLM-integrated systems.
//!
//! The crate rates threats with the OWASP risk rating calculus, ships the
//! OWASP Top 10 for LLM applications as a threat catalog, models the
//! three-step assessment (scenario analysis, dependency mapping, impact
//! analysis) as a document with a lifecycle, and joins everything into a
//! stakeholder-filtered threat matrix.

pub mod assessment;
pub mod catalog;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod matrix;
pub mod rating;
pub mod rational;
pub mod report;
pub mod store;

pub use assessment::{
    advance_status, apply_adjustment, evaluate_document, validate_document, AssessmentDocument,
    ControlAdjustment, Status, WhatIf,
};
pub use catalog::{
    filter_by_stakeholder, filter_traditional, load_catalog, Catalog, CatalogSource,
    StakeholderGroup, ThreatEntry,
};
pub use error::{Error, Result};
pub use matrix::{build_matrix, render, OutputFormat, ThreatMatrix};
pub use rating::{
    evaluate, validate_scheme, FactorAssignment, FactorCategory, Level, RatingScheme, RiskRating,
    Severity,
};
pub use rational::Rational;
pub use report::{Issue, ValidationReport};
pub use store::DocumentStore;
