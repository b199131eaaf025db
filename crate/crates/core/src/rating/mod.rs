//! OWASP risk rating calculus: factor model, scoring, level classification
//! and the severity chart.
//!
//! Likelihood and impact are each the mean of two category scores, and each
//! category score is a weighted mean of integer factor scores in `0..=9`.
//! The overall severity is a chart lookup over the two resulting levels;
//! there is deliberately no numeric likelihood-times-impact product.

mod default_scheme;
mod engine;
mod scheme;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::rational::Rational;

pub use engine::{
    category_score, classify, evaluate, impact_scores, likelihood_score, severity, ImpactScores,
};
pub use scheme::validate_scheme;

/// Scheme file format understood by this build.
pub const SCHEME_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorCategory {
    ThreatAgent,
    Vulnerability,
    TechnicalImpact,
    BusinessImpact,
}

impl FactorCategory {
    pub const ALL: [FactorCategory; 4] = [
        FactorCategory::ThreatAgent,
        FactorCategory::Vulnerability,
        FactorCategory::TechnicalImpact,
        FactorCategory::BusinessImpact,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FactorCategory::ThreatAgent => "threat_agent",
            FactorCategory::Vulnerability => "vulnerability",
            FactorCategory::TechnicalImpact => "technical_impact",
            FactorCategory::BusinessImpact => "business_impact",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            FactorCategory::ThreatAgent => "Threat Agent Factors",
            FactorCategory::Vulnerability => "Vulnerability Factors",
            FactorCategory::TechnicalImpact => "Technical Impact Factors",
            FactorCategory::BusinessImpact => "Business Impact Factors",
        }
    }

    pub fn is_likelihood(self) -> bool {
        matches!(
            self,
            FactorCategory::ThreatAgent | FactorCategory::Vulnerability
        )
    }
}

impl fmt::Display for FactorCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A labelled reference point on a factor's scale.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Anchor {
    pub value: u8,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorDefinition {
    pub id: String,
    pub display_name: String,
    pub category: FactorCategory,
    pub anchors: Vec<Anchor>,
    #[serde(default = "default_weight")]
    pub weight: Rational,
}

fn default_weight() -> Rational {
    Rational::ONE
}

impl FactorDefinition {
    /// Label of the anchor sitting exactly at `score`, if any.
    pub fn anchor_label(&self, score: u8) -> Option<&str> {
        self.anchors
            .iter()
            .find(|a| a.value == score)
            .map(|a| a.label.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Level {
    Low,
    Medium,
    High,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::Low, Level::Medium, Level::High];

    pub fn as_str(self) -> &'static str {
        match self {
            Level::Low => "Low",
            Level::Medium => "Medium",
            Level::High => "High",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "low" | "l" => Ok(Level::Low),
            "medium" | "m" => Ok(Level::Medium),
            "high" | "h" => Ok(Level::High),
            _ => Err(format!("unknown level `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Severity {
    Note,
    Low,
    Medium,
    High,
    Critical,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Note => "NOTE",
            Severity::Low => "LOW",
            Severity::Medium => "MEDIUM",
            Severity::High => "HIGH",
            Severity::Critical => "CRITICAL",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Two boundaries splitting `[0, 9]` into `[0, medium)`, `[medium, high)`
/// and `[high, 9]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thresholds {
    pub medium: Rational,
    pub high: Rational,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            medium: Rational::from_integer(3),
            high: Rational::from_integer(6),
        }
    }
}

/// Likelihood level (outer key) to impact level (inner key) to severity.
///
/// Stored as nested maps so that a user-supplied file with a hole in it can
/// still be loaded and reported on by [`validate_scheme`].
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SeverityChart(pub BTreeMap<Level, BTreeMap<Level, Severity>>);

impl SeverityChart {
    pub fn get(&self, likelihood: Level, impact: Level) -> Option<Severity> {
        self.0.get(&likelihood)?.get(&impact).copied()
    }

    pub fn set(&mut self, likelihood: Level, impact: Level, severity: Severity) {
        self.0
            .entry(likelihood)
            .or_default()
            .insert(impact, severity);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImpactMode {
    /// Final impact is the mean of the technical and business scores.
    #[default]
    MeanOfCategoryMeans,
    /// Final impact is the business score alone.
    BusinessOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatingScheme {
    pub format_version: u32,
    pub id: String,
    #[serde(default)]
    pub name: String,
    pub factors: Vec<FactorDefinition>,
    #[serde(default)]
    pub likelihood_thresholds: Thresholds,
    #[serde(default)]
    pub impact_thresholds: Thresholds,
    pub severity_chart: SeverityChart,
    #[serde(default)]
    pub impact_mode: ImpactMode,
}

impl RatingScheme {
    /// The bundled OWASP scheme: sixteen equally weighted factors,
    /// thresholds 3 and 6, and the standard severity chart.
    pub fn bundled() -> Self {
        default_scheme::bundled()
    }

    pub fn factor(&self, id: &str) -> Option<&FactorDefinition> {
        self.factors.iter().find(|f| f.id == id)
    }

    pub fn factors_in(&self, category: FactorCategory) -> impl Iterator<Item = &FactorDefinition> {
        self.factors.iter().filter(move |f| f.category == category)
    }

    /// Parses a scheme document and rejects it if validation finds errors.
    pub fn from_json(text: &str) -> crate::Result<Self> {
        let scheme: RatingScheme =
            serde_json::from_str(text).map_err(|e| crate::Error::parse("rating scheme", e))?;
        let report = validate_scheme(&scheme);
        if !report.is_ok() {
            return Err(crate::Error::InvalidScheme(report.errors));
        }
        Ok(scheme)
    }

    pub fn load(path: &std::path::Path) -> crate::Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| crate::Error::io(path, e))?;
        let scheme: RatingScheme = serde_json::from_str(&text)
            .map_err(|e| crate::Error::parse(path.display().to_string(), e))?;
        let report = validate_scheme(&scheme);
        if !report.is_ok() {
            return Err(crate::Error::InvalidScheme(report.errors));
        }
        Ok(scheme)
    }
}

/// A single factor score with the analyst's reasoning.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorAssignment {
    pub factor_id: String,
    pub score: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor_label: Option<String>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub rationale: String,
}

impl FactorAssignment {
    pub fn new(factor_id: impl Into<String>, score: u8) -> Self {
        FactorAssignment {
            factor_id: factor_id.into(),
            score,
            anchor_label: None,
            rationale: String::new(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.anchor_label = Some(label.into());
        self
    }

    pub fn with_rationale(mut self, rationale: impl Into<String>) -> Self {
        self.rationale = rationale.into();
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RiskRating {
    pub likelihood_score: Rational,
    pub likelihood_level: Level,
    pub technical_impact_score: Rational,
    pub business_impact_score: Rational,
    pub final_impact_score: Rational,
    pub impact_level: Level,
    pub severity: Severity,
}
