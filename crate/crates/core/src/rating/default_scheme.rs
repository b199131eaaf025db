use super::{
    Anchor, FactorCategory, FactorDefinition, ImpactMode, Level, RatingScheme, Severity,
    SeverityChart, Thresholds, SCHEME_FORMAT_VERSION,
};
use crate::rational::Rational;

use FactorCategory::*;

// (id, display name, category, anchors)
type FactorRow = (
    &'static str,
    &'static str,
    FactorCategory,
    &'static [(u8, &'static str)],
);

const FACTORS: &[FactorRow] = &[
    (
        "skill_level",
        "Skill level",
        ThreatAgent,
        &[
            (1, "No technical skills"),
            (3, "Some technical skills"),
            (5, "Advanced computer user"),
            (6, "Network and programming skills"),
            (9, "Security penetration skills"),
        ],
    ),
    (
        "motive",
        "Motive",
        ThreatAgent,
        &[
            (1, "Low or no reward"),
            (4, "Possible reward"),
            (9, "High reward"),
        ],
    ),
    (
        "opportunity",
        "Opportunity",
        ThreatAgent,
        &[
            (0, "Full access or expensive resources required"),
            (4, "Special access or resources required"),
            (7, "Some access or resources required"),
            (9, "No access or resources required"),
        ],
    ),
    (
        "size",
        "Size",
        ThreatAgent,
        &[
            (2, "Developers or system administrators"),
            (4, "Intranet users"),
            (5, "Partners"),
            (6, "Authenticated users"),
            (9, "Anonymous Internet users"),
        ],
    ),
    (
        "ease_of_discovery",
        "Ease of discovery",
        Vulnerability,
        &[
            (1, "Practically impossible"),
            (3, "Difficult"),
            (7, "Easy"),
            (9, "Automated tools available"),
        ],
    ),
    (
        "ease_of_exploit",
        "Ease of exploit",
        Vulnerability,
        &[
            (1, "Theoretical"),
            (3, "Difficult"),
            (5, "Easy"),
            (9, "Automated tools available"),
        ],
    ),
    (
        "awareness",
        "Awareness",
        Vulnerability,
        &[
            (1, "Unknown"),
            (4, "Hidden"),
            (6, "Obvious"),
            (9, "Public knowledge"),
        ],
    ),
    (
        "intrusion_detection",
        "Intrusion detection",
        Vulnerability,
        &[
            (1, "Active detection in application"),
            (3, "Logged and reviewed"),
            (8, "Logged without review"),
            (9, "Not logged"),
        ],
    ),
    // The 5 anchor carries the label used in the university assistant
    // worked example; the remaining points follow the OWASP methodology.
    (
        "loss_of_confidentiality",
        "Loss of confidentiality",
        TechnicalImpact,
        &[
            (2, "Minimal non-sensitive data disclosed"),
            (5, "Extensive critical data disclosed"),
            (
                6,
                "Minimal critical data or extensive non-sensitive data disclosed",
            ),
            (7, "Extensive critical data disclosed"),
            (9, "All data disclosed"),
        ],
    ),
    (
        "loss_of_integrity",
        "Loss of integrity",
        TechnicalImpact,
        &[
            (1, "Minimal slightly corrupt data"),
            (3, "Minimal seriously corrupt data"),
            (5, "Extensive slightly corrupt data"),
            (7, "Extensive seriously corrupt data"),
            (9, "All data totally corrupt"),
        ],
    ),
    (
        "loss_of_availability",
        "Loss of availability",
        TechnicalImpact,
        &[
            (1, "Minimal secondary services interrupted"),
            (
                5,
                "Minimal primary or extensive secondary services interrupted",
            ),
            (7, "Extensive primary services interrupted"),
            (9, "All services completely lost"),
        ],
    ),
    (
        "loss_of_accountability",
        "Loss of accountability",
        TechnicalImpact,
        &[
            (1, "Fully traceable"),
            (7, "Possibly traceable"),
            (9, "Completely anonymous"),
        ],
    ),
    (
        "financial_damage",
        "Financial damage",
        BusinessImpact,
        &[
            (1, "Less than the cost to fix the vulnerability"),
            (3, "Minor effect on annual profit"),
            (7, "Significant effect on annual profit"),
            (9, "Bankruptcy"),
        ],
    ),
    (
        "reputation_damage",
        "Reputation damage",
        BusinessImpact,
        &[
            (1, "Minimal damage"),
            (4, "Loss of major accounts"),
            (5, "Loss of goodwill"),
            (9, "Brand damage"),
        ],
    ),
    (
        "non_compliance",
        "Non-compliance",
        BusinessImpact,
        &[
            (2, "Minor violation"),
            (5, "Clear violation"),
            (7, "High profile violation"),
        ],
    ),
    (
        "privacy_violation",
        "Privacy violation",
        BusinessImpact,
        &[
            (3, "One individual"),
            (5, "Hundreds of people"),
            (7, "Thousands of people"),
            (9, "Millions of people"),
        ],
    ),
];

pub(super) fn default_chart() -> SeverityChart {
    use Level::{High as H, Low as L, Medium as M};
    let mut chart = SeverityChart::default();
    for (likelihood, impact, severity) in [
        (L, L, Severity::Note),
        (L, M, Severity::Low),
        (L, H, Severity::Medium),
        (M, L, Severity::Low),
        (M, M, Severity::Medium),
        (M, H, Severity::High),
        (H, L, Severity::Medium),
        (H, M, Severity::High),
        (H, H, Severity::Critical),
    ] {
        chart.set(likelihood, impact, severity);
    }
    chart
}

pub(super) fn bundled() -> RatingScheme {
    RatingScheme {
        format_version: SCHEME_FORMAT_VERSION,
        id: "owasp-default".to_string(),
        name: "OWASP Risk Rating Methodology (equal weights)".to_string(),
        factors: FACTORS
            .iter()
            .map(|(id, name, category, anchors)| FactorDefinition {
                id: id.to_string(),
                display_name: name.to_string(),
                category: *category,
                anchors: anchors
                    .iter()
                    .map(|(value, label)| Anchor {
                        value: *value,
                        label: label.to_string(),
                    })
                    .collect(),
                weight: Rational::ONE,
            })
            .collect(),
        likelihood_thresholds: Thresholds::default(),
        impact_thresholds: Thresholds::default(),
        severity_chart: default_chart(),
        impact_mode: ImpactMode::MeanOfCategoryMeans,
    }
}
