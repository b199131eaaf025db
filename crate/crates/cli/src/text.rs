//! Human-readable renderings. JSON output never goes through here.

use std::fmt::Write;

use llmrisk_core::{
    AssessmentDocument, Catalog, ControlAdjustment, FactorCategory, RatingScheme, RiskRating,
    Severity, ThreatEntry, WhatIf,
};

const LABEL_WIDTH: usize = 26;

fn paint(text: &str, severity: Severity, color: bool) -> String {
    if !color {
        return text.to_string();
    }
    let code = match severity {
        Severity::Note => "90",
        Severity::Low => "32",
        Severity::Medium => "33",
        Severity::High => "31",
        Severity::Critical => "1;31",
    };
    format!("\x1b[{code}m{text}\x1b[0m")
}

fn line(out: &mut String, label: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "  {label:<LABEL_WIDTH$} {value}");
}

/// Factor-by-factor sheet: each category's scores with anchor labels,
/// followed by the subtotal lines that category feeds.
pub fn rating_sheet(
    doc: &AssessmentDocument,
    rating: &RiskRating,
    scheme: &RatingScheme,
    catalog: &Catalog,
    color: bool,
) -> String {
    let mut out = String::new();
    let threat = catalog
        .resolve(&doc.threat)
        .map(|e| format!("{} ({})", e.name, e.id))
        .unwrap_or_else(|| doc.threat.clone());
    let _ = writeln!(out, "{threat}");
    let _ = writeln!(
        out,
        "assessment {} rev {} ({})",
        doc.id, doc.revision, doc.status
    );

    let assignments = doc.assignments();
    for category in FactorCategory::ALL {
        let _ = writeln!(out, "\n{}", category.title());
        for factor in scheme.factors_in(category) {
            let Some(a) = assignments.iter().find(|a| a.factor_id == factor.id) else {
                continue;
            };
            let label = a
                .anchor_label
                .as_deref()
                .or_else(|| factor.anchor_label(a.score))
                .unwrap_or("");
            let value = if label.is_empty() {
                a.score.to_string()
            } else {
                format!("{} - {label}", a.score)
            };
            line(&mut out, &factor.display_name, value);
        }
        match category {
            FactorCategory::Vulnerability => {
                let _ = writeln!(out);
                line(&mut out, "Likelihood Score:", rating.likelihood_score);
                line(&mut out, "Likelihood:", rating.likelihood_level);
            }
            FactorCategory::TechnicalImpact => {
                let _ = writeln!(out);
                line(
                    &mut out,
                    "Technical Impact Score:",
                    rating.technical_impact_score,
                );
            }
            FactorCategory::BusinessImpact => {
                let _ = writeln!(out);
                line(
                    &mut out,
                    "Business Impact Score:",
                    rating.business_impact_score,
                );
                line(&mut out, "Final Impact Score:", rating.final_impact_score);
                line(&mut out, "Impact:", rating.impact_level);
            }
            FactorCategory::ThreatAgent => {}
        }
    }
    let _ = writeln!(out);
    let severity = paint(&rating.severity.to_string(), rating.severity, color);
    let _ = writeln!(
        out,
        "{:<w$} {severity}",
        "Risk Severity:",
        w = LABEL_WIDTH + 2
    );
    out
}

pub fn whatif(adjustment: &ControlAdjustment, result: &WhatIf, color: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "what-if: {}", adjustment.label);
    for (factor, score) in &adjustment.overrides {
        let _ = writeln!(out, "  {factor} -> {score}");
    }
    let (b, a) = (&result.before, &result.after);
    let _ = writeln!(out, "\n  {:<LABEL_WIDTH$} {:<10} after", "", "before");
    let rows: [(&str, String, String); 7] = [
        (
            "Likelihood Score:",
            b.likelihood_score.to_string(),
            a.likelihood_score.to_string(),
        ),
        (
            "Likelihood:",
            b.likelihood_level.to_string(),
            a.likelihood_level.to_string(),
        ),
        (
            "Technical Impact Score:",
            b.technical_impact_score.to_string(),
            a.technical_impact_score.to_string(),
        ),
        (
            "Business Impact Score:",
            b.business_impact_score.to_string(),
            a.business_impact_score.to_string(),
        ),
        (
            "Final Impact Score:",
            b.final_impact_score.to_string(),
            a.final_impact_score.to_string(),
        ),
        (
            "Impact:",
            b.impact_level.to_string(),
            a.impact_level.to_string(),
        ),
        (
            "Risk Severity:",
            b.severity.to_string(),
            a.severity.to_string(),
        ),
    ];
    for (label, before, after) in rows {
        let (before, after) = if label == "Risk Severity:" {
            (
                pad_paint(&before, b.severity, color),
                pad_paint(&after, a.severity, color),
            )
        } else {
            (format!("{before:<10}"), format!("{after:<10}"))
        };
        let row = format!("  {label:<LABEL_WIDTH$} {before} {after}");
        let _ = writeln!(out, "{}", row.trim_end());
    }
    out
}

fn pad_paint(text: &str, severity: Severity, color: bool) -> String {
    paint(&format!("{text:<10}"), severity, color)
}

pub fn catalog_list(entries: &[&ThreatEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        let groups: Vec<_> = e.stakeholders.iter().map(|g| g.title()).collect();
        let _ = writeln!(
            out,
            "{}  {:<34} {:<4} {}",
            e.id,
            e.name,
            if e.traditional_cybersec { "yes" } else { "no" },
            groups.join(", ")
        );
    }
    out
}
