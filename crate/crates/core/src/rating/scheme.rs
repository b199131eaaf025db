use std::collections::BTreeSet;

use super::{FactorCategory, Level, RatingScheme, Thresholds, SCHEME_FORMAT_VERSION};
use crate::rational::Rational;
use crate::report::{Issue, ValidationReport};

/// Checks every scheme invariant. A non-monotone severity chart is only a
/// warning; organisations are free to configure their own chart.
pub fn validate_scheme(scheme: &RatingScheme) -> ValidationReport {
    let mut report = ValidationReport::default();

    if scheme.format_version != SCHEME_FORMAT_VERSION {
        report.error(Issue::new(
            "format_version",
            format!(
                "unsupported scheme format_version {} (expected {SCHEME_FORMAT_VERSION})",
                scheme.format_version
            ),
        ));
    }

    let mut seen = BTreeSet::new();
    for factor in &scheme.factors {
        if factor.id.trim().is_empty() {
            report.error(Issue::new("factor_id", "factor with empty id"));
        }
        if !seen.insert(factor.id.as_str()) {
            report.error(
                Issue::new(
                    "duplicate_factor",
                    format!("duplicate factor id `{}`", factor.id),
                )
                .at(&factor.id),
            );
        }
        let mut previous: Option<u8> = None;
        for anchor in &factor.anchors {
            if anchor.value > 9 {
                report.error(
                    Issue::new(
                        "anchor_out_of_range",
                        format!(
                            "anchor {} of `{}` is outside 0..=9",
                            anchor.value, factor.id
                        ),
                    )
                    .at(&factor.id),
                );
            }
            if previous.is_some_and(|p| anchor.value <= p) {
                report.error(
                    Issue::new(
                        "anchors_not_increasing",
                        format!("anchors of `{}` are not strictly increasing", factor.id),
                    )
                    .at(&factor.id),
                );
            }
            previous = Some(anchor.value);
        }
        if factor.weight.is_negative() {
            report.error(
                Issue::new(
                    "negative_weight",
                    format!("weight of `{}` is negative", factor.id),
                )
                .at(&factor.id),
            );
        }
    }

    for category in FactorCategory::ALL {
        let weighted = scheme
            .factors_in(category)
            .any(|f| !f.weight.is_zero() && !f.weight.is_negative());
        if !weighted {
            report.error(
                Issue::new(
                    "zero_weight",
                    format!("category `{category}` has no factor with positive weight"),
                )
                .at(category.as_str()),
            );
        }
    }

    check_thresholds(&mut report, "likelihood", &scheme.likelihood_thresholds);
    check_thresholds(&mut report, "impact", &scheme.impact_thresholds);

    let mut complete = true;
    for l in Level::ALL {
        for i in Level::ALL {
            if scheme.severity_chart.get(l, i).is_none() {
                complete = false;
                report.error(Issue::new(
                    "missing_chart_cell",
                    format!("severity chart has no cell for likelihood {l}, impact {i}"),
                ));
            }
        }
    }
    if complete && !chart_is_monotone(scheme) {
        report.warn(Issue::new(
            "non_monotone_chart",
            "non-monotone severity chart: raising a level can lower severity",
        ));
    }

    report
}

fn check_thresholds(report: &mut ValidationReport, axis: &str, t: &Thresholds) {
    let nine = Rational::from_integer(9);
    if t.medium >= t.high {
        report.error(
            Issue::new(
                "thresholds_not_ascending",
                format!("{axis} thresholds not ascending ({}, {})", t.medium, t.high),
            )
            .at(axis),
        );
    }
    if t.medium <= Rational::ZERO || t.high > nine {
        report.error(
            Issue::new(
                "thresholds_out_of_range",
                format!(
                    "{axis} thresholds ({}, {}) must satisfy 0 < t1 < t2 <= 9",
                    t.medium, t.high
                ),
            )
            .at(axis),
        );
    }
}

fn chart_is_monotone(scheme: &RatingScheme) -> bool {
    let chart = &scheme.severity_chart;
    let cell = |l, i| chart.get(l, i).expect("chart checked complete");
    Level::ALL.windows(2).all(|w| {
        Level::ALL.iter().all(|&other| {
            cell(w[1], other) >= cell(w[0], other) && cell(other, w[1]) >= cell(other, w[0])
        })
    })
}
