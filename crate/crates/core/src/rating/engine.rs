use std::collections::BTreeMap;

use super::{
    FactorAssignment, FactorCategory, ImpactMode, Level, RatingScheme, RiskRating, Severity,
    SeverityChart, Thresholds,
};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ImpactScores {
    pub technical: Rational,
    pub business: Rational,
    pub final_score: Rational,
}

/// Resolves assignments against the scheme: every id must be known, appear
/// once, and carry a score in `0..=9`.
fn score_table<'a>(
    assignments: &'a [FactorAssignment],
    scheme: &RatingScheme,
) -> Result<BTreeMap<&'a str, u8>> {
    let mut table = BTreeMap::new();
    for a in assignments {
        if scheme.factor(&a.factor_id).is_none() {
            return Err(Error::UnknownFactor(a.factor_id.clone()));
        }
        if a.score > 9 {
            return Err(Error::ScoreOutOfRange {
                factor: a.factor_id.clone(),
                score: a.score.into(),
            });
        }
        if table.insert(a.factor_id.as_str(), a.score).is_some() {
            return Err(Error::DuplicateAssignment(a.factor_id.clone()));
        }
    }
    Ok(table)
}

fn missing_in(
    table: &BTreeMap<&str, u8>,
    scheme: &RatingScheme,
    categories: &[FactorCategory],
) -> Vec<String> {
    scheme
        .factors
        .iter()
        .filter(|f| categories.contains(&f.category))
        .filter(|f| !f.weight.is_zero() && !table.contains_key(f.id.as_str()))
        .map(|f| f.id.clone())
        .collect()
}

fn weighted_mean(
    table: &BTreeMap<&str, u8>,
    scheme: &RatingScheme,
    category: FactorCategory,
) -> Result<Rational> {
    let overflow = || Error::Overflow(category.as_str().to_string());
    let mut total = Rational::ZERO;
    let mut weights = Rational::ZERO;
    for factor in scheme.factors_in(category) {
        if factor.weight.is_zero() {
            continue;
        }
        let score =
            table
                .get(factor.id.as_str())
                .copied()
                .ok_or_else(|| Error::IncompleteFactors {
                    missing: vec![factor.id.clone()],
                })?;
        let term = factor
            .weight
            .checked_mul(&Rational::from_integer(score.into()))
            .ok_or_else(overflow)?;
        total = total.checked_add(&term).ok_or_else(overflow)?;
        weights = weights.checked_add(&factor.weight).ok_or_else(overflow)?;
    }
    if weights.is_zero() || weights.is_negative() {
        return Err(Error::ZeroWeight(category.as_str().to_string()));
    }
    total.checked_div(&weights).ok_or_else(overflow)
}

fn mean_of_two(a: Rational, b: Rational, what: &str) -> Result<Rational> {
    a.checked_add(&b)
        .and_then(|s| s.checked_div(&Rational::from_integer(2)))
        .ok_or_else(|| Error::Overflow(what.to_string()))
}

fn require_complete(
    table: &BTreeMap<&str, u8>,
    scheme: &RatingScheme,
    categories: &[FactorCategory],
) -> Result<()> {
    let missing = missing_in(table, scheme, categories);
    if missing.is_empty() {
        Ok(())
    } else {
        Err(Error::IncompleteFactors { missing })
    }
}

/// Weighted mean `Σ wᵢ·sᵢ / Σ wᵢ` over the category's factors.
pub fn category_score(
    assignments: &[FactorAssignment],
    scheme: &RatingScheme,
    category: FactorCategory,
) -> Result<Rational> {
    let table = score_table(assignments, scheme)?;
    require_complete(&table, scheme, &[category])?;
    weighted_mean(&table, scheme, category)
}

/// Mean of the threat-agent and vulnerability category scores. With the
/// default equal weights this is the plain mean of the eight scores.
pub fn likelihood_score(
    assignments: &[FactorAssignment],
    scheme: &RatingScheme,
) -> Result<Rational> {
    let table = score_table(assignments, scheme)?;
    likelihood_from(&table, scheme)
}

fn likelihood_from(table: &BTreeMap<&str, u8>, scheme: &RatingScheme) -> Result<Rational> {
    require_complete(
        table,
        scheme,
        &[FactorCategory::ThreatAgent, FactorCategory::Vulnerability],
    )?;
    let agent = weighted_mean(table, scheme, FactorCategory::ThreatAgent)?;
    let vuln = weighted_mean(table, scheme, FactorCategory::Vulnerability)?;
    mean_of_two(agent, vuln, "likelihood")
}

pub fn impact_scores(
    assignments: &[FactorAssignment],
    scheme: &RatingScheme,
) -> Result<ImpactScores> {
    let table = score_table(assignments, scheme)?;
    impact_from(&table, scheme)
}

fn impact_from(table: &BTreeMap<&str, u8>, scheme: &RatingScheme) -> Result<ImpactScores> {
    require_complete(
        table,
        scheme,
        &[
            FactorCategory::TechnicalImpact,
            FactorCategory::BusinessImpact,
        ],
    )?;
    let technical = weighted_mean(table, scheme, FactorCategory::TechnicalImpact)?;
    let business = weighted_mean(table, scheme, FactorCategory::BusinessImpact)?;
    let final_score = match scheme.impact_mode {
        ImpactMode::MeanOfCategoryMeans => mean_of_two(technical, business, "final impact")?,
        ImpactMode::BusinessOnly => business,
    };
    Ok(ImpactScores {
        technical,
        business,
        final_score,
    })
}

/// Half-open classification: `[0, medium)` is low, `[medium, high)` is
/// medium, `[high, 9]` is high.
pub fn classify(score: Rational, thresholds: &Thresholds) -> Result<Level> {
    if score.is_negative() || score > Rational::from_integer(9) {
        return Err(Error::ScoreDomain(score.to_string()));
    }
    Ok(if score < thresholds.medium {
        Level::Low
    } else if score < thresholds.high {
        Level::Medium
    } else {
        Level::High
    })
}

/// Chart lookup. Only fails on a chart that never passed validation.
pub fn severity(likelihood: Level, impact: Level, chart: &SeverityChart) -> Result<Severity> {
    chart
        .get(likelihood, impact)
        .ok_or_else(|| Error::MissingChartCell {
            likelihood: likelihood.to_string(),
            impact: impact.to_string(),
        })
}

pub fn evaluate(assignments: &[FactorAssignment], scheme: &RatingScheme) -> Result<RiskRating> {
    let table = score_table(assignments, scheme)?;
    require_complete(&table, scheme, &FactorCategory::ALL)?;

    let likelihood_score = likelihood_from(&table, scheme)?;
    let impact = impact_from(&table, scheme)?;
    let likelihood_level = classify(likelihood_score, &scheme.likelihood_thresholds)?;
    let impact_level = classify(impact.final_score, &scheme.impact_thresholds)?;

    Ok(RiskRating {
        likelihood_score,
        likelihood_level,
        technical_impact_score: impact.technical,
        business_impact_score: impact.business,
        final_impact_score: impact.final_score,
        impact_level,
        severity: severity(likelihood_level, impact_level, &scheme.severity_chart)?,
    })
}
