//! The OWASP Top 10 for LLM applications as a queryable threat catalog.

mod bundled;

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const CATALOG_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StakeholderGroup {
    FineTuningDeveloper,
    ApiIntegrationDeveloper,
    EndUser,
}

impl StakeholderGroup {
    pub const ALL: [StakeholderGroup; 3] = [
        StakeholderGroup::FineTuningDeveloper,
        StakeholderGroup::ApiIntegrationDeveloper,
        StakeholderGroup::EndUser,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StakeholderGroup::FineTuningDeveloper => "fine_tuning_developer",
            StakeholderGroup::ApiIntegrationDeveloper => "api_integration_developer",
            StakeholderGroup::EndUser => "end_user",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            StakeholderGroup::FineTuningDeveloper => "LLM Fine-tuning Developers",
            StakeholderGroup::ApiIntegrationDeveloper => "LLM API Integration Developers",
            StakeholderGroup::EndUser => "End Users",
        }
    }
}

impl fmt::Display for StakeholderGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StakeholderGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "finetuningdeveloper"
            | "finetuningdevelopers"
            | "finetuning"
            | "llmfinetuningdevelopers" => Ok(StakeholderGroup::FineTuningDeveloper),
            "apiintegrationdeveloper"
            | "apiintegrationdevelopers"
            | "apiintegration"
            | "api"
            | "llmapiintegrationdevelopers" => Ok(StakeholderGroup::ApiIntegrationDeveloper),
            "enduser" | "endusers" => Ok(StakeholderGroup::EndUser),
            _ => Err(Error::Usage {
                what: "stakeholder".to_string(),
                value: s.to_string(),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreatEntry {
    pub id: String,
    pub name: String,
    pub causes: Vec<String>,
    pub consequences: Vec<String>,
    pub static_controls: Vec<String>,
    pub dynamic_controls: Vec<String>,
    pub traditional_cybersec: bool,
    pub stakeholders: BTreeSet<StakeholderGroup>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ThreatEntry {
    pub fn concerns(&self, group: StakeholderGroup) -> bool {
        self.stakeholders.contains(&group)
    }

    /// All controls, static first.
    pub fn controls(&self) -> impl Iterator<Item = &str> {
        self.static_controls
            .iter()
            .chain(&self.dynamic_controls)
            .map(String::as_str)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum CatalogSource {
    #[default]
    Bundled,
    File(PathBuf),
}

impl fmt::Display for CatalogSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogSource::Bundled => f.write_str("bundled"),
            CatalogSource::File(p) => write!(f, "{}", p.display()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub format_version: u32,
    #[serde(skip)]
    pub source: CatalogSource,
    pub entries: Vec<ThreatEntry>,
}

fn valid_threat_id(id: &str) -> bool {
    id.len() == 5 && id.starts_with("LLM") && id[3..].chars().all(|c| c.is_ascii_digit())
}

impl Catalog {
    pub fn bundled() -> Self {
        Catalog {
            format_version: CATALOG_FORMAT_VERSION,
            source: CatalogSource::Bundled,
            entries: bundled::entries(),
        }
    }

    /// Parses and checks a catalog document.
    pub fn from_json(text: &str, source: CatalogSource) -> Result<Self> {
        let locus = source.to_string();
        if text.trim().is_empty() {
            return Err(Error::CatalogLoad {
                locus,
                message: "no entries".to_string(),
            });
        }
        let mut catalog: Catalog = serde_json::from_str(text).map_err(|e| Error::CatalogLoad {
            locus: format!("{locus}:{}:{}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        catalog.source = source;
        catalog.check()?;
        Ok(catalog)
    }

    fn check(&self) -> Result<()> {
        let fail = |locus: String, message: String| Err(Error::CatalogLoad { locus, message });
        if self.format_version != CATALOG_FORMAT_VERSION {
            return fail(
                self.source.to_string(),
                format!("unsupported format_version {}", self.format_version),
            );
        }
        if self.entries.is_empty() {
            return fail(self.source.to_string(), "no entries".to_string());
        }
        let mut ids = HashSet::new();
        let mut names = HashSet::new();
        for (i, entry) in self.entries.iter().enumerate() {
            let locus = format!("entries[{i}] ({})", entry.id);
            if !valid_threat_id(&entry.id) {
                return fail(
                    locus,
                    format!("id `{}` does not match LLM<two digits>", entry.id),
                );
            }
            if !ids.insert(entry.id.as_str()) {
                return fail(locus, format!("duplicate id `{}`", entry.id));
            }
            if !names.insert(entry.name.to_ascii_lowercase()) {
                return fail(locus, format!("duplicate name `{}`", entry.name));
            }
            if entry.stakeholders.is_empty() {
                return fail(locus, "empty stakeholder set".to_string());
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        crate::format::to_canonical_json(self)
    }

    /// Looks a threat up by code (`LLM01`) or by name, case-insensitively.
    pub fn resolve(&self, reference: &str) -> Option<&ThreatEntry> {
        let r = reference.trim();
        self.entries
            .iter()
            .find(|e| e.id.eq_ignore_ascii_case(r))
            .or_else(|| self.entries.iter().find(|e| e.name.eq_ignore_ascii_case(r)))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn load_catalog(source: CatalogSource) -> Result<Catalog> {
    match source {
        CatalogSource::Bundled => Ok(Catalog::bundled()),
        CatalogSource::File(path) => load_file(&path),
    }
}

fn load_file(path: &Path) -> Result<Catalog> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Catalog::from_json(&text, CatalogSource::File(path.to_path_buf()))
}

pub fn filter_by_stakeholder(catalog: &Catalog, group: StakeholderGroup) -> Vec<&ThreatEntry> {
    catalog
        .entries
        .iter()
        .filter(|e| e.concerns(group))
        .collect()
}

pub fn filter_traditional(catalog: &Catalog, flag: bool) -> Vec<&ThreatEntry> {
    catalog
        .entries
        .iter()
        .filter(|e| e.traditional_cybersec == flag)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use StakeholderGroup::*;

    fn names(entries: &[&ThreatEntry]) -> Vec<String> {
        entries.iter().map(|e| e.name.clone()).collect()
    }

    #[test]
    fn bundled_shape() {
        let c = load_catalog(CatalogSource::Bundled).unwrap();
        assert_eq!(c.len(), 10);
        assert_eq!(c.entries[0].id, "LLM01");
        assert_eq!(c.entries[0].name, "Prompt Injection");
        let ids: Vec<_> = c.entries.iter().map(|e| e.id.as_str()).collect();
        let expected: Vec<String> = (1..=10).map(|i| format!("LLM{i:02}")).collect();
        assert_eq!(ids, expected);
        c.check().unwrap();
    }

    #[test]
    fn overreliance_is_end_user_only() {
        let c = Catalog::bundled();
        let e = c.resolve("Overreliance").unwrap();
        assert_eq!(e.stakeholders, BTreeSet::from([EndUser]));
    }

    #[test]
    fn stakeholder_filters() {
        let c = Catalog::bundled();
        let end_users = filter_by_stakeholder(&c, EndUser);
        let mut got = names(&end_users);
        got.sort();
        let mut want = vec![
            "Prompt Injection",
            "Training Data Poisoning",
            "Model Denial of Service",
            "Sensitive Information Disclosure",
            "Insecure Output Handling",
            "Excessive Agency",
            "Overreliance",
        ];
        want.sort();
        assert_eq!(got, want);

        let ft = filter_by_stakeholder(&c, FineTuningDeveloper);
        assert_eq!(ft.len(), 9);
        assert!(ft.iter().all(|e| e.name != "Overreliance"));

        let api = names(&filter_by_stakeholder(&c, ApiIntegrationDeveloper));
        assert_eq!(api.len(), 7);
        for excluded in ["Training Data Poisoning", "Overreliance", "Model Theft"] {
            assert!(!api.iter().any(|n| n == excluded), "{excluded}");
        }
    }

    #[test]
    fn filters_keep_catalog_order() {
        let c = Catalog::bundled();
        for g in StakeholderGroup::ALL {
            let ids: Vec<_> = filter_by_stakeholder(&c, g)
                .iter()
                .map(|e| e.id.clone())
                .collect();
            let mut sorted = ids.clone();
            sorted.sort();
            assert_eq!(ids, sorted);
        }
    }

    #[test]
    fn traditional_flag() {
        let c = Catalog::bundled();
        let mut yes = names(&filter_traditional(&c, true));
        yes.sort();
        assert_eq!(
            yes,
            [
                "Insecure Plugin Design",
                "Model Denial of Service",
                "Supply Chain Vulnerabilities"
            ]
        );
        assert_eq!(filter_traditional(&c, false).len(), 7);

        let empty = Catalog {
            entries: vec![],
            ..Catalog::bundled()
        };
        assert!(filter_traditional(&empty, true).is_empty());
    }

    #[test]
    fn empty_and_malformed_files() {
        let err = Catalog::from_json("", CatalogSource::Bundled).unwrap_err();
        assert!(err.to_string().contains("no entries"), "{err}");
        let err = Catalog::from_json(
            r#"{"format_version":1,"entries":[]}"#,
            CatalogSource::Bundled,
        )
        .unwrap_err();
        assert!(err.to_string().contains("no entries"));
        let err = Catalog::from_json("{not json", CatalogSource::Bundled).unwrap_err();
        assert_eq!(err.code(), "catalog_load");
    }

    #[test]
    fn duplicate_and_empty_stakeholders_rejected() {
        let mut c = Catalog::bundled();
        c.entries[1].id = "LLM01".into();
        let err = Catalog::from_json(&c.to_json(), CatalogSource::Bundled).unwrap_err();
        assert!(err.to_string().contains("duplicate id"), "{err}");
        assert!(err.locus().unwrap().contains("entries[1]"));

        let mut c = Catalog::bundled();
        c.entries[3].stakeholders.clear();
        let err = Catalog::from_json(&c.to_json(), CatalogSource::Bundled).unwrap_err();
        assert!(err.to_string().contains("empty stakeholder set"));

        let mut c = Catalog::bundled();
        c.entries[0].id = "LLM1".into();
        assert!(Catalog::from_json(&c.to_json(), CatalogSource::Bundled).is_err());
    }

    #[test]
    fn export_reparses_equal() {
        let c = Catalog::bundled();
        let again = Catalog::from_json(&c.to_json(), CatalogSource::Bundled).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn stakeholder_parsing() {
        assert_eq!("end_user".parse::<StakeholderGroup>().unwrap(), EndUser);
        assert_eq!("End Users".parse::<StakeholderGroup>().unwrap(), EndUser);
        assert_eq!(
            "fine-tuning".parse::<StakeholderGroup>().unwrap(),
            FineTuningDeveloper
        );
        assert_eq!(
            "api".parse::<StakeholderGroup>().unwrap(),
            ApiIntegrationDeveloper
        );
        assert!("auditor".parse::<StakeholderGroup>().is_err());
    }
}
