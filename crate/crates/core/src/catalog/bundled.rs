// Codes follow the OWASP Top 10 for LLM Applications v1.1.0 ordering. The
// generic threat matrix this data comes from lists Insecure Plugin Design
// as LLM02 and Insecure Output Handling as LLM07; attributes are attached
// by threat name so that swap does not matter here.

use std::collections::BTreeSet;

use super::{StakeholderGroup, ThreatEntry};

use StakeholderGroup::{ApiIntegrationDeveloper as Api, EndUser as Eu, FineTuningDeveloper as Ft};

struct Row {
    id: &'static str,
    name: &'static str,
    causes: &'static [&'static str],
    consequences: &'static [&'static str],
    static_controls: &'static [&'static str],
    dynamic_controls: &'static [&'static str],
    traditional: bool,
    stakeholders: &'static [StakeholderGroup],
    note: Option<&'static str>,
}

const ROWS: &[Row] = &[
    Row {
        id: "LLM01",
        name: "Prompt Injection",
        causes: &[
            "Lack of control/validation on LLM's input",
            "LLM's implicit nature or design/architecture",
        ],
        consequences: &[
            "Reputation loss",
            "Partial IP loss",
            "Performance degradation",
            "User harm",
        ],
        static_controls: &[
            "Use trusted/reputed LLM service provider",
            "Input validation and filtering",
        ],
        dynamic_controls: &[
            "Adaptive trust boundaries for input source",
            "Monitoring of LLM outputs",
            "Red teaming",
            "LLM response monitoring/filtering",
        ],
        traditional: false,
        stakeholders: &[Ft, Api, Eu],
        note: None,
    },
    Row {
        id: "LLM02",
        name: "Insecure Output Handling",
        causes: &[
            "General purpose LLM's ability to generate arbitrary code and text",
            "Improper input validation or output scrutiny",
        ],
        consequences: &["IP loss", "Compromised system and data", "User harm"],
        static_controls: &[
            "Proper validation/filtering of output",
            "Output encoding to mitigate code execution",
            "Rate limiting",
        ],
        dynamic_controls: &[],
        traditional: false,
        stakeholders: &[Ft, Api, Eu],
        note: Some("Listed as LLM07 in the generic threat matrix table."),
    },
    Row {
        id: "LLM03",
        name: "Training Data Poisoning",
        causes: &["Poor vetting/verification of training data and data source"],
        consequences: &[
            "Reputation loss",
            "Model integrity loss",
            "Financial damage",
            "Misinformation and bias",
            "Performance degradation",
            "User harm",
        ],
        static_controls: &["Exhaustive analysis and sanitisation of all unvetted training dataset"],
        dynamic_controls: &[],
        traditional: false,
        stakeholders: &[Ft, Eu],
        note: None,
    },
    Row {
        id: "LLM04",
        name: "Model Denial of Service",
        causes: &[
            "Poor design and implementation",
            "Improper input validation",
        ],
        consequences: &["Financial and reputation loss"],
        static_controls: &[
            "Use proper input validation and filtering",
            "Rate-limiting",
            "Usage limit per user",
            "Adversarial input detection",
        ],
        dynamic_controls: &["Resource utilisation monitoring"],
        traditional: true,
        stakeholders: &[Ft, Api, Eu],
        note: None,
    },
    Row {
        id: "LLM05",
        name: "Supply Chain Vulnerabilities",
        causes: &["Poor security review and vetting of 3rd party components used"],
        consequences: &["Variable - Compromised system", "Performance degradation"],
        static_controls: &["Use only trusted/reputed 3rd party softwares and components"],
        dynamic_controls: &[],
        traditional: true,
        stakeholders: &[Ft, Api],
        note: None,
    },
    Row {
        id: "LLM06",
        name: "Sensitive Information Disclosure",
        causes: &[
            "Incomplete training data sanitization",
            "Training data memorisation",
        ],
        consequences: &[
            "Privacy violation",
            "Reputation damage",
            "Partial IP loss",
            "User harm",
        ],
        static_controls: &[
            "Training data monitoring to weed out sensitive information",
            "Differential privacy mechanisms",
            "Encrypt sensitive information",
        ],
        // The source row has an empty "Dynamic:" line.
        dynamic_controls: &[],
        traditional: false,
        stakeholders: &[Ft, Api, Eu],
        note: None,
    },
    Row {
        id: "LLM07",
        name: "Insecure Plugin Design",
        causes: &["Improper access control", "Poor design and implementation"],
        consequences: &["Compromised system"],
        static_controls: &[
            "Input sanitisation",
            "Parameterisation",
            "Validation",
            "Protect against all REST API security risks",
        ],
        dynamic_controls: &["Proper authorisation and authentication"],
        traditional: true,
        stakeholders: &[Ft, Api],
        note: Some("Listed as LLM02 in the generic threat matrix table."),
    },
    Row {
        id: "LLM08",
        name: "Excessive Agency",
        causes: &[
            "Design and implementation choices",
            "Improper access control",
        ],
        consequences: &["Variable - Compromised system"],
        static_controls: &[
            "Limit the permissions of LLMs",
            "Use components with granular functionalities than open-ended ones",
        ],
        dynamic_controls: &["Implement proper authorisation"],
        traditional: false,
        stakeholders: &[Ft, Api, Eu],
        note: None,
    },
    Row {
        id: "LLM09",
        name: "Overreliance",
        causes: &["Blindly trusting LLM generated content without review"],
        consequences: &["Misinformation", "Implementation of incorrect solutions"],
        static_controls: &["User awareness"],
        dynamic_controls: &["Output validation and review"],
        traditional: false,
        stakeholders: &[Eu],
        note: None,
    },
    Row {
        id: "LLM10",
        name: "Model Theft",
        causes: &["Weak access control", "Insider threats", "Model inversion"],
        consequences: &[
            "Reputation loss",
            "Model integrity loss",
            "Financial damage",
            "Misinformation",
            "Privacy violation",
        ],
        static_controls: &["Model obfuscation"],
        dynamic_controls: &[
            "Strong access controls and authentication",
            "Regular auditing",
        ],
        traditional: false,
        stakeholders: &[Ft],
        note: None,
    },
];

fn owned(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

pub(super) fn entries() -> Vec<ThreatEntry> {
    ROWS.iter()
        .map(|r| ThreatEntry {
            id: r.id.to_string(),
            name: r.name.to_string(),
            causes: owned(r.causes),
            consequences: owned(r.consequences),
            static_controls: owned(r.static_controls),
            dynamic_controls: owned(r.dynamic_controls),
            traditional_cybersec: r.traditional,
            stakeholders: r.stakeholders.iter().copied().collect::<BTreeSet<_>>(),
            note: r.note.map(str::to_string),
        })
        .collect()
}
