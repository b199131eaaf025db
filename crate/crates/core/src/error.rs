use std::path::PathBuf;

use thiserror::Error;

use crate::report::Issue;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the toolkit can report. Each variant maps onto exactly one
/// machine code (see [`Error::code`]) so API clients can branch on it.
#[derive(Debug, Error)]
pub enum Error {
    #[error("incomplete factor assignment, missing: {}", .missing.join(", "))]
    IncompleteFactors { missing: Vec<String> },

    #[error("unknown factor `{0}`")]
    UnknownFactor(String),

    #[error("factor `{0}` assigned more than once")]
    DuplicateAssignment(String),

    #[error("score {score} for `{factor}` is outside 0..=9")]
    ScoreOutOfRange { factor: String, score: u32 },

    #[error("score {0} is outside [0, 9]")]
    ScoreDomain(String),

    #[error("category `{0}` has no factor with positive weight")]
    ZeroWeight(String),

    #[error("severity chart has no cell for ({likelihood}, {impact})")]
    MissingChartCell { likelihood: String, impact: String },

    #[error("arithmetic overflow while computing `{0}`")]
    Overflow(String),

    #[error("invalid rating scheme: {}", summarize(.0))]
    InvalidScheme(Vec<Issue>),

    #[error("invalid document: {}", summarize(.0))]
    InvalidDocument(Vec<Issue>),

    #[error("catalog load failed at {locus}: {message}")]
    CatalogLoad { locus: String, message: String },

    #[error("cannot move from {from} to {to}: only the next lifecycle state may be entered")]
    Sequencing { from: String, to: String },

    #[error("cannot enter {target}: {guard}")]
    GuardUnmet { target: String, guard: String },

    #[error("threat `{threat}` is targeted by more than one assessment ({first}, {second})")]
    AmbiguousAssessment {
        threat: String,
        first: String,
        second: String,
    },

    #[error("assessment `{document}` references unknown threat `{threat}`")]
    UnknownThreat { document: String, threat: String },

    #[error("version conflict on `{id}`: expected revision {expected}, found {actual}")]
    VersionConflict {
        id: String,
        expected: u64,
        actual: u64,
    },

    #[error("`{0}` not found")]
    NotFound(String),

    #[error("unknown output format `{0}` (expected csv, md or json)")]
    UnknownFormat(String),

    #[error("invalid value for {what}: `{value}`")]
    Usage { what: String, value: String },

    #[error("could not parse {locus}: {message}")]
    Parse { locus: String, message: String },

    #[error("I/O failure on {}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn summarize(issues: &[Issue]) -> String {
    issues
        .iter()
        .map(|i| i.message.as_str())
        .collect::<Vec<_>>()
        .join("; ")
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(locus: impl Into<String>, err: impl std::fmt::Display) -> Self {
        Error::Parse {
            locus: locus.into(),
            message: err.to_string(),
        }
    }

    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::IncompleteFactors { .. } => "incomplete_factors",
            Error::UnknownFactor(_) => "unknown_factor",
            Error::DuplicateAssignment(_) => "duplicate_assignment",
            Error::ScoreOutOfRange { .. } => "score_out_of_range",
            Error::ScoreDomain(_) => "score_domain",
            Error::ZeroWeight(_) => "zero_weight",
            Error::MissingChartCell { .. } => "missing_chart_cell",
            Error::Overflow(_) => "arithmetic_overflow",
            Error::InvalidScheme(_) => "invalid_scheme",
            Error::InvalidDocument(_) => "invalid_document",
            Error::CatalogLoad { .. } => "catalog_load",
            Error::Sequencing { .. } => "sequencing",
            Error::GuardUnmet { .. } => "guard_unmet",
            Error::AmbiguousAssessment { .. } => "ambiguous_assessment",
            Error::UnknownThreat { .. } => "unknown_threat",
            Error::VersionConflict { .. } => "version_conflict",
            Error::NotFound(_) => "not_found",
            Error::UnknownFormat(_) => "unknown_format",
            Error::Usage { .. } => "usage",
            Error::Parse { .. } => "parse",
            Error::Io { .. } => "io_failure",
        }
    }

    /// The factor, document, or file the error points at, when there is one.
    pub fn locus(&self) -> Option<String> {
        match self {
            Error::IncompleteFactors { missing } => Some(missing.join(",")),
            Error::UnknownFactor(f) | Error::DuplicateAssignment(f) => Some(f.clone()),
            Error::ScoreOutOfRange { factor, .. } => Some(factor.clone()),
            Error::ZeroWeight(c) => Some(c.clone()),
            Error::InvalidScheme(issues) | Error::InvalidDocument(issues) => {
                issues.iter().find_map(|i| i.locus.clone())
            }
            Error::CatalogLoad { locus, .. } | Error::Parse { locus, .. } => Some(locus.clone()),
            Error::AmbiguousAssessment { threat, .. } => Some(threat.clone()),
            Error::UnknownThreat { document, .. } => Some(document.clone()),
            Error::VersionConflict { id, .. } | Error::NotFound(id) => Some(id.clone()),
            Error::Io { path, .. } => Some(path.display().to_string()),
            _ => None,
        }
    }

    /// Errors caused by how the tool was invoked rather than by the data.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::UnknownFormat(_) | Error::Usage { .. })
    }
}
