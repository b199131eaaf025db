use std::fmt;
use std::str::FromStr;

use super::{MatrixRow, ThreatMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Markdown,
    Json,
}

impl OutputFormat {
    pub fn content_type(self) -> &'static str {
        match self {
            OutputFormat::Csv => "text/csv; charset=utf-8",
            OutputFormat::Markdown => "text/markdown; charset=utf-8",
            OutputFormat::Json => "application/json",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "md" | "markdown" | "markup_table" => Ok(OutputFormat::Markdown),
            "json" | "canonical_json" => Ok(OutputFormat::Json),
            _ => Err(Error::UnknownFormat(s.to_string())),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Markdown => "md",
            OutputFormat::Json => "json",
        })
    }
}

const HEADER: [&str; 11] = [
    "S.No",
    "Risk Description",
    "Causes",
    "Consequences",
    "Likelihood",
    "Impact",
    "Risk Rating",
    "Static Controls",
    "Dynamic Controls",
    "Traditional Cybersec",
    "Concerned Stakeholders",
];

fn cells(row: &MatrixRow, list_sep: &str) -> [String; 11] {
    let join = |items: &[String]| items.join(list_sep);
    let rating = row.rating.as_ref();
    [
        row.id.clone(),
        row.name.clone(),
        join(&row.causes),
        join(&row.consequences),
        rating
            .map(|r| r.likelihood_level.to_string())
            .unwrap_or_default(),
        rating
            .map(|r| r.impact_level.to_string())
            .unwrap_or_default(),
        rating.map(|r| r.severity.to_string()).unwrap_or_default(),
        join(&row.static_controls),
        join(&row.dynamic_controls),
        if row.traditional_cybersec {
            "Yes"
        } else {
            "No"
        }
        .to_string(),
        row.stakeholders
            .iter()
            .map(|g| g.title())
            .collect::<Vec<_>>()
            .join(list_sep),
    ]
}

fn render_csv(matrix: &ThreatMatrix) -> Vec<u8> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer.write_record(HEADER).expect("write to memory");
    for row in &matrix.rows {
        writer
            .write_record(cells(row, "\n"))
            .expect("write to memory");
    }
    writer.into_inner().expect("flush to memory")
}

fn markdown_cell(text: &str) -> String {
    text.replace('|', "\\|").replace('\n', "<br>")
}

fn render_markdown(matrix: &ThreatMatrix) -> Vec<u8> {
    let mut out = String::new();
    let line = |cols: &[String]| format!("| {} |\n", cols.join(" | "));
    out.push_str(&line(&HEADER.map(String::from)));
    out.push_str(&line(&HEADER.map(|_| "---".to_string())));
    for row in &matrix.rows {
        let cols = cells(row, "\n").map(|c| markdown_cell(&c));
        out.push_str(&line(&cols));
    }
    out.into_bytes()
}

/// Deterministic bytes for the matrix in the requested format.
pub fn render(matrix: &ThreatMatrix, format: OutputFormat) -> Vec<u8> {
    match format {
        OutputFormat::Csv => render_csv(matrix),
        OutputFormat::Markdown => render_markdown(matrix),
        OutputFormat::Json => crate::format::to_canonical_json(matrix).into_bytes(),
    }
}
