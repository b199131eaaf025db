//! Canonical document serialization shared by files and the HTTP API.
//!
//! Documents are pretty-printed JSON with a trailing newline. Struct fields
//! serialize in declaration order and maps are `BTreeMap`s, so identical
//! values always produce identical bytes.

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};

pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("in-memory documents serialize");
    out.push('\n');
    out
}

pub fn from_json<T: DeserializeOwned>(text: &str, locus: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::parse(locus, e))
}

/// Which kind of document a JSON text holds, judged by its top-level keys.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DocumentKind {
    Assessment,
    Scheme,
    Catalog,
}

pub fn sniff_kind(text: &str) -> Option<DocumentKind> {
    let value: serde_json::Value = serde_json::from_str(text).ok()?;
    let obj = value.as_object()?;
    if obj.contains_key("severity_chart") || obj.contains_key("factors") {
        Some(DocumentKind::Scheme)
    } else if obj.contains_key("entries") {
        Some(DocumentKind::Catalog)
    } else if obj.contains_key("threat") {
        Some(DocumentKind::Assessment)
    } else {
        None
    }
}
