//! Published report schema and its validator.
//!
//! Every experiment emits one JSON object with a fixed envelope; CI runs
//! the validator over fresh outputs. Violations carry a JSON pointer to the
//! offending field.

use serde_json::Value;

pub const SCHEMA_VERSION: &str = "1";

/// Validate a report document against the envelope schema.
///
/// Required fields: `schema_version` (string, must equal the published
/// version), `artifact_version` (string), `experiment` (non-empty string),
/// `seed` (unsigned integer), `config` (object), `pass` (bool), `results`
/// (object). Errors name the field by JSON pointer.
pub fn report_schema_validate(doc: &Value) -> Result<(), String> {
    let obj = doc
        .as_object()
        .ok_or_else(|| "/: report must be a JSON object".to_string())?;
    let field = |name: &str| -> Result<&Value, String> {
        obj.get(name)
            .ok_or_else(|| format!("/{name}: required field missing"))
    };
    let version = field("schema_version")?
        .as_str()
        .ok_or_else(|| "/schema_version: must be a string".to_string())?;
    if version != SCHEMA_VERSION {
        return Err(format!(
            "/schema_version: version {version:?} does not match published version {SCHEMA_VERSION:?}"
        ));
    }
    if field("artifact_version")?.as_str().is_none() {
        return Err("/artifact_version: must be a string".into());
    }
    match field("experiment")?.as_str() {
        Some(s) if !s.is_empty() => {}
        Some(_) => return Err("/experiment: must be non-empty".into()),
        None => return Err("/experiment: must be a string".into()),
    }
    if field("seed")?.as_u64().is_none() {
        return Err("/seed: must be an unsigned integer".into());
    }
    if !field("config")?.is_object() {
        return Err("/config: must be an object".into());
    }
    if field("pass")?.as_bool().is_none() {
        return Err("/pass: must be a boolean".into());
    }
    if !field("results")?.is_object() {
        return Err("/results: must be an object".into());
    }
    Ok(())
}

/// Validate a report file on disk.
pub fn validate_report_file(path: &std::path::Path) -> Result<(), String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let doc: Value =
        serde_json::from_str(&text).map_err(|e| format!("invalid JSON: {e}"))?;
    report_schema_validate(&doc)
}
