use std::io::Write;
use std::path::Path;

use anyhow::Context as _;
use prstirling::scalar::format_rational;
use prstirling::ExactScalar;
use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputRecord {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub context: Value,
    pub payload: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<Value>,
}

impl OutputRecord {
    pub fn new(command: &'static str, context: Value, payload: Value) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command,
            context,
            payload,
            diagnostics: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("records serialize");
        text.push('\n');
        text
    }
}

pub fn strings(values: &[ExactScalar]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

/// Ragged CSV: metadata as `#` comment lines, then one row per `n`.
pub fn triangle_csv(comments: &[String], rows: &[Vec<ExactScalar>]) -> String {
    let mut out = String::new();
    for line in comments {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    for row in rows {
        out.push_str(&strings(row).join(","));
        out.push('\n');
    }
    out
}

/// Writes `text` to `path` via a sibling temp file and rename, or to stdout
/// when no path is given.
pub fn emit(text: &str, path: Option<&Path>) -> anyhow::Result<()> {
    let Some(path) = path else {
        std::io::stdout().write_all(text.as_bytes())?;
        return Ok(());
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating temp file in {}", dir.display()))?;
    tmp.write_all(text.as_bytes())?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
