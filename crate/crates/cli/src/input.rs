//! Reading annotation files in whichever format they are in.

use std::io::Read;
use std::path::Path;

use predhead::convert::{from_columns_stream, from_standoff_str};
use predhead::inline::{parse_document, parse_document_bytes};
use predhead::{Document, ParseDiagnostic};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Inline,
    Standoff,
    Columns,
}

/// A document plus the 1-based source line of each of its units.
#[derive(Debug)]
pub struct Loaded {
    pub doc: Document,
    pub unit_lines: Vec<usize>,
}

#[derive(Debug, Default)]
pub struct LoadResult {
    pub docs: Vec<Loaded>,
    /// Malformed-input messages, already rendered.
    pub errors: Vec<String>,
}

pub fn label(path: &Path) -> String {
    if path.as_os_str() == "-" {
        "<stdin>".to_string()
    } else {
        path.display().to_string()
    }
}

pub fn read_bytes(path: &Path) -> Result<Vec<u8>, String> {
    let mut buf = Vec::new();
    let res = if path.as_os_str() == "-" {
        std::io::stdin().lock().read_to_end(&mut buf).map(|_| ())
    } else {
        std::fs::File::open(path).and_then(|mut f| f.read_to_end(&mut buf)).map(|_| ())
    };
    res.map(|_| buf).map_err(|e| format!("{}: {e}", label(path)))
}

fn is_column_row(line: &str) -> bool {
    let fields: Vec<&str> = line.split('\t').collect();
    fields.len() == 3
        && fields[0].chars().count() == 1
        && (fields[1] == "O" || fields[1].starts_with("B-") || fields[1].starts_with("I-"))
}

/// Guesses the format from the first non-blank line.
pub fn sniff(text: &str) -> Format {
    match text.lines().find(|l| !l.trim().is_empty()) {
        Some(l) if l == "# doc" || l.starts_with("# doc ") || l.starts_with("# meta ") || is_column_row(l) => {
            Format::Columns
        }
        Some(l) if l.starts_with('{') && serde_json::from_str::<serde_json::Value>(l).is_ok() => Format::Standoff,
        _ => Format::Inline,
    }
}

pub fn render_parse_diagnostic(file: &str, d: &ParseDiagnostic) -> String {
    format!("{file}:{}:{}: {} {}", d.line, d.column, d.code, d.message)
}

/// Strict inline parse used by the `parse` subcommand.
pub fn load_inline(file: &str, bytes: &[u8]) -> LoadResult {
    let parsed = parse_document_bytes(bytes);
    LoadResult {
        errors: parsed.diagnostics.iter().map(|d| render_parse_diagnostic(file, d)).collect(),
        docs: vec![Loaded { doc: parsed.document, unit_lines: parsed.unit_lines }],
    }
}

fn column_unit_lines(text: &str) -> Vec<usize> {
    let mut lines = Vec::new();
    let mut in_unit = false;
    for (i, line) in text.split('\n').enumerate() {
        if line.is_empty() || line == "# doc" || line.starts_with("# doc ") || line.starts_with("# meta ") {
            in_unit = false;
        } else if !in_unit {
            lines.push(i + 1);
            in_unit = true;
        }
    }
    lines
}

fn standoff_record_lines(text: &str) -> Vec<usize> {
    text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()).map(|(i, _)| i + 1).collect()
}

/// Loads any supported format. A file in inline format is one document;
/// standoff and column files may hold several.
pub fn load_any(file: &str, bytes: &[u8]) -> LoadResult {
    let text = match std::str::from_utf8(bytes) {
        Ok(t) => t,
        Err(_) => return load_inline(file, bytes),
    };
    match sniff(text) {
        Format::Inline => {
            let parsed = parse_document(text);
            LoadResult {
                errors: parsed.diagnostics.iter().map(|d| render_parse_diagnostic(file, d)).collect(),
                docs: vec![Loaded { doc: parsed.document, unit_lines: parsed.unit_lines }],
            }
        }
        Format::Standoff => match from_standoff_str(text) {
            Ok(docs) => {
                let lines = standoff_record_lines(text);
                let docs = docs
                    .into_iter()
                    .zip(lines)
                    .map(|(doc, line)| Loaded { unit_lines: vec![line; doc.units.len()], doc })
                    .collect();
                LoadResult { docs, errors: Vec::new() }
            }
            Err(e) => LoadResult { docs: Vec::new(), errors: vec![format!("{file}: {e}")] },
        },
        Format::Columns => match from_columns_stream(text) {
            Ok(docs) => {
                let mut lines = column_unit_lines(text).into_iter();
                let docs = docs
                    .into_iter()
                    .map(|doc| Loaded { unit_lines: lines.by_ref().take(doc.units.len()).collect(), doc })
                    .collect();
                LoadResult { docs, errors: Vec::new() }
            }
            Err(e) => LoadResult { docs: Vec::new(), errors: vec![format!("{file}: {e}")] },
        },
    }
}

/// True for a document with nothing to serialize.
pub fn is_empty(doc: &Document) -> bool {
    doc.id.is_empty() && doc.metadata.is_empty() && doc.units.is_empty()
}
