//! Compiler diagnostic parsing and the four-class error taxonomy.
//!
//! Input is the cargo/clippy line-delimited JSON message stream
//! (`--message-format=json`). Each non-compiling sample is assigned exactly
//! one dominant error class so class shares over a sample set sum to 100%.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagnosticLevel {
    Error,
    Warning,
    Note,
}

/// One compiler message, with the original text preserved verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub level: DiagnosticLevel,
    pub code: Option<String>,
    pub message: String,
    pub primary_span: Option<(String, usize, usize)>,
}

/// The four recurring error classes, plus the compiled case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ErrorClass {
    ApiHallucination,
    TypeError,
    TraitError,
    UnresolvedImport,
    NoError,
}

impl ErrorClass {
    pub const FAILING: [ErrorClass; 4] = [
        ErrorClass::ApiHallucination,
        ErrorClass::TypeError,
        ErrorClass::TraitError,
        ErrorClass::UnresolvedImport,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorClass::ApiHallucination => "api_hallucination",
            ErrorClass::TypeError => "type_error",
            ErrorClass::TraitError => "trait_error",
            ErrorClass::UnresolvedImport => "unresolved_import",
            ErrorClass::NoError => "no_error",
        }
    }

    pub fn parse(s: &str) -> Option<ErrorClass> {
        match s {
            "api_hallucination" => Some(ErrorClass::ApiHallucination),
            "type_error" => Some(ErrorClass::TypeError),
            "trait_error" => Some(ErrorClass::TraitError),
            "unresolved_import" => Some(ErrorClass::UnresolvedImport),
            "no_error" => Some(ErrorClass::NoError),
            _ => None,
        }
    }
}

impl std::fmt::Display for ErrorClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Parsed diagnostics for one sample plus a compiled verdict and its dominant
/// error class. `compiled` is true iff there are zero error-level diagnostics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompilationOutcome {
    pub sample_id: String,
    pub compiled: bool,
    pub diagnostics: Vec<Diagnostic>,
    pub dominant_class: ErrorClass,
}

impl CompilationOutcome {
    pub fn from_diagnostics(sample_id: impl Into<String>, diagnostics: Vec<Diagnostic>) -> Self {
        let dominant = dominant_class(&diagnostics);
        CompilationOutcome {
            sample_id: sample_id.into(),
            compiled: dominant == ErrorClass::NoError,
            diagnostics,
            dominant_class: dominant,
        }
    }
}

/// Lines that could not be parsed; the stream continues past them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParsedStream {
    pub diagnostics: Vec<Diagnostic>,
    /// (1-based line number, error description) for skipped malformed lines.
    pub malformed: Vec<(usize, String)>,
}

/// Parse a cargo `--message-format=json` stream. Records that are not
/// compiler messages (`build-finished`, `compiler-artifact`, ...) are
/// skipped; malformed JSON lines are reported by line number and skipped.
pub fn parse_diagnostics(stream: &str) -> ParsedStream {
    let mut out = ParsedStream::default();
    for (idx, line) in stream.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let value: serde_json::Value = match serde_json::from_str(trimmed) {
            Ok(v) => v,
            Err(e) => {
                out.malformed.push((idx + 1, e.to_string()));
                continue;
            }
        };
        if value.get("reason").and_then(|r| r.as_str()) != Some("compiler-message") {
            continue;
        }
        let Some(message) = value.get("message") else {
            continue;
        };
        let level = match message.get("level").and_then(|l| l.as_str()) {
            Some("error") | Some("error: internal compiler error") => DiagnosticLevel::Error,
            Some("warning") => DiagnosticLevel::Warning,
            Some(_) => DiagnosticLevel::Note,
            None => continue,
        };
        let code = message
            .get("code")
            .and_then(|c| c.get("code"))
            .and_then(|c| c.as_str())
            .map(str::to_string);
        let text = message
            .get("message")
            .and_then(|m| m.as_str())
            .unwrap_or_default()
            .to_string();
        let primary_span = message
            .get("spans")
            .and_then(|s| s.as_array())
            .and_then(|spans| {
                spans.iter().find(|s| {
                    s.get("is_primary").and_then(|p| p.as_bool()).unwrap_or(false)
                })
            })
            .and_then(|span| {
                Some((
                    span.get("file_name")?.as_str()?.to_string(),
                    span.get("line_start")?.as_u64()? as usize,
                    span.get("column_start")?.as_u64()? as usize,
                ))
            });
        out.diagnostics.push(Diagnostic {
            level,
            code,
            message: text,
            primary_span,
        });
    }
    out
}

/// Classify a single error-level diagnostic.
///
/// Error codes are stabler than message text, so the code table decides
/// first; unmapped codes fall back to message keywords, and anything left
/// is a type error (the most generic of the four classes).
pub fn classify_error(diag: &Diagnostic) -> ErrorClass {
    if let Some(code) = diag.code.as_deref() {
        match code {
            "E0599" | "E0425" | "E0624" => return ErrorClass::ApiHallucination,
            "E0432" | "E0433" => return ErrorClass::UnresolvedImport,
            "E0277" | "E0283" => return ErrorClass::TraitError,
            "E0308" | "E0106" | "E0495" | "E0621" => return ErrorClass::TypeError,
            _ => {}
        }
    }
    let msg = diag.message.to_ascii_lowercase();
    if msg.contains("no method named")
        || msg.contains("no function or associated item")
        || msg.contains("cannot find function")
        || msg.contains("cannot find value")
    {
        ErrorClass::ApiHallucination
    } else if msg.contains("unresolved import") || msg.contains("failed to resolve") {
        ErrorClass::UnresolvedImport
    } else if msg.contains("trait bound") || msg.contains("the trait") {
        ErrorClass::TraitError
    } else {
        ErrorClass::TypeError
    }
}

/// One class per sample: `NoError` when nothing is error-level, otherwise the
/// present class of highest precedence. API hallucinations outrank everything
/// because hallucinated calls typically cascade into secondary type errors.
pub fn dominant_class(diags: &[Diagnostic]) -> ErrorClass {
    let mut present = [false; 4];
    for diag in diags.iter().filter(|d| d.level == DiagnosticLevel::Error) {
        let class = classify_error(diag);
        let idx = match class {
            ErrorClass::ApiHallucination => 0,
            ErrorClass::UnresolvedImport => 1,
            ErrorClass::TraitError => 2,
            ErrorClass::TypeError => 3,
            ErrorClass::NoError => unreachable!("classify_error never returns NoError"),
        };
        present[idx] = true;
    }
    if present[0] {
        ErrorClass::ApiHallucination
    } else if present[1] {
        ErrorClass::UnresolvedImport
    } else if present[2] {
        ErrorClass::TraitError
    } else if present[3] {
        ErrorClass::TypeError
    } else {
        ErrorClass::NoError
    }
}
