//! Loop body extraction by brace-depth counting.
//!
//! Regexes like `for.*encrypt` fail on nested structures and multi-line
//! formatting, so each `for`/`while`/`loop` body is extracted as an exact
//! brace-balanced span before any in-loop rule runs.

use std::sync::LazyLock;

use regex::Regex;

use crate::source::{SourceLocation, SourceUnit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoopKind {
    For,
    While,
    Loop,
}

/// The exact text between a loop's opening brace and its matching close.
#[derive(Debug, Clone)]
pub struct LoopBody {
    pub header_kind: LoopKind,
    pub body_text: String,
    pub body_start: SourceLocation,
    /// Byte span of `body_text` within the unit (exclusive of both braces).
    pub span: (usize, usize),
}

/// A non-fatal note produced while scanning (e.g. a loop body left open at
/// end of file). Notes never abort a scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanNote {
    pub location: SourceLocation,
    pub message: String,
}

static LOOP_KEYWORD_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\b(for|while|loop)\b").unwrap());

/// Extract every loop body in file order. Nested loops each produce their own
/// body. A body left unbalanced at end of file is skipped with a note.
pub fn extract_loop_bodies(unit: &SourceUnit) -> (Vec<LoopBody>, Vec<ScanNote>) {
    let text = &unit.scan_text;
    let mut bodies = Vec::new();
    let mut notes = Vec::new();

    for caps in LOOP_KEYWORD_RE.captures_iter(text) {
        let keyword = caps.get(1).unwrap();
        let kind = match keyword.as_str() {
            "for" => LoopKind::For,
            "while" => LoopKind::While,
            _ => LoopKind::Loop,
        };
        let Some(open) = find_body_open(text, keyword.end()) else {
            continue;
        };
        match matching_close(text.as_bytes(), open) {
            Some(close) => {
                let span = (open + 1, close);
                bodies.push(LoopBody {
                    header_kind: kind,
                    body_text: text[span.0..span.1].to_string(),
                    body_start: unit.location(span.0),
                    span,
                });
            }
            None => notes.push(ScanNote {
                location: unit.location(keyword.start()),
                message: format!(
                    "unbalanced braces: {} body starting at offset {} never closes; skipped",
                    keyword.as_str(),
                    open
                ),
            }),
        }
    }

    (bodies, notes)
}

/// Find the loop's opening `{`: the first brace after the header at
/// paren/bracket depth zero. Gives up at a `;` or `}` at depth zero, which
/// means the keyword was not a loop header after all (e.g. `break 'loop_label`).
fn find_body_open(text: &str, from: usize) -> Option<usize> {
    let bytes = text.as_bytes();
    let mut depth = 0i32;
    let mut i = from;
    while i < bytes.len() {
        match bytes[i] {
            b'(' | b'[' => depth += 1,
            b')' | b']' => depth -= 1,
            b'{' if depth == 0 => return Some(i),
            b';' | b'}' if depth == 0 => return None,
            _ => {}
        }
        i += 1;
    }
    None
}

/// Index of the `}` matching the `{` at `open`, by depth counting.
pub fn matching_close(bytes: &[u8], open: usize) -> Option<usize> {
    debug_assert_eq!(bytes[open], b'{');
    let mut depth = 0i32;
    for (i, &b) in bytes.iter().enumerate().skip(open) {
        match b {
            b'{' => depth += 1,
            b'}' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}
