//! Single-file source model: load a Rust source file and normalize it into a
//! scan-ready form where comments are blanked but every byte offset, line and
//! column stays identical to the original text.
//!
//! Detectors match against [`SourceUnit::scan_text`], so text inside comments
//! can never produce a finding, while string and byte-string literals are kept
//! verbatim (hardcoded keys live inside literals).

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SourceError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path} is not valid UTF-8")]
    Encoding { path: PathBuf },
    #[error("byte offset {offset} is out of range (len {len})")]
    OutOfRange { offset: usize, len: usize },
}

/// A 1-based line/column position plus the originating byte offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub struct SourceLocation {
    pub line: usize,
    pub column: usize,
    pub byte_offset: usize,
}

/// One loaded source file, normalized for scanning.
///
/// Invariants: `scan_text` has exactly the same length and newline positions
/// as `raw_text`; every comment byte is replaced by a space; literal contents
/// are untouched.
#[derive(Debug, Clone)]
pub struct SourceUnit {
    pub path: PathBuf,
    pub raw_text: String,
    pub scan_text: String,
    line_starts: Vec<usize>,
}

impl SourceUnit {
    /// Build a unit from in-memory text (the path is only used for reporting).
    pub fn from_text(path: impl Into<PathBuf>, raw_text: impl Into<String>) -> Self {
        let raw_text = raw_text.into();
        let scan_text = blank_comments(&raw_text);
        debug_assert_eq!(raw_text.len(), scan_text.len());
        let line_starts = compute_line_starts(&raw_text);
        SourceUnit {
            path: path.into(),
            raw_text,
            scan_text,
            line_starts,
        }
    }

    /// Byte offsets at which each 1-based line begins.
    pub fn line_starts(&self) -> &[usize] {
        &self.line_starts
    }

    /// Map a byte offset to its (line, column). Total over `0..=len`.
    pub fn offset_to_location(&self, offset: usize) -> Result<SourceLocation, SourceError> {
        if offset > self.raw_text.len() {
            return Err(SourceError::OutOfRange {
                offset,
                len: self.raw_text.len(),
            });
        }
        // partition_point returns the count of line starts <= offset; the
        // containing line is the last of those.
        let line = self.line_starts.partition_point(|&s| s <= offset);
        let line_start = self.line_starts[line - 1];
        Ok(SourceLocation {
            line,
            column: offset - line_start + 1,
            byte_offset: offset,
        })
    }

    /// Infallible variant for offsets known to be in range.
    pub fn location(&self, offset: usize) -> SourceLocation {
        self.offset_to_location(offset.min(self.raw_text.len()))
            .expect("clamped offset is always in range")
    }
}

/// Read and normalize one UTF-8 source file.
pub fn load_source(path: impl AsRef<Path>) -> Result<SourceUnit, SourceError> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| SourceError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let text = String::from_utf8(bytes).map_err(|_| SourceError::Encoding {
        path: path.to_path_buf(),
    })?;
    Ok(SourceUnit::from_text(path, text))
}

fn compute_line_starts(text: &str) -> Vec<usize> {
    let mut starts = vec![0];
    for (i, b) in text.bytes().enumerate() {
        if b == b'\n' {
            starts.push(i + 1);
        }
    }
    starts
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum LexState {
    Normal,
    LineComment,
    BlockComment(u32),
    Str,
    RawStr(u8),
    Char,
}

/// Replace every comment byte with a space, preserving newlines, string
/// literal contents, and total length.
///
/// Handles nested `/* /* */ */` by depth counting, line comments, string and
/// byte-string literals with escapes, raw (byte) strings delimited by up to
/// three `#`s, char literals, and lifetimes (`'a` never opens a char literal).
pub fn blank_comments(text: &str) -> String {
    let bytes = text.as_bytes();
    let mut out = bytes.to_vec();
    let mut state = LexState::Normal;
    let mut i = 0;

    while i < bytes.len() {
        match state {
            LexState::Normal => {
                let b = bytes[i];
                match b {
                    b'/' if i + 1 < bytes.len() && bytes[i + 1] == b'/' => {
                        state = LexState::LineComment;
                        out[i] = b' ';
                        out[i + 1] = b' ';
                        i += 2;
                    }
                    b'/' if i + 1 < bytes.len() && bytes[i + 1] == b'*' => {
                        state = LexState::BlockComment(1);
                        out[i] = b' ';
                        out[i + 1] = b' ';
                        i += 2;
                    }
                    b'"' => {
                        state = LexState::Str;
                        i += 1;
                    }
                    b'r' | b'b' => {
                        if let Some((hashes, consumed)) = raw_string_open(&bytes[i..]) {
                            state = LexState::RawStr(hashes);
                            i += consumed;
                        } else if b == b'b'
                            && i + 1 < bytes.len()
                            && bytes[i + 1] == b'"'
                            && !is_ident_continuation(bytes, i)
                        {
                            state = LexState::Str;
                            i += 2;
                        } else if b == b'b' && i + 1 < bytes.len() && bytes[i + 1] == b'\'' {
                            state = LexState::Char;
                            i += 2;
                        } else {
                            i += 1;
                        }
                    }
                    b'\'' => {
                        if is_char_literal_start(bytes, i) {
                            state = LexState::Char;
                            i += 1;
                        } else {
                            // lifetime marker, stay in normal mode
                            i += 1;
                        }
                    }
                    _ => i += 1,
                }
            }
            LexState::LineComment => {
                if bytes[i] == b'\n' {
                    state = LexState::Normal;
                } else {
                    out[i] = b' ';
                }
                i += 1;
            }
            LexState::BlockComment(depth) => {
                if bytes[i] == b'/' && i + 1 < bytes.len() && bytes[i + 1] == b'*' {
                    state = LexState::BlockComment(depth + 1);
                    out[i] = b' ';
                    out[i + 1] = b' ';
                    i += 2;
                } else if bytes[i] == b'*' && i + 1 < bytes.len() && bytes[i + 1] == b'/' {
                    out[i] = b' ';
                    out[i + 1] = b' ';
                    state = if depth == 1 {
                        LexState::Normal
                    } else {
                        LexState::BlockComment(depth - 1)
                    };
                    i += 2;
                } else {
                    if bytes[i] != b'\n' {
                        out[i] = b' ';
                    }
                    i += 1;
                }
            }
            LexState::Str => {
                match bytes[i] {
                    b'\\' => i += 2, // skip escaped byte
                    b'"' => {
                        state = LexState::Normal;
                        i += 1;
                    }
                    _ => i += 1,
                }
            }
            LexState::RawStr(hashes) => {
                if bytes[i] == b'"' && closes_raw_string(&bytes[i..], hashes) {
                    state = LexState::Normal;
                    i += 1 + hashes as usize;
                } else {
                    i += 1;
                }
            }
            LexState::Char => match bytes[i] {
                b'\\' => i += 2,
                b'\'' => {
                    state = LexState::Normal;
                    i += 1;
                }
                _ => i += 1,
            },
        }
    }

    // Comments are ASCII-space-blanked byte-for-byte; multibyte chars only
    // appear inside comments when the original was valid UTF-8, and each of
    // their bytes becomes one space, so the result stays valid UTF-8.
    String::from_utf8(out).expect("blanking preserves UTF-8 validity")
}

/// Detect `r"`, `r#"`, `br"`, `br#"` (and friends up to 3 hashes) at `bytes[0]`.
/// Returns (hash count, bytes consumed through the opening quote).
fn raw_string_open(bytes: &[u8]) -> Option<(u8, usize)> {
    let mut idx = 0;
    if bytes.first() == Some(&b'b') {
        idx += 1;
    }
    if bytes.get(idx) != Some(&b'r') {
        return None;
    }
    idx += 1;
    let mut hashes = 0u8;
    while hashes < 3 && bytes.get(idx) == Some(&b'#') {
        hashes += 1;
        idx += 1;
    }
    if bytes.get(idx) == Some(&b'"') {
        Some((hashes, idx + 1))
    } else {
        None
    }
}

fn closes_raw_string(bytes: &[u8], hashes: u8) -> bool {
    debug_assert_eq!(bytes[0], b'"');
    let n = hashes as usize;
    bytes.len() > n && bytes[1..=n].iter().all(|&b| b == b'#')
}

/// `'` starts a char literal only when it closes within a couple of chars;
/// otherwise it is a lifetime like `'a` or `'static`.
fn is_char_literal_start(bytes: &[u8], i: usize) -> bool {
    match bytes.get(i + 1) {
        Some(b'\\') => true,
        Some(_) => {
            // 'x' — a closing quote after one char (possibly multibyte).
            let mut j = i + 2;
            while j < bytes.len() && j <= i + 5 {
                if bytes[j] == b'\'' {
                    return true;
                }
                if (bytes[j] & 0xC0) != 0x80 {
                    break;
                }
                j += 1;
            }
            bytes.get(j) == Some(&b'\'')
        }
        None => false,
    }
}

/// True when bytes[i] is preceded by an identifier character, meaning the
/// `b`/`r` here is the tail of a name like `sub"` in `rub"..."` rather than a
/// literal prefix.
fn is_ident_continuation(bytes: &[u8], i: usize) -> bool {
    i > 0 && (bytes[i - 1].is_ascii_alphanumeric() || bytes[i - 1] == b'_')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_comment_is_blanked() {
        let unit = SourceUnit::from_text("t.rs", "let x = 1; // key = [0u8;32]\n");
        assert_eq!(unit.scan_text.len(), unit.raw_text.len());
        assert!(!unit.scan_text.contains("key"));
        assert!(unit.scan_text.starts_with("let x = 1; "));
        assert!(unit.scan_text.ends_with('\n'));
    }

    #[test]
    fn empty_file() {
        let unit = SourceUnit::from_text("t.rs", "");
        assert_eq!(unit.raw_text, "");
        assert_eq!(unit.scan_text, "");
        assert_eq!(unit.location(0), SourceLocation { line: 1, column: 1, byte_offset: 0 });
    }

    #[test]
    fn comment_free_text_is_unchanged() {
        let secure = "let mut nonce = [0u8; 12];\nOsRng.fill_bytes(&mut nonce);\n";
        let unit = SourceUnit::from_text("t.rs", secure);
        assert_eq!(unit.scan_text, unit.raw_text);
    }

    #[test]
    fn nested_block_comments() {
        let text = "a /* one /* two */ still */ b";
        let blanked = blank_comments(text);
        assert_eq!(blanked, "a                           b");
    }

    #[test]
    fn string_contents_preserved() {
        let text = "let s = \"// not a comment\"; // real\n";
        let blanked = blank_comments(text);
        assert!(blanked.contains("\"// not a comment\""));
        assert!(!blanked.contains("real"));
    }

    #[test]
    fn byte_string_and_raw_string_preserved() {
        let text = "let k = b\"secret /* x */\"; let r = r#\"// raw\"#;";
        let blanked = blank_comments(text);
        assert_eq!(blanked, text);
    }

    #[test]
    fn lifetimes_do_not_open_char_literals() {
        let text = "fn f<'a>(x: &'a str) { /* c */ }";
        let blanked = blank_comments(text);
        assert!(!blanked.contains("c */"));
        assert!(blanked.contains("&'a str"));
    }

    #[test]
    fn escaped_quote_in_string() {
        let text = "let s = \"he said \\\"hi\\\"\"; // tail";
        let blanked = blank_comments(text);
        assert!(blanked.contains("he said \\\"hi\\\""));
        assert!(!blanked.contains("tail"));
    }

    #[test]
    fn newlines_inside_comments_survive() {
        let text = "a\n/* line1\nline2\n*/\nb\n";
        let blanked = blank_comments(text);
        assert_eq!(
            text.matches('\n').count(),
            blanked.matches('\n').count()
        );
    }

    #[test]
    fn offset_origin_and_line_boundary() {
        let unit = SourceUnit::from_text("t.rs", "ab\ncd\n");
        assert_eq!(unit.location(0), SourceLocation { line: 1, column: 1, byte_offset: 0 });
        assert_eq!(unit.location(3), SourceLocation { line: 2, column: 1, byte_offset: 3 });
        assert_eq!(unit.location(4), SourceLocation { line: 2, column: 2, byte_offset: 4 });
    }

    #[test]
    fn offset_out_of_range() {
        let unit = SourceUnit::from_text("t.rs", "ab");
        assert!(unit.offset_to_location(3).is_err());
        assert!(unit.offset_to_location(2).is_ok());
    }

    #[test]
    fn blanking_is_idempotent() {
        let text = "let a = 1; /* c */ let b = \"/*\"; // d\n";
        let once = blank_comments(text);
        let twice = blank_comments(&once);
        assert_eq!(once, twice);
    }
}
