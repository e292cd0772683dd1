//! Variable provenance tracking.
//!
//! The initialize-then-fill pattern is idiomatic Rust but statement-level
//! pattern matching cannot tell it apart from a hardcoded value. Provenance
//! follows a variable from its `let` declaration to its first cryptographic
//! use and records whether a CSPRNG overwrote it in between.

use regex::Regex;

use crate::source::{SourceLocation, SourceUnit};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Declared from a literal array or byte-string literal and never
    /// overwritten by an entropy source before use.
    LiteralOnly,
    /// Literal-initialized, then overwritten by an entropy source strictly
    /// between declaration and use.
    RandomizedBeforeUse,
    /// Anything else (function results, parameters, heap buffers, ...).
    NonLiteral,
}

#[derive(Debug, Clone)]
pub struct ProvenanceState {
    pub variable: String,
    pub declared_at: SourceLocation,
    pub classification: Provenance,
    /// Trimmed initializer text when the declaration had one.
    pub init_expr: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("variable `{0}` is not declared in this file")]
pub struct UnknownVariable(pub String);

struct Declaration {
    /// Offset of the `let` keyword.
    let_offset: usize,
    /// Initializer span (after `=`, up to the terminating `;`), if any.
    init_span: Option<(usize, usize)>,
}

/// Classify `variable` as seen from `use_offset`. Shadowing is handled by
/// binding to the nearest `let` declaration preceding the use.
pub fn track_provenance(
    unit: &SourceUnit,
    variable: &str,
    use_offset: usize,
) -> Result<ProvenanceState, UnknownVariable> {
    let text = &unit.scan_text;
    let decl = declarations_of(text, variable)
        .into_iter()
        .filter(|d| d.let_offset < use_offset)
        .next_back()
        .ok_or_else(|| UnknownVariable(variable.to_string()))?;

    let declared_at = unit.location(decl.let_offset);
    let init_expr = decl
        .init_span
        .map(|(s, e)| text[s..e.min(text.len())].trim().to_string());

    let is_literal_init = init_expr
        .as_deref()
        .map(is_literal_expr)
        .unwrap_or(false);

    if !is_literal_init {
        return Ok(ProvenanceState {
            variable: variable.to_string(),
            declared_at,
            classification: Provenance::NonLiteral,
            init_expr,
        });
    }

    let decl_end = decl.init_span.map(|(_, e)| e).unwrap_or(decl.let_offset);
    let window = &text[decl_end.min(use_offset)..use_offset];
    let classification = if entropy_write_re(variable).is_match(window) {
        Provenance::RandomizedBeforeUse
    } else {
        Provenance::LiteralOnly
    };

    Ok(ProvenanceState {
        variable: variable.to_string(),
        declared_at,
        classification,
        init_expr,
    })
}

/// A literal array (`[0u8; 12]`, `[1, 2, 3]`) or byte-string literal.
/// Plain `"..."` strings and `vec![...]` are deliberately not literals here:
/// chained `&str`/heap-buffer material is a documented blind spot.
fn is_literal_expr(expr: &str) -> bool {
    let e = expr.trim_start();
    e.starts_with('[') || e.starts_with("b\"")
}

/// Entropy-source writes to `var`: a (try_)fill_bytes into it, or a
/// reassignment whose right side mentions a CSPRNG constructor.
fn entropy_write_re(var: &str) -> Regex {
    let var = regex::escape(var);
    Regex::new(&format!(
        r"(?:OsRng\.fill_bytes|fill_bytes|try_fill_bytes)\s*\(\s*&\s*mut\s+{var}\b|\b{var}\s*=[^;]*?(?:OsRng|generate_nonce|generate_key)"
    ))
    .unwrap()
}

/// Every `let [mut] var` declaration of `var`, in file order, with the
/// initializer span when present. The `=`/`;` search tracks paren and bracket
/// depth so type annotations like `[u8; 32]` do not end the statement early.
fn declarations_of(text: &str, var: &str) -> Vec<Declaration> {
    let re = Regex::new(&format!(r"\blet\s+(?:mut\s+)?{}\b", regex::escape(var))).unwrap();
    let bytes = text.as_bytes();
    let mut decls = Vec::new();

    for m in re.find_iter(text) {
        let mut depth = 0i32;
        let mut i = m.end();
        let mut init_start = None;
        let mut init_span = None;
        while i < bytes.len() {
            match bytes[i] {
                b'(' | b'[' | b'{' => depth += 1,
                b')' | b']' | b'}' => {
                    if depth == 0 {
                        break; // ran out of the enclosing block: malformed, stop
                    }
                    depth -= 1;
                }
                b'=' if depth == 0 && init_start.is_none() => {
                    // skip ==, =>, <=, >=, != which cannot introduce an initializer
                    let prev = bytes[i - 1];
                    let next = bytes.get(i + 1).copied().unwrap_or(b' ');
                    if next != b'=' && next != b'>' && prev != b'<' && prev != b'>' && prev != b'!' && prev != b'=' {
                        init_start = Some(i + 1);
                    }
                }
                b';' if depth == 0 => {
                    init_span = init_start.map(|s| (s, i));
                    break;
                }
                _ => {}
            }
            i += 1;
        }
        decls.push(Declaration {
            let_offset: m.start(),
            init_span,
        });
    }
    decls
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::SourceUnit;

    fn prov(text: &str, var: &str) -> Provenance {
        let unit = SourceUnit::from_text("t.rs", text);
        let use_offset = unit.scan_text.rfind("encrypt").unwrap_or(unit.scan_text.len());
        track_provenance(&unit, var, use_offset)
            .map(|s| s.classification)
            .unwrap_or(Provenance::NonLiteral)
    }

    #[test]
    fn initialize_then_fill_is_randomized() {
        let text = "let mut nonce = [0u8; 12];\nOsRng.fill_bytes(&mut nonce);\ncipher.encrypt(&nonce, m)?;";
        assert_eq!(prov(text, "nonce"), Provenance::RandomizedBeforeUse);
    }

    #[test]
    fn bare_literal_is_literal_only() {
        let text = "let nonce = [0u8; 12];\ncipher.encrypt(&nonce, m)?;";
        assert_eq!(prov(text, "nonce"), Provenance::LiteralOnly);
    }

    #[test]
    fn generated_key_is_non_literal() {
        let text = "let key = Aes256Gcm::generate_key(&mut OsRng);\ncipher.encrypt(&n, m)?;";
        assert_eq!(prov(text, "key"), Provenance::NonLiteral);
    }

    #[test]
    fn fill_after_use_does_not_count() {
        let text = "let nonce = [0u8; 12];\ncipher.encrypt(&nonce, m)?;\nOsRng.fill_bytes(&mut nonce);";
        assert_eq!(prov(text, "nonce"), Provenance::LiteralOnly);
    }

    #[test]
    fn try_fill_bytes_counts() {
        let text = "let mut k = [0u8; 32];\nOsRng.try_fill_bytes(&mut k).unwrap();\ncipher.encrypt(&k, m)?;";
        assert_eq!(prov(text, "k"), Provenance::RandomizedBeforeUse);
    }

    #[test]
    fn reassignment_from_csprng_counts() {
        let text = "let mut nonce = [0u8; 12];\nnonce = fresh(&mut OsRng);\ncipher.encrypt(&nonce, m)?;";
        assert_eq!(prov(text, "nonce"), Provenance::RandomizedBeforeUse);
    }

    #[test]
    fn unknown_variable_errors() {
        let unit = SourceUnit::from_text("t.rs", "let a = 1;");
        assert!(track_provenance(&unit, "ghost", 9).is_err());
    }

    #[test]
    fn shadowing_binds_to_nearest_declaration() {
        let text = "let nonce = [0u8; 12];\nOsRng.fill_bytes(&mut nonce);\nlet nonce = [9u8; 12];\ncipher.encrypt(&nonce, m)?;";
        // the second `let` restarts provenance; its fill happened before it
        assert_eq!(prov(text, "nonce"), Provenance::LiteralOnly);
    }

    #[test]
    fn type_annotation_with_array_length() {
        let text = "let key: [u8; 32] = [0u8; 32];\ncipher.encrypt(&key, m)?;";
        assert_eq!(prov(text, "key"), Provenance::LiteralOnly);
    }

    #[test]
    fn byte_string_is_literal() {
        let text = "let key = b\"0123456789abcdef0123456789abcdef\";\ncipher.encrypt(&key, m)?;";
        assert_eq!(prov(text, "key"), Provenance::LiteralOnly);
    }

    #[test]
    fn plain_str_is_not_literal() {
        let text = "let key_str = \"my secret key value\";\ncipher.encrypt(&key_str, m)?;";
        assert_eq!(prov(text, "key_str"), Provenance::NonLiteral);
    }
}
