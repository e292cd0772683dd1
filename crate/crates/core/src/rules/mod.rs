//! The nine crypto-misuse detectors and the combined `analyze` entry point.
//!
//! All detectors are pure functions over a normalized [`SourceUnit`]: regex
//! pattern matching plus lightweight structural analysis (variable provenance,
//! brace-depth loop extraction, nonce lifecycle tracking). No detector holds
//! state; a unit can be scanned from many threads at once.

pub mod lifecycle;
pub mod loops;
pub mod provenance;

use std::collections::BTreeSet;
use std::sync::LazyLock;

use regex::Regex;

use crate::findings::{Finding, RuleId};
use crate::source::SourceUnit;

pub use lifecycle::{capture_nonce_uses, NonceUse, ENCRYPT_CALL_RE, ENCRYPT_CAPTURE_RE};
pub use loops::{extract_loop_bodies, LoopBody, LoopKind, ScanNote};
pub use provenance::{track_provenance, Provenance, ProvenanceState, UnknownVariable};

/// CSPRNG / regeneration sources. Union of the entropy list used by the
/// in-loop rule and the regeneration sources recognized by lifecycle analysis.
static ENTROPY_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"\bOsRng\b|\bfill_bytes\b|\btry_fill_bytes\b|\bgenerate_nonce\b|\bgenerate_key\b")
        .unwrap()
});

static KEY_FROM_SLICE_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\bKey(?:::<[^>]{0,80}>)?::from_slice\s*\(").unwrap());

static NEW_FROM_SLICE_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\bnew_from_slice\s*\(").unwrap());

static NONCE_FROM_SLICE_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\bNonce::from_slice\s*\(").unwrap());

static CIPHER_NEW_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"\b(?:Aes\d+Gcm|ChaCha20Poly1305|XChaCha20Poly1305)::new\s*\(").unwrap()
});

static GENERIC_FROM_SLICE_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\bGenericArray::from_slice\s*\(").unwrap());

static UNWRAP_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\.(?:unwrap|expect)\s*\(").unwrap());

/// Operations whose results must not be unwrapped blindly: the encrypt and
/// decrypt families plus key/nonce construction.
static CRYPTO_OP_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"\.(?:en|de)crypt(?:_in_place(?:_detached)?)?\s*\(|\bKey(?:::<[^>]{0,80}>)?::from_slice|\bNonce::from_slice|\bgenerate_key\b|\bgenerate_nonce\b|\bnew_from_slice\s*\(",
    )
    .unwrap()
});

static EXTERNAL_INPUT_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"\bstdin\s*\(|\bread_line\b|\bread_to_string\b|\benv::var\b|\benv::args\b|\bargs\s*\(\s*\)")
        .unwrap()
});

static KDF_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)argon2|pbkdf2|\bscrypt\b|\bhkdf\b|derive_key").unwrap());

static WEAK_RNG_RES: LazyLock<Vec<(Regex, &'static str)>> = LazyLock::new(|| {
    vec![
        (Regex::new(r"\bSmallRng\b").unwrap(), "SmallRng is not a CSPRNG"),
        (Regex::new(r"\bXorShiftRng\b").unwrap(), "XorShiftRng is not a CSPRNG"),
        (
            Regex::new(r"\b\w+::seed_from_u64\b").unwrap(),
            "seeding an RNG from a u64 yields predictable output",
        ),
        (
            Regex::new(r#"\bfrom_seed\s*\(\s*(?:\[|b"|[0-9])"#).unwrap(),
            "RNG seeded from a constant",
        ),
    ]
});

static THREAD_RNG_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\bthread_rng\b").unwrap());
static KEY_MATERIAL_CONTEXT_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)key|nonce|\biv\b|_iv").unwrap());

static NEW_AEAD_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\bNewAead\b").unwrap());
static NEW_VARKEY_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\bnew_varkey\s*\(").unwrap());
static RAW_AES_IMPORT_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"\buse\s+aes\s*::|\bextern\s+crate\s+aes\s*;|\baes::Aes\d+\b").unwrap()
});
static AEAD_PRESENT_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"aes_gcm|chacha20poly1305|Aes\d+Gcm|ChaCha20Poly1305|Poly1305|\b[Aa]ead\b|\bGcm\b")
        .unwrap()
});

static LET_BINDING_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^\s*let\s+(?:mut\s+)?(\w+)\s*(?::[^=]*?)?=").unwrap());

/// Findings plus non-fatal notes for one scanned unit.
#[derive(Debug, Clone, Default)]
pub struct ScanReport {
    pub findings: Vec<Finding>,
    pub notes: Vec<ScanNote>,
}

/// Run all nine detectors, deduplicate by (rule, location) and order by
/// (line, column, rule id). Deterministic for a fixed input.
pub fn analyze(unit: &SourceUnit) -> Vec<Finding> {
    scan_unit(unit).findings
}

/// Like [`analyze`], but also returns scan notes (e.g. unbalanced braces).
pub fn scan_unit(unit: &SourceUnit) -> ScanReport {
    let mut findings = Vec::new();
    let mut notes = Vec::new();

    findings.extend(detect_hardcoded_secret(unit));
    {
        let (loop_findings, loop_notes) = detect_nonce_reuse_in_loop_with_notes(unit);
        findings.extend(loop_findings);
        notes.extend(loop_notes);
    }
    findings.extend(detect_nonce_reuse_multi_call(unit));
    findings.extend(detect_static_nonce(unit));
    findings.extend(detect_weak_randomness(unit));
    findings.extend(detect_unsafe_error_handling(unit));
    findings.extend(detect_key_from_external_input(unit));
    findings.extend(detect_deprecated_api(unit));
    findings.extend(detect_missing_secure_generation(unit));

    let mut seen = BTreeSet::new();
    findings.retain(|f| seen.insert((f.rule_id, f.location.byte_offset)));
    findings.sort_by(|a, b| {
        (a.location.line, a.location.column, a.rule_id.as_str()).cmp(&(
            b.location.line,
            b.location.column,
            b.rule_id.as_str(),
        ))
    });

    ScanReport { findings, notes }
}

// ---------------------------------------------------------------------------
// CWE-798: hardcoded secrets
// ---------------------------------------------------------------------------

/// Keys or nonces baked into the source as literal values. Provenance
/// tracking suppresses the initialize-then-fill pattern; literal nonce
/// material is left to the static-nonce rule.
pub fn detect_hardcoded_secret(unit: &SourceUnit) -> Vec<Finding> {
    let text = &unit.scan_text;
    let mut findings = Vec::new();

    // Literal byte strings or arrays passed straight into key construction.
    for re in [&*KEY_FROM_SLICE_RE, &*NEW_FROM_SLICE_RE] {
        for m in re.find_iter(text) {
            let Some(arg) = call_arg_text(text, m.end() - 1) else {
                continue;
            };
            let arg = arg.trim_start();
            if arg.starts_with("b\"") || arg.starts_with('[') || arg.starts_with("&[") {
                findings.push(finding_at(
                    unit,
                    RuleId::HardcodedSecret,
                    m.start(),
                    "literal key material passed directly to key construction",
                ));
            }
        }
    }

    // Literal-initialized variables used as key material.
    for usage in collect_material_uses(unit) {
        let Ok(state) = track_provenance(unit, &usage.variable, usage.offset) else {
            continue;
        };
        if state.classification != Provenance::LiteralOnly {
            continue;
        }
        if material_kind(&usage, &state) == MaterialKind::Key {
            findings.push(finding_at(
                unit,
                RuleId::HardcodedSecret,
                state.declared_at.byte_offset,
                format!("key material `{}` is a literal value never overwritten by a CSPRNG", usage.variable),
            ));
        }
    }

    findings
}

// ---------------------------------------------------------------------------
// CWE-329: nonce reuse in loop
// ---------------------------------------------------------------------------

pub fn detect_nonce_reuse_in_loop(unit: &SourceUnit) -> Vec<Finding> {
    detect_nonce_reuse_in_loop_with_notes(unit).0
}

fn detect_nonce_reuse_in_loop_with_notes(unit: &SourceUnit) -> (Vec<Finding>, Vec<ScanNote>) {
    let (bodies, notes) = extract_loop_bodies(unit);
    let mut findings = Vec::new();
    for body in &bodies {
        let Some(call) = ENCRYPT_CALL_RE.find(&body.body_text) else {
            continue;
        };
        if !ENTROPY_RE.is_match(&body.body_text) {
            findings.push(finding_at(
                unit,
                RuleId::NonceReuseInLoop,
                body.span.0 + call.start(),
                "encrypt() called inside a loop with no entropy source.",
            ));
        }
    }
    (findings, notes)
}

// ---------------------------------------------------------------------------
// CWE-329: nonce reuse across calls
// ---------------------------------------------------------------------------

/// Same nonce variable passed to two or more encrypt calls with no
/// regeneration evidence in between. One finding per consecutive
/// unregenerated pair, anchored at the second call.
pub fn detect_nonce_reuse_multi_call(unit: &SourceUnit) -> Vec<Finding> {
    let uses = capture_nonce_uses(unit);
    lifecycle::unregenerated_pairs(unit, &uses)
        .into_iter()
        .map(|(_, second)| {
            Finding::new(
                RuleId::NonceReuseMultiCall,
                second.call_site,
                format!(
                    "nonce `{}` reused across encrypt() calls without regeneration",
                    second.variable
                ),
                line_snippet(unit, second.call_site.byte_offset),
            )
        })
        .collect()
}

// ---------------------------------------------------------------------------
// CWE-329: static nonce
// ---------------------------------------------------------------------------

/// `Nonce::from_slice` over a literal array, or a literal-only variable used
/// as nonce material, whose result reaches an encrypt call.
pub fn detect_static_nonce(unit: &SourceUnit) -> Vec<Finding> {
    let text = &unit.scan_text;
    let mut findings = Vec::new();
    let encrypt_spans = encrypt_arg_spans(text);
    let captures = capture_nonce_uses(unit);

    for m in NONCE_FROM_SLICE_RE.find_iter(text) {
        let Some(arg) = call_arg_text(text, m.end() - 1) else {
            continue;
        };
        let reaches = within_any(&encrypt_spans, m.start())
            || binding_reaches_encrypt(text, m.start(), &captures);
        if !reaches {
            continue;
        }
        let arg_trimmed = arg.trim_start();
        if arg_trimmed.starts_with('[') || arg_trimmed.starts_with("&[") {
            findings.push(finding_at(
                unit,
                RuleId::StaticNonce,
                m.start(),
                "nonce built from a literal array and passed to encrypt()",
            ));
        } else if let Some(var) = leading_identifier(arg_trimmed) {
            if let Ok(state) = track_provenance(unit, var, m.start()) {
                if state.classification == Provenance::LiteralOnly {
                    findings.push(finding_at(
                        unit,
                        RuleId::StaticNonce,
                        state.declared_at.byte_offset,
                        format!("nonce `{var}` is a literal value passed to encrypt()"),
                    ));
                }
            }
        }
    }

    // Literal variables handed to encrypt directly, without from_slice.
    for usage in &captures {
        if let Ok(state) = track_provenance(unit, &usage.variable, usage.capture_offset) {
            if state.classification == Provenance::LiteralOnly {
                findings.push(finding_at(
                    unit,
                    RuleId::StaticNonce,
                    state.declared_at.byte_offset,
                    format!("nonce `{}` is a literal value passed to encrypt()", usage.variable),
                ));
            }
        }
    }

    findings
}

// ---------------------------------------------------------------------------
// CWE-330: weak randomness
// ---------------------------------------------------------------------------

pub fn detect_weak_randomness(unit: &SourceUnit) -> Vec<Finding> {
    let text = &unit.scan_text;
    let mut findings = Vec::new();
    let mut starts = BTreeSet::new();

    for (re, message) in WEAK_RNG_RES.iter() {
        for m in re.find_iter(text) {
            if starts.insert(m.start()) {
                findings.push(finding_at(unit, RuleId::WeakRandomness, m.start(), *message));
            }
        }
    }

    for m in THREAD_RNG_RE.find_iter(text) {
        let (stmt_start, stmt_end) = statement_bounds(text, m.start());
        if KEY_MATERIAL_CONTEXT_RE.is_match(&text[stmt_start..stmt_end]) && starts.insert(m.start())
        {
            findings.push(finding_at(
                unit,
                RuleId::WeakRandomness,
                m.start(),
                "thread_rng() used for key/nonce material; use OsRng",
            ));
        }
    }

    findings
}

// ---------------------------------------------------------------------------
// CWE-252: unsafe error handling
// ---------------------------------------------------------------------------

/// `.unwrap()`/`.expect(..)` chained on a cryptographic operation. At most one
/// finding per unwrap/expect call site.
pub fn detect_unsafe_error_handling(unit: &SourceUnit) -> Vec<Finding> {
    let text = &unit.scan_text;
    let mut findings = Vec::new();
    for m in UNWRAP_RE.find_iter(text) {
        let chain = &text[chain_start(text, m.start())..m.start()];
        if CRYPTO_OP_RE.is_match(chain) {
            findings.push(finding_at(
                unit,
                RuleId::UnsafeErrorHandling,
                m.start(),
                "unwrap()/expect() on a cryptographic operation result",
            ));
        }
    }
    findings
}

// ---------------------------------------------------------------------------
// CWE-326: key from external input
// ---------------------------------------------------------------------------

/// `Key::from_slice(var)` preceded by stdin/args/env input with no KDF
/// between the read and the call.
pub fn detect_key_from_external_input(unit: &SourceUnit) -> Vec<Finding> {
    let text = &unit.scan_text;
    let reads: Vec<usize> = EXTERNAL_INPUT_RE.find_iter(text).map(|m| m.start()).collect();
    if reads.is_empty() {
        return Vec::new();
    }

    let mut findings = Vec::new();
    for m in KEY_FROM_SLICE_RE.find_iter(text) {
        let Some(arg) = call_arg_text(text, m.end() - 1) else {
            continue;
        };
        let arg = arg.trim_start();
        if arg.starts_with("b\"") || arg.starts_with('[') || arg.starts_with("&[") {
            continue; // literal material is the hardcoded-secret rule's case
        }
        let Some(nearest_read) = reads.iter().copied().filter(|&r| r < m.start()).next_back()
        else {
            continue;
        };
        if !KDF_RE.is_match(&text[nearest_read..m.start()]) {
            findings.push(finding_at(
                unit,
                RuleId::KeyFromExternalInput,
                m.start(),
                "key built from external input without a key derivation function",
            ));
        }
    }
    findings
}

// ---------------------------------------------------------------------------
// CWE-327: deprecated APIs
// ---------------------------------------------------------------------------

pub fn detect_deprecated_api(unit: &SourceUnit) -> Vec<Finding> {
    let text = &unit.scan_text;
    let mut findings = Vec::new();

    for m in NEW_AEAD_RE.find_iter(text) {
        findings.push(finding_at(
            unit,
            RuleId::DeprecatedApi,
            m.start(),
            "NewAead was removed; construct ciphers with KeyInit::new()",
        ));
    }
    for m in NEW_VARKEY_RE.find_iter(text) {
        findings.push(finding_at(
            unit,
            RuleId::DeprecatedApi,
            m.start(),
            "new_varkey() was removed; use KeyInit::new_from_slice()",
        ));
    }
    if !AEAD_PRESENT_RE.is_match(text) {
        for m in RAW_AES_IMPORT_RE.find_iter(text) {
            findings.push(finding_at(
                unit,
                RuleId::DeprecatedApi,
                m.start(),
                "raw AES block cipher used without an authenticated mode",
            ));
        }
    }

    findings
}

// ---------------------------------------------------------------------------
// CWE-330: missing secure generation
// ---------------------------------------------------------------------------

/// encrypt() is called but no CSPRNG appears anywhere in the file. At most
/// one finding per file, anchored at the first encrypt call.
pub fn detect_missing_secure_generation(unit: &SourceUnit) -> Vec<Finding> {
    let text = &unit.scan_text;
    let Some(first_call) = ENCRYPT_CALL_RE.find(text) else {
        return Vec::new();
    };
    if ENTROPY_RE.is_match(text) {
        return Vec::new();
    }
    vec![finding_at(
        unit,
        RuleId::MissingSecureGeneration,
        first_call.start(),
        "encrypt() used but no CSPRNG usage found anywhere in the file",
    )]
}

// ---------------------------------------------------------------------------
// shared helpers
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum MaterialKind {
    Key,
    Nonce,
}

struct MaterialUse {
    variable: String,
    offset: usize,
    kind_hint: Option<MaterialKind>,
}

/// Every place a variable is consumed as key or nonce material: key/nonce
/// construction calls, cipher construction, and encrypt nonce arguments.
fn collect_material_uses(unit: &SourceUnit) -> Vec<MaterialUse> {
    let text = &unit.scan_text;
    let mut uses = Vec::new();

    let mut push_from = |re: &Regex, hint: Option<MaterialKind>| {
        for m in re.find_iter(text) {
            if let Some(arg) = call_arg_text(text, m.end() - 1) {
                if let Some(var) = leading_identifier(arg.trim_start()) {
                    uses.push(MaterialUse {
                        variable: var.to_string(),
                        offset: m.start(),
                        kind_hint: hint,
                    });
                }
            }
        }
    };

    push_from(&KEY_FROM_SLICE_RE, Some(MaterialKind::Key));
    push_from(&NEW_FROM_SLICE_RE, Some(MaterialKind::Key));
    push_from(&CIPHER_NEW_RE, Some(MaterialKind::Key));
    push_from(&NONCE_FROM_SLICE_RE, Some(MaterialKind::Nonce));
    push_from(&GENERIC_FROM_SLICE_RE, None);

    for cap in capture_nonce_uses(unit) {
        uses.push(MaterialUse {
            variable: cap.variable,
            offset: cap.capture_offset,
            kind_hint: Some(MaterialKind::Nonce),
        });
    }

    uses
}

/// Resolve key-vs-nonce for a literal variable: the receiving constructor
/// decides when known; otherwise size (12 bytes reads as a nonce, 32 as a
/// key, anything else defaults to key material).
fn material_kind(usage: &MaterialUse, state: &ProvenanceState) -> MaterialKind {
    if let Some(kind) = usage.kind_hint {
        return kind;
    }
    match state.init_expr.as_deref().and_then(literal_byte_len) {
        Some(12) => MaterialKind::Nonce,
        _ => MaterialKind::Key,
    }
}

/// Byte length of a literal initializer: `[x; N]` repeat counts, element
/// counts for `[a, b, c]`, content length for byte strings.
fn literal_byte_len(expr: &str) -> Option<usize> {
    static REPEAT_RE: LazyLock<Regex> =
        LazyLock::new(|| Regex::new(r"^\[\s*[^,\]]+;\s*(\d+)\s*\]").unwrap());
    let e = expr.trim();
    if let Some(caps) = REPEAT_RE.captures(e) {
        return caps[1].parse().ok();
    }
    if e.starts_with('[') && e.ends_with(']') {
        return Some(e[1..e.len() - 1].split(',').filter(|s| !s.trim().is_empty()).count());
    }
    if let Some(inner) = e.strip_prefix("b\"").and_then(|r| r.strip_suffix('"')) {
        return Some(inner.len());
    }
    None
}

/// Text of the arguments inside the call parens opening at `open_idx`.
fn call_arg_text(text: &str, open_idx: usize) -> Option<&str> {
    let close = matching_paren(text.as_bytes(), open_idx)?;
    Some(&text[open_idx + 1..close])
}

fn matching_paren(bytes: &[u8], open: usize) -> Option<usize> {
    debug_assert_eq!(bytes[open], b'(');
    let mut depth = 0i32;
    for (i, &b) in bytes.iter().enumerate().skip(open) {
        match b {
            b'(' => depth += 1,
            b')' => {
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

/// Leading identifier of an argument expression (`&mut nonce_bytes` gives
/// `nonce_bytes`). Path expressions (`Nonce::from_slice`), literals, and
/// string prefixes (the `b` of `b"..."`) give nothing.
fn leading_identifier(arg: &str) -> Option<&str> {
    static IDENT_RE: LazyLock<Regex> =
        LazyLock::new(|| Regex::new(r"^&?\s*(?:mut\s+)?([A-Za-z_]\w*)").unwrap());
    let caps = IDENT_RE.captures(arg)?;
    let ident = caps.get(1).unwrap();
    let rest = &arg[ident.end()..];
    if rest.starts_with("::") || rest.starts_with('"') || rest.starts_with('#') {
        return None;
    }
    Some(ident.as_str())
}

/// Byte spans (exclusive of parens) of every encrypt-family call's arguments.
fn encrypt_arg_spans(text: &str) -> Vec<(usize, usize)> {
    ENCRYPT_CALL_RE
        .find_iter(text)
        .filter_map(|m| {
            let open = m.end() - 1;
            matching_paren(text.as_bytes(), open).map(|close| (open + 1, close))
        })
        .collect()
}

fn within_any(spans: &[(usize, usize)], offset: usize) -> bool {
    spans.iter().any(|&(s, e)| offset >= s && offset < e)
}

/// When `Nonce::from_slice(..)` at `offset` is the initializer of a `let`
/// binding, check whether the bound variable later feeds an encrypt call.
fn binding_reaches_encrypt(text: &str, offset: usize, captures: &[NonceUse]) -> bool {
    let stmt_start = chain_start(text, offset);
    let stmt = &text[stmt_start..offset];
    let Some(caps) = LET_BINDING_RE.captures(stmt) else {
        return false;
    };
    let bound = caps.get(1).unwrap().as_str();
    captures
        .iter()
        .any(|u| u.variable == bound && u.capture_offset > offset)
}

/// Start of the receiver chain / statement containing `idx`: scan backwards
/// until a `;`, `{` or `}` at bracket depth zero, or the opening bracket of
/// the innermost enclosing group.
fn chain_start(text: &str, idx: usize) -> usize {
    let bytes = text.as_bytes();
    let mut depth = 0i32;
    let mut i = idx;
    while i > 0 {
        i -= 1;
        match bytes[i] {
            b')' | b']' | b'}' => depth += 1,
            b'(' | b'[' | b'{' => {
                if depth == 0 {
                    return i + 1;
                }
                depth -= 1;
            }
            b';' if depth == 0 => return i + 1,
            _ => {}
        }
    }
    0
}

/// Enclosing statement bounds for `idx`: backwards like [`chain_start`],
/// forwards to the next `;` at depth zero.
fn statement_bounds(text: &str, idx: usize) -> (usize, usize) {
    let start = chain_start(text, idx);
    let bytes = text.as_bytes();
    let mut depth = 0i32;
    let mut i = idx;
    while i < bytes.len() {
        match bytes[i] {
            b'(' | b'[' | b'{' => depth += 1,
            b')' | b']' | b'}' => {
                if depth == 0 {
                    return (start, i);
                }
                depth -= 1;
            }
            b';' if depth == 0 => return (start, i),
            _ => {}
        }
        i += 1;
    }
    (start, bytes.len())
}

fn finding_at(
    unit: &SourceUnit,
    rule: RuleId,
    offset: usize,
    message: impl Into<String>,
) -> Finding {
    Finding::new(rule, unit.location(offset), message, line_snippet(unit, offset))
}

/// The source line containing `offset`, trimmed, capped for report output.
fn line_snippet(unit: &SourceUnit, offset: usize) -> String {
    let loc = unit.location(offset);
    let starts = unit.line_starts();
    let start = starts[loc.line - 1];
    let end = starts.get(loc.line).map(|&e| e - 1).unwrap_or(unit.raw_text.len());
    let line = unit.raw_text[start..end].trim();
    if line.len() > 160 {
        let mut cut = 157;
        while !line.is_char_boundary(cut) {
            cut -= 1;
        }
        format!("{}...", &line[..cut])
    } else {
        line.to_string()
    }
}

#[cfg(test)]
mod tests;
