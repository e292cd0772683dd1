//! Nonce lifecycle analysis: which variable each encrypt-family call receives
//! as its nonce, and whether fresh entropy is introduced between uses.

use std::sync::LazyLock;

use regex::Regex;

use crate::source::{SourceLocation, SourceUnit};

/// Nonce argument capture for `.encrypt(...)`, `.encrypt_in_place(...)` and
/// `.encrypt_in_place_detached(...)`: the first identifier argument, with an
/// optional `&`/`&mut` prefix.
pub static ENCRYPT_CAPTURE_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"\.encrypt(?:_in_place(?:_detached)?)?\s*\(\s*(?:&(?:mut\s+)?)?(\w+)").unwrap()
});

/// Any encrypt-family call, with or without a capturable argument.
pub static ENCRYPT_CALL_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\.encrypt(?:_in_place(?:_detached)?)?\s*\(").unwrap());

static FROM_SLICE_ARG_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"from_slice\s*\(\s*&?\s*(\w+)\s*\)").unwrap());

/// One nonce argument observed at an encrypt-family call site.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonceUse {
    pub variable: String,
    pub call_site: SourceLocation,
    /// Ordinal of the encrypt call in file order (0-based).
    pub call_index: usize,
    /// Offset of the captured variable token, used to bound regeneration scans.
    pub capture_offset: usize,
}

/// Capture the nonce variable of every encrypt-family call, in file order.
///
/// When the first token is a path segment (`Nonce::from_slice(&nb)` captures
/// `Nonce`), the variable inside `from_slice(..)` is used instead; calls whose
/// nonce expression has no identifier (e.g. a literal array) produce no use.
pub fn capture_nonce_uses(unit: &SourceUnit) -> Vec<NonceUse> {
    let text = &unit.scan_text;
    let mut uses = Vec::new();

    for (call_index, caps) in ENCRYPT_CAPTURE_RE.captures_iter(text).enumerate() {
        let token = caps.get(1).unwrap();
        let (variable, capture_offset) = if text[token.end()..].starts_with("::") {
            // Path expression; recover the identifier passed to from_slice.
            match FROM_SLICE_ARG_RE.captures_at(text, token.start()) {
                Some(inner) if inner.get(0).unwrap().start() == token.end() + 2 => {
                    let ident = inner.get(1).unwrap();
                    (ident.as_str().to_string(), ident.start())
                }
                _ => continue,
            }
        } else {
            (token.as_str().to_string(), token.start())
        };
        uses.push(NonceUse {
            variable,
            call_site: unit.location(caps.get(0).unwrap().start()),
            call_index,
            capture_offset,
        });
    }

    uses
}

/// Regeneration evidence for `var` between two uses: fill_bytes into it, or a
/// reassignment mentioning a secure randomness source.
pub fn regeneration_re(var: &str) -> Regex {
    let var = regex::escape(var);
    Regex::new(&format!(
        r"(?:OsRng\.fill_bytes|fill_bytes)\s*\(\s*&\s*mut\s+{var}\b|\b{var}\s*=.*?(?:OsRng|generate_nonce|generate_key|rand)"
    ))
    .unwrap()
}

/// Consecutive same-variable use pairs with no regeneration evidence between
/// them. Each pair is reported once, anchored at the second use.
pub fn unregenerated_pairs(unit: &SourceUnit, uses: &[NonceUse]) -> Vec<(NonceUse, NonceUse)> {
    let text = &unit.scan_text;
    let mut by_var: std::collections::BTreeMap<&str, Vec<&NonceUse>> = Default::default();
    for u in uses {
        by_var.entry(u.variable.as_str()).or_default().push(u);
    }

    let mut pairs = Vec::new();
    for (var, var_uses) in by_var {
        if var_uses.len() < 2 {
            continue;
        }
        let regen = regeneration_re(var);
        for pair in var_uses.windows(2) {
            let between = &text[pair[0].capture_offset..pair[1].capture_offset];
            if !regen.is_match(between) {
                pairs.push((pair[0].clone(), pair[1].clone()));
            }
        }
    }
    pairs.sort_by_key(|(_, second)| second.call_index);
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(text: &str) -> SourceUnit {
        SourceUnit::from_text("t.rs", text)
    }

    #[test]
    fn captures_plain_and_ref_args() {
        let u = unit("c.encrypt(nonce, m)?;\nc.encrypt(&nonce2, m)?;\nc.encrypt_in_place(&mut n3, b\"\", buf)?;");
        let uses = capture_nonce_uses(&u);
        let names: Vec<_> = uses.iter().map(|u| u.variable.as_str()).collect();
        assert_eq!(names, vec!["nonce", "nonce2", "n3"]);
        assert_eq!(uses[0].call_index, 0);
        assert_eq!(uses[2].call_index, 2);
    }

    #[test]
    fn path_capture_resolves_from_slice_argument() {
        let u = unit("cipher.encrypt(Nonce::from_slice(&nonce_bytes), pt)?;");
        let uses = capture_nonce_uses(&u);
        assert_eq!(uses.len(), 1);
        assert_eq!(uses[0].variable, "nonce_bytes");
    }

    #[test]
    fn literal_from_slice_has_no_variable() {
        let u = unit("cipher.encrypt(Nonce::from_slice(&[0u8; 12]), pt)?;");
        assert!(capture_nonce_uses(&u).is_empty());
    }

    #[test]
    fn reuse_without_regen_is_one_pair() {
        let text = "\
let nonce = ChaCha20Poly1305::generate_nonce(&mut OsRng);
let c1 = cipher.encrypt(&nonce, m1).expect(\"e1\");
let c2 = cipher.encrypt(&nonce, m2).expect(\"e2\");";
        let u = unit(text);
        let uses = capture_nonce_uses(&u);
        let pairs = unregenerated_pairs(&u, &uses);
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].1.variable, "nonce");
    }

    #[test]
    fn regeneration_between_uses_suppresses() {
        let text = "\
let mut nonce = ChaCha20Poly1305::generate_nonce(&mut OsRng);
let c1 = cipher.encrypt(&nonce, m1)?;
nonce = ChaCha20Poly1305::generate_nonce(&mut OsRng);
let c2 = cipher.encrypt(&nonce, m2)?;";
        let u = unit(text);
        let pairs = unregenerated_pairs(&u, &capture_nonce_uses(&u));
        assert!(pairs.is_empty());
    }

    #[test]
    fn fill_bytes_between_uses_suppresses() {
        let text = "\
c.encrypt(&nb, m1)?;
OsRng.fill_bytes(&mut nb);
c.encrypt(&nb, m2)?;";
        let u = unit(text);
        let pairs = unregenerated_pairs(&u, &capture_nonce_uses(&u));
        assert!(pairs.is_empty());
    }

    #[test]
    fn three_uses_two_pairs() {
        let text = "c.encrypt(&n, a)?; c.encrypt(&n, b)?; c.encrypt(&n, d)?;";
        let u = unit(text);
        let pairs = unregenerated_pairs(&u, &capture_nonce_uses(&u));
        assert_eq!(pairs.len(), 2);
    }

    #[test]
    fn different_variables_do_not_pair() {
        let text = "c.encrypt(&n1, a)?; c.encrypt(&n2, b)?;";
        let u = unit(text);
        assert!(unregenerated_pairs(&u, &capture_nonce_uses(&u)).is_empty());
    }
}
