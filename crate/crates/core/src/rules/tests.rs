use super::*;
use crate::findings::RuleId;
use crate::source::SourceUnit;

fn unit(text: &str) -> SourceUnit {
    SourceUnit::from_text("t.rs", text)
}

fn rule_ids(findings: &[Finding]) -> Vec<RuleId> {
    findings.iter().map(|f| f.rule_id).collect()
}

// --- hardcoded secrets ------------------------------------------------------

#[test]
fn byte_string_key_is_flagged() {
    let u = unit(r#"let key = Key::from_slice(b"an example very very secret key.");"#);
    let f = detect_hardcoded_secret(&u);
    assert_eq!(f.len(), 1);
    assert_eq!(f[0].cwe, 798);
    assert_eq!(f[0].severity, crate::findings::Severity::Critical);
}

#[test]
fn initialize_then_fill_key_is_not_flagged() {
    let u = unit(
        "let mut key = [0u8; 32];\nOsRng.fill_bytes(&mut key);\nlet cipher = Aes256Gcm::new_from_slice(&key).unwrap();",
    );
    assert!(detect_hardcoded_secret(&u).is_empty());
}

#[test]
fn literal_key_variable_is_flagged_at_declaration() {
    let u = unit(
        "let key = [0u8; 32];\nlet cipher = Aes256Gcm::new_from_slice(&key).unwrap();",
    );
    let f = detect_hardcoded_secret(&u);
    assert_eq!(f.len(), 1);
    assert_eq!(f[0].location.line, 1);
}

#[test]
fn file_without_literals_is_clean() {
    let u = unit("fn main() { println!(\"hello\"); }");
    assert!(detect_hardcoded_secret(&u).is_empty());
}

#[test]
fn literal_nonce_variable_goes_to_static_nonce_not_798() {
    // 12-byte literal used as the encrypt nonce: CWE-329 territory.
    let u = unit("let nonce = [0u8; 12];\ncipher.encrypt(&nonce, m)?;");
    assert!(detect_hardcoded_secret(&u).is_empty());
    assert_eq!(detect_static_nonce(&u).len(), 1);
}

// --- nonce reuse in loop ----------------------------------------------------

#[test]
fn loop_with_encrypt_and_no_entropy_is_flagged() {
    let u = unit("let nonce = make();\nfor i in 0..3 { let ct = cipher.encrypt(&nonce, m)?; }");
    let f = detect_nonce_reuse_in_loop(&u);
    assert_eq!(f.len(), 1);
    assert_eq!(f[0].message, "encrypt() called inside a loop with no entropy source.");
}

#[test]
fn loop_regenerating_nonce_is_clean() {
    let u = unit(
        "for i in 0..3 {\n  OsRng.fill_bytes(&mut nonce_bytes);\n  cipher.encrypt(Nonce::from_slice(&nonce_bytes), m)?;\n}",
    );
    assert!(detect_nonce_reuse_in_loop(&u).is_empty());
}

#[test]
fn loop_without_encrypt_is_clean() {
    let u = unit("for i in 0..3 { println!(\"{}\", i); }");
    assert!(detect_nonce_reuse_in_loop(&u).is_empty());
}

// --- nonce reuse across calls -----------------------------------------------

const MULTI_CALL_SNIPPET: &str = r#"
let nonce = ChaCha20Poly1305::generate_nonce(&mut OsRng);
let ciphertext = cipher
    .encrypt(&nonce, plaintext.as_ref())
    .expect("encryption failed!");

// later in the program
let ciphertext_with_aad = cipher
    .encrypt(&nonce, chacha20poly1305::aead::Payload {
        msg: plaintext,
        aad: associated_data,
    })
    .expect("encryption with AAD failed");
"#;

#[test]
fn two_calls_same_nonce_is_one_finding() {
    let u = unit(MULTI_CALL_SNIPPET);
    let f = detect_nonce_reuse_multi_call(&u);
    assert_eq!(f.len(), 1);
    assert_eq!(f[0].cwe, 329);
}

#[test]
fn reassignment_between_calls_is_clean() {
    let u = unit(
        "let mut nonce = ChaCha20Poly1305::generate_nonce(&mut OsRng);\n\
         let c1 = cipher.encrypt(&nonce, m1)?;\n\
         nonce = ChaCha20Poly1305::generate_nonce(&mut OsRng);\n\
         let c2 = cipher.encrypt(&nonce, m2)?;",
    );
    assert!(detect_nonce_reuse_multi_call(&u).is_empty());
}

#[test]
fn single_call_is_clean() {
    let u = unit("let c = cipher.encrypt(&nonce, m)?;");
    assert!(detect_nonce_reuse_multi_call(&u).is_empty());
}

// --- static nonce -----------------------------------------------------------

#[test]
fn literal_from_slice_in_encrypt_is_flagged() {
    let u = unit("cipher.encrypt(Nonce::from_slice(&[0u8; 12]), pt)?;");
    let f = detect_static_nonce(&u);
    assert_eq!(f.len(), 1);
    assert_eq!(f[0].cwe, 329);
}

#[test]
fn randomized_from_slice_is_clean() {
    let u = unit(
        "let mut nonce = [0u8; 12];\nOsRng.fill_bytes(&mut nonce);\ncipher.encrypt(Nonce::from_slice(&nonce), pt)?;",
    );
    assert!(detect_static_nonce(&u).is_empty());
}

#[test]
fn from_slice_never_reaching_encrypt_is_clean() {
    let u = unit("let n = Nonce::from_slice(&[0u8; 12]);\nprintln!(\"{:?}\", n);");
    assert!(detect_static_nonce(&u).is_empty());
}

#[test]
fn bound_from_slice_reaching_encrypt_is_flagged() {
    let u = unit("let n = Nonce::from_slice(&[0u8; 12]);\ncipher.encrypt(n, pt)?;");
    assert_eq!(detect_static_nonce(&u).len(), 1);
}

// --- weak randomness --------------------------------------------------------

#[test]
fn small_rng_is_flagged() {
    let u = unit("let mut rng = SmallRng::from_entropy();\nrng.fill_bytes(&mut key);");
    let f = detect_weak_randomness(&u);
    assert_eq!(f.len(), 1);
    assert_eq!(f[0].cwe, 330);
}

#[test]
fn seed_from_u64_is_flagged() {
    let u = unit("let mut rng = StdRng::seed_from_u64(42);");
    assert_eq!(detect_weak_randomness(&u).len(), 1);
}

#[test]
fn os_rng_only_is_clean() {
    let u = unit("let key = Aes256Gcm::generate_key(&mut OsRng);");
    assert!(detect_weak_randomness(&u).is_empty());
}

#[test]
fn thread_rng_for_key_bytes_is_flagged() {
    let u = unit("let key_bytes: [u8; 32] = thread_rng().gen();");
    assert_eq!(detect_weak_randomness(&u).len(), 1);
}

#[test]
fn thread_rng_for_shuffling_is_clean() {
    let u = unit("items.shuffle(&mut thread_rng());");
    assert!(detect_weak_randomness(&u).is_empty());
}

// --- unsafe error handling ---------------------------------------------------

#[test]
fn expect_on_encrypt_is_flagged() {
    let u = unit("let ct = cipher.encrypt(&nonce, m).expect(\"encryption failed!\");");
    let f = detect_unsafe_error_handling(&u);
    assert_eq!(f.len(), 1);
    assert_eq!(f[0].cwe, 252);
}

#[test]
fn question_mark_is_clean() {
    let u = unit("let ct = cipher.encrypt(nonce, pt)?;");
    assert!(detect_unsafe_error_handling(&u).is_empty());
}

#[test]
fn unwrap_on_non_crypto_receiver_is_clean() {
    let u = unit("let last = some_vec.pop().unwrap();");
    assert!(detect_unsafe_error_handling(&u).is_empty());
}

#[test]
fn multiline_chain_is_followed() {
    let u = unit("let ct = cipher\n    .encrypt(&nonce, msg.as_ref())\n    .expect(\"fail\");");
    assert_eq!(detect_unsafe_error_handling(&u).len(), 1);
}

#[test]
fn unwrap_on_key_construction_is_flagged() {
    let u = unit("let cipher = Aes256Gcm::new_from_slice(&key).unwrap();");
    assert_eq!(detect_unsafe_error_handling(&u).len(), 1);
}

// --- key from external input --------------------------------------------------

#[test]
fn stdin_key_without_kdf_is_flagged() {
    let u = unit(
        "let mut line = String::new();\nstd::io::stdin().read_line(&mut line)?;\nlet key = Key::from_slice(line.as_bytes());",
    );
    let f = detect_key_from_external_input(&u);
    assert_eq!(f.len(), 1);
    assert_eq!(f[0].cwe, 326);
}

#[test]
fn kdf_between_read_and_key_is_clean() {
    let u = unit(
        "let mut line = String::new();\nstd::io::stdin().read_line(&mut line)?;\nlet derived = pbkdf2_hmac(line.as_bytes(), salt, 600_000);\nlet key = Key::from_slice(&derived);",
    );
    assert!(detect_key_from_external_input(&u).is_empty());
}

#[test]
fn generated_key_is_clean() {
    let u = unit("let key = Aes256Gcm::generate_key(&mut OsRng);");
    assert!(detect_key_from_external_input(&u).is_empty());
}

// --- deprecated APIs ------------------------------------------------------------

#[test]
fn new_aead_import_is_flagged() {
    let u = unit("use aes_gcm::NewAead;");
    let f = detect_deprecated_api(&u);
    assert_eq!(f.len(), 1);
    assert_eq!(f[0].cwe, 327);
}

#[test]
fn new_varkey_is_flagged() {
    let u = unit("let cipher = Aes256Gcm::new_varkey(&key).unwrap();");
    assert_eq!(detect_deprecated_api(&u).len(), 1);
}

#[test]
fn key_init_new_is_clean() {
    let u = unit("use aes_gcm::KeyInit;\nlet cipher = Aes256Gcm::new(&key);");
    assert!(detect_deprecated_api(&u).is_empty());
}

#[test]
fn raw_aes_without_aead_is_flagged() {
    let u = unit("use aes::Aes256;\nlet c = Aes256::new(&key.into());");
    assert_eq!(detect_deprecated_api(&u).len(), 1);
}

// --- missing secure generation ----------------------------------------------------

#[test]
fn encrypt_with_no_csprng_is_flagged_once() {
    let u = unit(
        "let key = [0u8; 32];\nlet nonce = [0u8; 12];\nlet a = cipher.encrypt(&nonce, m1)?;\nlet b = cipher.encrypt(&nonce, m2)?;",
    );
    let f = detect_missing_secure_generation(&u);
    assert_eq!(f.len(), 1);
    assert_eq!(f[0].cwe, 330);
}

#[test]
fn os_rng_anywhere_suppresses() {
    let u = unit("let key = Aes256Gcm::generate_key(&mut OsRng);\nlet ct = cipher.encrypt(&nonce, m)?;");
    assert!(detect_missing_secure_generation(&u).is_empty());
}

#[test]
fn no_encrypt_call_no_finding() {
    let u = unit("let key = [0u8; 32];");
    assert!(detect_missing_secure_generation(&u).is_empty());
}

// --- analyze ------------------------------------------------------------------

#[test]
fn multi_call_snippet_yields_exactly_three_findings() {
    let u = unit(MULTI_CALL_SNIPPET);
    let findings = analyze(&u);
    let mut ids = rule_ids(&findings);
    ids.sort();
    assert_eq!(
        ids,
        vec![
            RuleId::NonceReuseMultiCall,
            RuleId::UnsafeErrorHandling,
            RuleId::UnsafeErrorHandling,
        ]
    );
}

#[test]
fn secure_snippet_with_single_encrypt_is_clean() {
    let u = unit(
        "let key = Aes256Gcm::generate_key(&mut OsRng);\n\
         let cipher = Aes256Gcm::new(&key);\n\
         let mut nonce = [0u8; 12];\n\
         OsRng.fill_bytes(&mut nonce);\n\
         let ct = cipher.encrypt(Nonce::from_slice(&nonce), plaintext)?;",
    );
    assert!(analyze(&u).is_empty());
}

#[test]
fn empty_file_is_clean() {
    let u = unit("");
    assert!(analyze(&u).is_empty());
}

#[test]
fn findings_are_ordered_and_deduplicated() {
    let u = unit(
        "let key = [1u8; 32];\nlet cipher = Aes256Gcm::new_from_slice(&key).unwrap();\nlet ct = cipher.encrypt(&n, m).unwrap();",
    );
    let findings = analyze(&u);
    let positions: Vec<_> = findings
        .iter()
        .map(|f| (f.location.line, f.location.column, f.rule_id))
        .collect();
    let mut sorted = positions.clone();
    sorted.sort_by_key(|&(l, c, r)| (l, c, r.as_str()));
    assert_eq!(positions, sorted);
    let mut dedup = positions.clone();
    dedup.dedup();
    assert_eq!(positions, dedup);
}

#[test]
fn analyze_is_deterministic() {
    let u = unit(MULTI_CALL_SNIPPET);
    assert_eq!(analyze(&u), analyze(&u));
}

#[test]
fn findings_in_comments_never_fire() {
    let u = unit("// let key = Key::from_slice(b\"an example very very secret key.\");\nfn main() {}");
    assert!(analyze(&u).is_empty());
}
