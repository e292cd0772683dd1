//! Dependency detection and injection into a sample's build manifest.

use std::sync::LazyLock;

use regex::Regex;
use serde::de::Error as _;
use thiserror::Error;

#[derive(Debug, Error)]
#[error("manifest is not valid TOML: {0}")]
pub struct ManifestParseError(#[from] toml::de::Error);

/// Module name as it appears in `use` paths -> (crate name, pinned version).
/// The two AEAD crates are pinned to the 0.10 line.
const DEPENDENCY_LEXICON: [(&str, &str, &str); 7] = [
    ("aes_gcm", "aes-gcm", "0.10"),
    ("chacha20poly1305", "chacha20poly1305", "0.10"),
    ("rand", "rand", "0.8"),
    ("rand_core", "rand_core", "0.6"),
    ("hex", "hex", "0.4"),
    ("base64", "base64", "0.21"),
    ("generic_array", "generic-array", "0.14"),
];

static IMPORT_RES: LazyLock<Vec<(Regex, &'static str, &'static str)>> = LazyLock::new(|| {
    DEPENDENCY_LEXICON
        .iter()
        .map(|&(module, crate_name, version)| {
            let re = Regex::new(&format!(
                r"\buse\s+{module}\b|\bextern\s+crate\s+{module}\b|\b{module}::"
            ))
            .unwrap();
            (re, crate_name, version)
        })
        .collect()
});

/// Crates the sample imports, per the recognition lexicon.
pub fn detect_dependencies(code: &str) -> Vec<(&'static str, &'static str)> {
    IMPORT_RES
        .iter()
        .filter(|(re, _, _)| re.is_match(code))
        .map(|&(_, crate_name, version)| (crate_name, version))
        .collect()
}

/// Add each recognized dependency to the manifest's `[dependencies]` table
/// at its pinned version, exactly once. Existing entries are left untouched,
/// so injecting twice is a no-op.
pub fn inject_dependencies(code: &str, manifest: &str) -> Result<String, ManifestParseError> {
    let mut doc: toml::Table = manifest.parse()?;
    let needed = detect_dependencies(code);
    if needed.is_empty() {
        return Ok(manifest.to_string());
    }

    let deps = doc
        .entry("dependencies")
        .or_insert_with(|| toml::Value::Table(Default::default()));
    let deps_table = deps
        .as_table_mut()
        .ok_or_else(|| toml::de::Error::custom("[dependencies] is not a table"))?;

    for (crate_name, version) in needed {
        deps_table
            .entry(crate_name.to_string())
            .or_insert_with(|| toml::Value::String(version.to_string()));
    }

    Ok(toml::to_string(&doc).expect("a parsed table serializes back"))
}
