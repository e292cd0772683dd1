//! Rule-based detection of AEAD cryptographic misuse in Rust source files,
//! plus the evaluation harness around it: compiler-error taxonomy, a scored
//! validation corpus, contingency statistics, and an experiment pipeline
//! with record/replay provider clients.
//!
//! Nine detectors cover hardcoded secrets, three nonce-reuse shapes, weak
//! randomness, unwrapped crypto results, keys from external input, deprecated
//! APIs, and files that encrypt without any CSPRNG. Detection is regex
//! pattern matching over comment-blanked text, augmented with variable
//! provenance tracking, brace-depth loop extraction, and nonce lifecycle
//! analysis. Scope is a single compilation unit; cross-file and data-flow
//! analysis are out.

pub mod diagnostics;
pub mod experiment;
pub mod findings;
pub mod rules;
pub mod scan;
pub mod source;
pub mod stats;
pub mod validation;

pub use findings::{Finding, RuleId, Severity};
pub use rules::{analyze, scan_unit, ScanReport};
pub use source::{load_source, SourceLocation, SourceUnit};
