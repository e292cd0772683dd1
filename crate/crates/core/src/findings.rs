//! Finding model: rule identifiers, CWE association, severity, and the
//! finding record every detector emits.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::source::SourceLocation;

/// The nine detector rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleId {
    HardcodedSecret,
    NonceReuseInLoop,
    NonceReuseMultiCall,
    StaticNonce,
    WeakRandomness,
    UnsafeErrorHandling,
    KeyFromExternalInput,
    DeprecatedApi,
    MissingSecureGeneration,
}

impl RuleId {
    pub const ALL: [RuleId; 9] = [
        RuleId::HardcodedSecret,
        RuleId::NonceReuseInLoop,
        RuleId::NonceReuseMultiCall,
        RuleId::StaticNonce,
        RuleId::WeakRandomness,
        RuleId::UnsafeErrorHandling,
        RuleId::KeyFromExternalInput,
        RuleId::DeprecatedApi,
        RuleId::MissingSecureGeneration,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RuleId::HardcodedSecret => "hardcoded_secret",
            RuleId::NonceReuseInLoop => "nonce_reuse_in_loop",
            RuleId::NonceReuseMultiCall => "nonce_reuse_multi_call",
            RuleId::StaticNonce => "static_nonce",
            RuleId::WeakRandomness => "weak_randomness",
            RuleId::UnsafeErrorHandling => "unsafe_error_handling",
            RuleId::KeyFromExternalInput => "key_from_external_input",
            RuleId::DeprecatedApi => "deprecated_api",
            RuleId::MissingSecureGeneration => "missing_secure_generation",
        }
    }

    pub fn parse(s: &str) -> Option<RuleId> {
        RuleId::ALL.iter().copied().find(|r| r.as_str() == s)
    }

    /// CWE number associated with this rule.
    pub fn cwe(self) -> u16 {
        match self {
            RuleId::HardcodedSecret => 798,
            RuleId::NonceReuseInLoop | RuleId::NonceReuseMultiCall | RuleId::StaticNonce => 329,
            RuleId::WeakRandomness | RuleId::MissingSecureGeneration => 330,
            RuleId::UnsafeErrorHandling => 252,
            RuleId::KeyFromExternalInput => 326,
            RuleId::DeprecatedApi => 327,
        }
    }

    pub fn severity(self) -> Severity {
        match self {
            RuleId::HardcodedSecret
            | RuleId::NonceReuseInLoop
            | RuleId::NonceReuseMultiCall
            | RuleId::StaticNonce => Severity::Critical,
            RuleId::WeakRandomness
            | RuleId::KeyFromExternalInput
            | RuleId::MissingSecureGeneration => Severity::High,
            RuleId::UnsafeErrorHandling | RuleId::DeprecatedApi => Severity::Medium,
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Severity {
    Medium,
    High,
    Critical,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Critical => "CRITICAL",
            Severity::High => "HIGH",
            Severity::Medium => "MEDIUM",
        }
    }

    pub fn parse(s: &str) -> Option<Severity> {
        match s.to_ascii_uppercase().as_str() {
            "CRITICAL" => Some(Severity::Critical),
            "HIGH" => Some(Severity::High),
            "MEDIUM" => Some(Severity::Medium),
            _ => None,
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One detected misuse.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub rule_id: RuleId,
    pub cwe: u16,
    pub severity: Severity,
    pub location: SourceLocation,
    pub message: String,
    pub snippet: String,
}

impl Finding {
    pub fn new(rule_id: RuleId, location: SourceLocation, message: impl Into<String>, snippet: impl Into<String>) -> Self {
        Finding {
            rule_id,
            cwe: rule_id.cwe(),
            severity: rule_id.severity(),
            location,
            message: message.into(),
            snippet: snippet.into(),
        }
    }
}
