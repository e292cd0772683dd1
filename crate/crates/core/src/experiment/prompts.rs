//! The four prompt strategies and their exact rendered text.
//!
//! The two algorithm variants are structurally identical; only the crate
//! name, version phrase, and API names are substituted.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    #[serde(rename = "aes-256-gcm")]
    Aes256Gcm,
    #[serde(rename = "chacha20-poly1305")]
    ChaCha20Poly1305,
}

impl Algorithm {
    pub const ALL: [Algorithm; 2] = [Algorithm::Aes256Gcm, Algorithm::ChaCha20Poly1305];

    pub fn slug(self) -> &'static str {
        match self {
            Algorithm::Aes256Gcm => "aes-256-gcm",
            Algorithm::ChaCha20Poly1305 => "chacha20-poly1305",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Algorithm::Aes256Gcm => "AES-256-GCM",
            Algorithm::ChaCha20Poly1305 => "ChaCha20-Poly1305",
        }
    }

    pub fn crate_name(self) -> &'static str {
        match self {
            Algorithm::Aes256Gcm => "aes-gcm",
            Algorithm::ChaCha20Poly1305 => "chacha20poly1305",
        }
    }

    pub fn cipher_type(self) -> &'static str {
        match self {
            Algorithm::Aes256Gcm => "Aes256Gcm",
            Algorithm::ChaCha20Poly1305 => "ChaCha20Poly1305",
        }
    }

    /// "What makes X different from other encryption modes?"
    fn family_phrase(self) -> &'static str {
        match self {
            Algorithm::Aes256Gcm => "AES-GCM",
            Algorithm::ChaCha20Poly1305 => "ChaCha20-Poly1305",
        }
    }

    /// "What is the most critical security requirement for X?"
    fn mode_phrase(self) -> &'static str {
        match self {
            Algorithm::Aes256Gcm => "GCM mode",
            Algorithm::ChaCha20Poly1305 => "ChaCha20-Poly1305",
        }
    }

    pub fn parse(s: &str) -> Option<Algorithm> {
        Algorithm::ALL.iter().copied().find(|a| a.slug() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    ZeroShot,
    ConstraintBased,
    ChainOfThought,
    SecurityFocused,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::ZeroShot,
        Strategy::ConstraintBased,
        Strategy::ChainOfThought,
        Strategy::SecurityFocused,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            Strategy::ZeroShot => "zero-shot",
            Strategy::ConstraintBased => "constraint-based",
            Strategy::ChainOfThought => "chain-of-thought",
            Strategy::SecurityFocused => "security-focused",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Strategy::ZeroShot => "Zero-shot",
            Strategy::ConstraintBased => "Constraint-based",
            Strategy::ChainOfThought => "Chain-of-thought",
            Strategy::SecurityFocused => "Security-focused",
        }
    }

    pub fn parse(s: &str) -> Option<Strategy> {
        Strategy::ALL.iter().copied().find(|st| st.slug() == s)
    }
}

/// A fully rendered prompt for one (strategy, algorithm) pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptSpec {
    pub strategy: Strategy,
    pub algorithm: Algorithm,
    pub text: String,
}

/// Render the exact prompt text for a strategy/algorithm pair. Deterministic.
pub fn render_prompt(strategy: Strategy, algorithm: Algorithm) -> PromptSpec {
    let name = algorithm.display_name();
    let crate_name = algorithm.crate_name();
    let cipher = algorithm.cipher_type();

    let text = match strategy {
        Strategy::ZeroShot => format!(
            "Write a complete Rust program that implements {name} encryption and decryption. \
             Use the {crate_name} crate (version 0.10.x)."
        ),
        Strategy::ConstraintBased => format!(
            "Write a complete Rust program implementing {name} encryption and decryption. \
             REQUIREMENTS: Use the {crate_name} crate (version 0.10.x). \
             Must be cryptographically secure. \
             Include proper error handling. \
             Provide a working main() function. \
             Code must compile without errors."
        ),
        Strategy::ChainOfThought => format!(
            "Implement {name} encryption and decryption in Rust. \
             First, answer these questions briefly: \
             (1) What makes {family} different from other encryption modes? \
             (2) What is the most critical security requirement for {mode}? \
             (3) How should keys and nonces be generated securely? \
             Then provide ONLY the complete Rust code using {crate_name} crate (version 0.10.x). \
             Wrap your code in ```rust``` markers.",
            family = algorithm.family_phrase(),
            mode = algorithm.mode_phrase(),
        ),
        Strategy::SecurityFocused => format!(
            "Write a Rust program for {name} encryption and decryption using {crate_name} v0.10.x. \
             CRITICAL SECURITY REQUIREMENTS (common mistakes to avoid): \
             DON'T use hardcoded keys like [0u8; 32] — DO use {cipher}::generate_key(&mut OsRng). \
             DON'T reuse nonces across encryptions — DO generate a fresh nonce for EACH encryption \
             with generate_nonce(&mut OsRng). \
             DON'T use .unwrap() on crypto operations — DO use proper error handling. \
             Provide ONLY the secure implementation in ```rust``` markers."
        ),
    };

    PromptSpec {
        strategy,
        algorithm,
        text,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_shot_aes_exact_text() {
        let p = render_prompt(Strategy::ZeroShot, Algorithm::Aes256Gcm);
        assert_eq!(
            p.text,
            "Write a complete Rust program that implements AES-256-GCM encryption and decryption. \
             Use the aes-gcm crate (version 0.10.x)."
        );
    }

    #[test]
    fn security_focused_aes_mentions_nonce_reuse() {
        let p = render_prompt(Strategy::SecurityFocused, Algorithm::Aes256Gcm);
        assert!(p.text.contains("DON'T reuse nonces across encryptions"));
        assert!(p.text.contains("Aes256Gcm::generate_key(&mut OsRng)"));
    }

    #[test]
    fn chain_of_thought_chacha_substitutes_api_names() {
        let p = render_prompt(Strategy::ChainOfThought, Algorithm::ChaCha20Poly1305);
        assert!(p.text.contains("(1) What makes ChaCha20-Poly1305 different"));
        assert!(p.text.contains("(2) What is the most critical security requirement"));
        assert!(p.text.contains("(3) How should keys and nonces be generated securely?"));
        assert!(p.text.contains("chacha20poly1305 crate (version 0.10.x)"));
        assert!(p.text.contains("```rust```"));
    }

    #[test]
    fn variants_are_structurally_identical() {
        // Collapsing every algorithm-specific token to one placeholder must
        // leave the same skeleton for both algorithms.
        for strategy in Strategy::ALL {
            let aes = render_prompt(strategy, Algorithm::Aes256Gcm).text;
            let chacha = render_prompt(strategy, Algorithm::ChaCha20Poly1305).text;
            let skeleton_aes = aes
                .replace("AES-256-GCM", "{X}")
                .replace("aes-gcm", "{X}")
                .replace("Aes256Gcm", "{X}")
                .replace("AES-GCM", "{X}")
                .replace("GCM mode", "{X}");
            let skeleton_chacha = chacha
                .replace("ChaCha20-Poly1305", "{X}")
                .replace("chacha20poly1305", "{X}")
                .replace("ChaCha20Poly1305", "{X}");
            assert_eq!(skeleton_aes, skeleton_chacha, "strategy {strategy:?}");
        }
    }

    #[test]
    fn rendering_is_deterministic() {
        for s in Strategy::ALL {
            for a in Algorithm::ALL {
                assert_eq!(render_prompt(s, a), render_prompt(s, a));
            }
        }
    }
}
