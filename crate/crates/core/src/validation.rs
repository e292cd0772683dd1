//! Ground-truth corpus loading and precision/recall scoring for the analyzer.
//!
//! The corpus manifest is a TOML file listing one record per case: id, source
//! path, suite, kind, and the rule ids or CWEs expected to fire. Secure
//! controls expect nothing; documented blind spots carry the latent CWE their
//! (undetectable) defect belongs to and are scored as false negatives when no
//! finding fires.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::findings::RuleId;
use crate::rules;
use crate::source::{load_source, SourceError};

#[derive(Debug, Error)]
pub enum ValidationError {
    #[error("failed to read corpus manifest {path}: {source}")]
    ManifestIo {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("corpus manifest {path} is not valid TOML: {source}")]
    ManifestToml {
        path: PathBuf,
        source: toml::de::Error,
    },
    #[error("manifest schema violation for case `{case_id}`: {reason}")]
    ManifestSchema { case_id: String, reason: String },
    #[error("duplicate case id `{0}` in corpus manifest")]
    DuplicateCaseId(String),
    #[error("case `{case_id}` is missing: {source}")]
    MissingCase {
        case_id: String,
        source: SourceError,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseKind {
    Synthetic,
    Benchmark,
    SecureControl,
    DocumentedBlindSpot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Synthetic,
    Benchmark,
    Regression,
}

#[derive(Debug, Clone)]
pub struct ValidationCase {
    pub case_id: String,
    pub source_path: PathBuf,
    pub suite: Suite,
    pub kind: CaseKind,
    pub expected_cwes: BTreeSet<u16>,
    pub expected_rules: BTreeSet<RuleId>,
    pub latent_cwe: Option<u16>,
}

impl ValidationCase {
    /// A vulnerable case expects at least one rule/CWE to fire.
    pub fn expects_detection(&self) -> bool {
        matches!(self.kind, CaseKind::Synthetic | CaseKind::Benchmark)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    TruePositive,
    FalsePositive,
    FalseNegative,
    TrueNegative,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CaseOutcome {
    pub case_id: String,
    pub verdict: Verdict,
    pub fired_rules: Vec<RuleId>,
    pub fired_cwes: Vec<u16>,
}

/// Case-level confusion counts plus derived rates and per-CWE detection.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ScoreReport {
    pub tp: u32,
    pub fp: u32,
    #[serde(rename = "fn")]
    pub fn_count: u32,
    pub tn: u32,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub accuracy: f64,
    /// CWE -> (cases detected, cases carrying that CWE).
    pub per_cwe: BTreeMap<u16, (u32, u32)>,
    pub outcomes: Vec<CaseOutcome>,
}

// manifest wire format ------------------------------------------------------

#[derive(Debug, Deserialize)]
struct ManifestFile {
    #[serde(rename = "case")]
    cases: Vec<ManifestCase>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestCase {
    id: String,
    path: String,
    suite: Suite,
    kind: CaseKind,
    #[serde(default)]
    expected_cwes: Vec<u16>,
    #[serde(default)]
    expected_rules: Vec<String>,
    #[serde(default)]
    latent_cwe: Option<u16>,
}

/// Load `manifest.toml` from a corpus directory and validate its invariants.
pub fn build_corpus_manifest(directory: impl AsRef<Path>) -> Result<Vec<ValidationCase>, ValidationError> {
    let dir = directory.as_ref();
    let manifest_path = dir.join("manifest.toml");
    let raw = std::fs::read_to_string(&manifest_path).map_err(|source| ValidationError::ManifestIo {
        path: manifest_path.clone(),
        source,
    })?;
    let parsed: ManifestFile = toml::from_str(&raw).map_err(|source| ValidationError::ManifestToml {
        path: manifest_path,
        source,
    })?;

    let mut seen = BTreeSet::new();
    let mut cases = Vec::with_capacity(parsed.cases.len());
    for mc in parsed.cases {
        if !seen.insert(mc.id.clone()) {
            return Err(ValidationError::DuplicateCaseId(mc.id));
        }
        let mut expected_rules = BTreeSet::new();
        for name in &mc.expected_rules {
            let rule = RuleId::parse(name).ok_or_else(|| ValidationError::ManifestSchema {
                case_id: mc.id.clone(),
                reason: format!("unknown rule id `{name}`"),
            })?;
            expected_rules.insert(rule);
        }
        let expected_cwes: BTreeSet<u16> = mc.expected_cwes.iter().copied().collect();

        let expects_empty = matches!(mc.kind, CaseKind::SecureControl | CaseKind::DocumentedBlindSpot);
        if expects_empty && (!expected_cwes.is_empty() || !expected_rules.is_empty()) {
            return Err(ValidationError::ManifestSchema {
                case_id: mc.id,
                reason: "secure controls and blind spots must have empty expectations".into(),
            });
        }
        if mc.kind == CaseKind::DocumentedBlindSpot && mc.latent_cwe.is_none() {
            return Err(ValidationError::ManifestSchema {
                case_id: mc.id,
                reason: "documented blind spots must record their latent CWE".into(),
            });
        }
        if !expects_empty && expected_cwes.is_empty() && expected_rules.is_empty() {
            return Err(ValidationError::ManifestSchema {
                case_id: mc.id,
                reason: "vulnerable cases must expect at least one rule or CWE".into(),
            });
        }

        cases.push(ValidationCase {
            case_id: mc.id,
            source_path: dir.join(&mc.path),
            suite: mc.suite,
            kind: mc.kind,
            expected_cwes,
            expected_rules,
            latent_cwe: mc.latent_cwe,
        });
    }
    Ok(cases)
}

fn score_case(case: &ValidationCase) -> Result<CaseOutcome, ValidationError> {
    let unit = load_source(&case.source_path).map_err(|source| ValidationError::MissingCase {
        case_id: case.case_id.clone(),
        source,
    })?;
    let findings = rules::analyze(&unit);
    let fired_rules: Vec<RuleId> = findings.iter().map(|f| f.rule_id).collect();
    let fired_cwes: Vec<u16> = findings.iter().map(|f| f.cwe).collect();

    let expected_fired = findings.iter().any(|f| {
        case.expected_cwes.contains(&f.cwe) || case.expected_rules.contains(&f.rule_id)
    });
    let latent_fired = case
        .latent_cwe
        .map(|cwe| fired_cwes.contains(&cwe))
        .unwrap_or(false);

    let verdict = match case.kind {
        CaseKind::Synthetic | CaseKind::Benchmark => {
            if expected_fired {
                Verdict::TruePositive
            } else if !findings.is_empty() {
                Verdict::FalsePositive
            } else {
                Verdict::FalseNegative
            }
        }
        CaseKind::SecureControl => {
            if findings.is_empty() {
                Verdict::TrueNegative
            } else {
                Verdict::FalsePositive
            }
        }
        // A blind spot holds a real defect the single-file strategy cannot
        // see: silence is a false negative, a latent-CWE hit would be a TP.
        CaseKind::DocumentedBlindSpot => {
            if findings.is_empty() {
                Verdict::FalseNegative
            } else if latent_fired {
                Verdict::TruePositive
            } else {
                Verdict::FalsePositive
            }
        }
    };

    Ok(CaseOutcome {
        case_id: case.case_id.clone(),
        verdict,
        fired_rules,
        fired_cwes,
    })
}

/// Score a corpus. Cases are independent; order does not affect the report.
pub fn run_validation(corpus: &[ValidationCase]) -> Result<ScoreReport, ValidationError> {
    let outcomes = score_cases(corpus)?;

    let mut tp = 0;
    let mut fp = 0;
    let mut fn_count = 0;
    let mut tn = 0;
    for outcome in &outcomes {
        match outcome.verdict {
            Verdict::TruePositive => tp += 1,
            Verdict::FalsePositive => fp += 1,
            Verdict::FalseNegative => fn_count += 1,
            Verdict::TrueNegative => tn += 1,
        }
    }

    let mut per_cwe: BTreeMap<u16, (u32, u32)> = BTreeMap::new();
    for (case, outcome) in corpus.iter().zip(&outcomes) {
        let carried: BTreeSet<u16> = case
            .expected_cwes
            .iter()
            .copied()
            .chain(case.latent_cwe)
            .chain(case.expected_rules.iter().map(|r| r.cwe()))
            .collect();
        for cwe in carried {
            let entry = per_cwe.entry(cwe).or_insert((0, 0));
            entry.1 += 1;
            if outcome.verdict == Verdict::TruePositive && outcome.fired_cwes.contains(&cwe) {
                entry.0 += 1;
            }
        }
    }

    let ratio = |num: u32, den: u32| if den == 0 { 1.0 } else { num as f64 / den as f64 };
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fn_count);
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    let accuracy = ratio(tp + tn, outcomes.len() as u32);

    Ok(ScoreReport {
        tp,
        fp,
        fn_count,
        tn,
        precision,
        recall,
        f1,
        accuracy,
        per_cwe,
        outcomes,
    })
}

#[cfg(feature = "parallel")]
fn score_cases(corpus: &[ValidationCase]) -> Result<Vec<CaseOutcome>, ValidationError> {
    use rayon::prelude::*;
    corpus.par_iter().map(score_case).collect()
}

#[cfg(not(feature = "parallel"))]
fn score_cases(corpus: &[ValidationCase]) -> Result<Vec<CaseOutcome>, ValidationError> {
    corpus.iter().map(score_case).collect()
}
