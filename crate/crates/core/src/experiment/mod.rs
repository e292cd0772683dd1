//! Experiment orchestration: prompt construction, generation with
//! record/replay, code extraction, dependency injection, compilation, and
//! crypto-specific analysis of every compiled sample, aggregated into an
//! [`ExperimentMatrix`].

pub mod compile;
pub mod extract;
pub mod manifest;
pub mod prompts;
pub mod provider;

use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagnostics::{parse_diagnostics, CompilationOutcome, ErrorClass};
use crate::findings::Finding;
use crate::rules;
use crate::source::SourceUnit;

pub use extract::extract_code;
pub use manifest::{detect_dependencies, inject_dependencies, ManifestParseError};
pub use prompts::{render_prompt, Algorithm, PromptSpec, Strategy};
pub use provider::{fixture_key, GenerationRequest, Provider, ReplayProvider};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid experiment config: {0}")]
    Config(String),
    #[error("provider error: {0}")]
    Provider(String),
    #[error("missing replay fixture for cell {cell} (expected at {path})")]
    MissingFixture { cell: String, path: PathBuf },
    #[error("fixture I/O failure at {path}: {source}")]
    FixtureIo {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    ManifestParse(#[from] ManifestParseError),
    #[error("cargo toolchain (with clippy) not found on PATH")]
    ToolchainMissing,
    #[error("sample {sample_id} exceeded the {seconds}s compile timeout")]
    SubprocessTimeout { sample_id: String, seconds: u64 },
    #[error("subprocess failure: {0}")]
    Subprocess(String),
    #[error("results store I/O failure at {path}: {source}")]
    StoreIo {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("results store line {line} is malformed: {reason}")]
    StoreFormat { line: usize, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Live,
    Record,
    Replay,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelConfig {
    pub id: String,
    /// Chat-completions endpoint for live runs.
    #[serde(default)]
    pub endpoint: Option<String>,
    /// Name of the environment variable holding the API key. Credentials
    /// never appear in config files.
    #[serde(default)]
    pub api_key_env: Option<String>,
}

fn default_timeout_s() -> u64 {
    120
}

fn default_workers() -> usize {
    4
}

fn default_temperature() -> f64 {
    0.0
}

fn default_replicates() -> u32 {
    10
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub models: Vec<ModelConfig>,
    pub algorithms: Vec<Algorithm>,
    pub strategies: Vec<Strategy>,
    #[serde(default = "default_replicates")]
    pub replicates: u32,
    pub mode: Mode,
    #[serde(default = "default_timeout_s")]
    pub timeout_s: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    pub fixture_dir: PathBuf,
    #[serde(default = "default_temperature")]
    pub temperature: f64,
}

impl ExperimentConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ExperimentError> {
        let path = path.as_ref();
        let raw = std::fs::read_to_string(path).map_err(|source| ExperimentError::FixtureIo {
            path: path.to_path_buf(),
            source,
        })?;
        let mut config: ExperimentConfig =
            toml::from_str(&raw).map_err(|e| ExperimentError::Config(e.to_string()))?;
        // relative fixture dirs resolve against the config file's directory
        if config.fixture_dir.is_relative() {
            if let Some(parent) = path.parent() {
                config.fixture_dir = parent.join(&config.fixture_dir);
            }
        }
        config.validate()?;
        Ok(config)
    }

    /// Fail fast, before any provider call.
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.models.is_empty() || self.algorithms.is_empty() || self.strategies.is_empty() {
            return Err(ExperimentError::Config(
                "models, algorithms, and strategies must all be non-empty".into(),
            ));
        }
        if self.replicates == 0 {
            return Err(ExperimentError::Config("replicates must be >= 1".into()));
        }
        // The decoding contract is deterministic generation.
        if self.temperature != 0.0 {
            return Err(ExperimentError::Config(format!(
                "temperature must be 0.0, got {}",
                self.temperature
            )));
        }
        if matches!(self.mode, Mode::Live | Mode::Record) {
            for model in &self.models {
                let key_env = model.api_key_env.as_deref().ok_or_else(|| {
                    ExperimentError::Config(format!(
                        "model `{}` needs api_key_env for {:?} mode",
                        model.id, self.mode
                    ))
                })?;
                if std::env::var(key_env).is_err() {
                    return Err(ExperimentError::Config(format!(
                        "credential variable `{key_env}` for model `{}` is not set",
                        model.id
                    )));
                }
                if model.endpoint.is_none() {
                    return Err(ExperimentError::Config(format!(
                        "model `{}` needs an endpoint for {:?} mode",
                        model.id, self.mode
                    )));
                }
            }
        }
        Ok(())
    }
}

/// One model response plus what was extracted from it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub model_id: String,
    pub prompt: PromptSpec,
    pub replicate: u32,
    pub raw_response: String,
    pub extracted_code: Option<String>,
    /// Unix seconds; bookkeeping only, never part of the results store.
    pub timestamp: u64,
}

/// Ask a provider for one completion and extract its code block.
pub fn generate(
    client: &dyn Provider,
    model: &ModelConfig,
    prompt: &PromptSpec,
    replicate: u32,
    temperature: f64,
) -> Result<GenerationRecord, ExperimentError> {
    let request = GenerationRequest {
        model,
        prompt_text: &prompt.text,
        temperature,
        algorithm: prompt.algorithm,
        strategy: prompt.strategy,
        replicate,
    };
    let raw_response = client.complete(&request)?;
    let extracted_code = extract_code(&raw_response);
    Ok(GenerationRecord {
        model_id: model.id.clone(),
        prompt: prompt.clone(),
        replicate,
        raw_response,
        extracted_code,
        timestamp: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    })
}

/// One fully processed sample: generation, compilation, analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub sample_id: String,
    pub model: String,
    pub algorithm: Algorithm,
    pub strategy: Strategy,
    pub replicate: u32,
    /// No fenced code block in the response. Logged separately so extraction
    /// failures cannot inflate the error-class taxonomy.
    pub extraction_failed: bool,
    pub compiled: bool,
    /// Absent iff extraction failed or the sample errored before compiling.
    pub dominant_class: Option<ErrorClass>,
    pub findings: Vec<Finding>,
    /// Per-sample processing error (missing fixture, timeout, ...); such
    /// errors never abort the other cells.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// The model x algorithm x strategy grid with per-replicate outcomes.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ExperimentMatrix {
    pub samples: Vec<SampleRecord>,
}

pub type CellKey = (String, Algorithm, Strategy);

impl ExperimentMatrix {
    pub fn cells(&self) -> BTreeMap<CellKey, Vec<&SampleRecord>> {
        let mut cells: BTreeMap<CellKey, Vec<&SampleRecord>> = BTreeMap::new();
        for sample in &self.samples {
            cells
                .entry((sample.model.clone(), sample.algorithm, sample.strategy))
                .or_default()
                .push(sample);
        }
        cells
    }

    pub fn compiled_count(&self) -> usize {
        self.samples.iter().filter(|s| s.compiled).count()
    }

    /// Write as line-delimited JSON, one record per sample.
    pub fn write_jsonl(&self, path: impl AsRef<Path>) -> Result<(), ExperimentError> {
        let path = path.as_ref();
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent).map_err(|source| ExperimentError::StoreIo {
                    path: path.to_path_buf(),
                    source,
                })?;
            }
        }
        let mut file = std::fs::File::create(path).map_err(|source| ExperimentError::StoreIo {
            path: path.to_path_buf(),
            source,
        })?;
        for sample in &self.samples {
            let line = serde_json::to_string(sample).expect("sample records serialize");
            writeln!(file, "{line}").map_err(|source| ExperimentError::StoreIo {
                path: path.to_path_buf(),
                source,
            })?;
        }
        Ok(())
    }

    pub fn read_jsonl(path: impl AsRef<Path>) -> Result<Self, ExperimentError> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|source| ExperimentError::StoreIo {
            path: path.to_path_buf(),
            source,
        })?;
        let mut samples = Vec::new();
        for (idx, line) in std::io::BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|source| ExperimentError::StoreIo {
                path: path.to_path_buf(),
                source,
            })?;
            if line.trim().is_empty() {
                continue;
            }
            let sample = serde_json::from_str(&line).map_err(|e| ExperimentError::StoreFormat {
                line: idx + 1,
                reason: e.to_string(),
            })?;
            samples.push(sample);
        }
        Ok(ExperimentMatrix { samples })
    }
}

/// Declared ground truth for the bundled fixture set, used to cross-check a
/// replay run.
#[derive(Debug, Clone, Deserialize)]
pub struct FixtureExpectation {
    pub model: String,
    pub algorithm: Algorithm,
    pub strategy: Strategy,
    pub replicate: u32,
    pub compiled: bool,
    pub dominant_class: String,
}

#[derive(Debug, Deserialize)]
struct FixtureManifestFile {
    #[serde(rename = "fixture")]
    fixtures: Vec<FixtureExpectation>,
}

pub fn load_fixture_manifest(dir: impl AsRef<Path>) -> Result<Vec<FixtureExpectation>, ExperimentError> {
    let path = dir.as_ref().join("manifest.toml");
    let raw = std::fs::read_to_string(&path).map_err(|source| ExperimentError::FixtureIo {
        path: path.clone(),
        source,
    })?;
    let parsed: FixtureManifestFile =
        toml::from_str(&raw).map_err(|e| ExperimentError::Config(e.to_string()))?;
    Ok(parsed.fixtures)
}

/// Run the full pipeline over every cell of the configured grid.
///
/// Per-sample errors (missing fixture, compile timeout) land in that sample's
/// record; they never abort other cells.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentMatrix, ExperimentError> {
    config.validate()?;

    let provider = build_provider(config)?;
    let compile_workspace = match config.mode {
        Mode::Replay => None,
        _ => Some(
            tempfile_dir().map_err(|e| ExperimentError::Subprocess(format!(
                "cannot create compile workspace: {e}"
            )))?,
        ),
    };

    let mut grid = Vec::new();
    for model in &config.models {
        for &algorithm in &config.algorithms {
            for &strategy in &config.strategies {
                for replicate in 1..=config.replicates {
                    grid.push((model, algorithm, strategy, replicate));
                }
            }
        }
    }

    let process = |&(model, algorithm, strategy, replicate): &(&ModelConfig, Algorithm, Strategy, u32)| {
        process_sample(
            config,
            provider.as_ref(),
            compile_workspace.as_deref(),
            model,
            algorithm,
            strategy,
            replicate,
        )
    };

    let samples = run_grid(config, &grid, process);
    Ok(ExperimentMatrix { samples })
}

#[cfg(feature = "parallel")]
fn run_grid<F>(
    config: &ExperimentConfig,
    grid: &[(&ModelConfig, Algorithm, Strategy, u32)],
    process: F,
) -> Vec<SampleRecord>
where
    F: Fn(&(&ModelConfig, Algorithm, Strategy, u32)) -> SampleRecord + Sync,
{
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.max(1))
        .build();
    match pool {
        Ok(pool) => pool.install(|| grid.par_iter().map(&process).collect()),
        Err(_) => grid.iter().map(&process).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_grid<F>(
    _config: &ExperimentConfig,
    grid: &[(&ModelConfig, Algorithm, Strategy, u32)],
    process: F,
) -> Vec<SampleRecord>
where
    F: Fn(&(&ModelConfig, Algorithm, Strategy, u32)) -> SampleRecord + Sync,
{
    grid.iter().map(&process).collect()
}

fn tempfile_dir() -> std::io::Result<PathBuf> {
    let dir = std::env::temp_dir().join(format!(
        "experiment-workspace-{}",
        std::process::id()
    ));
    std::fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn build_provider(config: &ExperimentConfig) -> Result<Box<dyn Provider>, ExperimentError> {
    match config.mode {
        Mode::Replay => Ok(Box::new(ReplayProvider {
            fixture_dir: config.fixture_dir.clone(),
        })),
        #[cfg(feature = "live")]
        Mode::Live => Ok(Box::new(provider::HttpProvider::new())),
        #[cfg(feature = "live")]
        Mode::Record => Ok(Box::new(provider::RecordingProvider {
            inner: provider::HttpProvider::new(),
            fixture_dir: config.fixture_dir.clone(),
        })),
        #[cfg(not(feature = "live"))]
        Mode::Live | Mode::Record => Err(ExperimentError::Config(
            "this build has no live provider support; rebuild with the `live` feature or use replay mode"
                .into(),
        )),
    }
}

#[allow(clippy::too_many_arguments)]
fn process_sample(
    config: &ExperimentConfig,
    provider: &dyn Provider,
    compile_workspace: Option<&Path>,
    model: &ModelConfig,
    algorithm: Algorithm,
    strategy: Strategy,
    replicate: u32,
) -> SampleRecord {
    let sample_id = fixture_key(&model.id, algorithm, strategy, replicate);
    let mut record = SampleRecord {
        sample_id: sample_id.clone(),
        model: model.id.clone(),
        algorithm,
        strategy,
        replicate,
        extraction_failed: false,
        compiled: false,
        dominant_class: None,
        findings: Vec::new(),
        error: None,
    };

    let prompt = render_prompt(strategy, algorithm);
    let generation = match generate(provider, model, &prompt, replicate, config.temperature) {
        Ok(g) => g,
        Err(e) => {
            record.error = Some(e.to_string());
            return record;
        }
    };

    let Some(code) = generation.extracted_code else {
        record.extraction_failed = true;
        return record;
    };

    let outcome = match compilation_outcome(config, compile_workspace, &sample_id, &code) {
        Ok(outcome) => outcome,
        Err(e) => {
            record.error = Some(e.to_string());
            return record;
        }
    };

    record.compiled = outcome.compiled;
    record.dominant_class = Some(outcome.dominant_class);

    // Stage 4 runs on exactly the compiled samples.
    if outcome.compiled {
        let unit = SourceUnit::from_text(format!("{sample_id}.rs"), code);
        record.findings = rules::analyze(&unit);
    }

    record
}

fn compilation_outcome(
    config: &ExperimentConfig,
    compile_workspace: Option<&Path>,
    sample_id: &str,
    code: &str,
) -> Result<CompilationOutcome, ExperimentError> {
    match config.mode {
        Mode::Replay => {
            let path = config.fixture_dir.join(format!("{sample_id}.diag.jsonl"));
            let stream =
                std::fs::read_to_string(&path).map_err(|_| ExperimentError::MissingFixture {
                    cell: sample_id.to_string(),
                    path,
                })?;
            let parsed = parse_diagnostics(&stream);
            Ok(CompilationOutcome::from_diagnostics(sample_id, parsed.diagnostics))
        }
        Mode::Live | Mode::Record => {
            let workspace = compile_workspace.expect("live/record runs create a workspace");
            let (outcome, stream) = compile::compile_sample(
                code,
                workspace,
                sample_id,
                Duration::from_secs(config.timeout_s),
            )?;
            if config.mode == Mode::Record {
                let path = config.fixture_dir.join(format!("{sample_id}.diag.jsonl"));
                std::fs::create_dir_all(&config.fixture_dir).map_err(|source| {
                    ExperimentError::FixtureIo {
                        path: config.fixture_dir.clone(),
                        source,
                    }
                })?;
                std::fs::write(&path, &stream)
                    .map_err(|source| ExperimentError::FixtureIo { path, source })?;
            }
            Ok(outcome)
        }
    }
}
