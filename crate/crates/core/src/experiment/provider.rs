//! Pluggable LLM provider clients with record/replay.
//!
//! Every client answers one request shape (model id, prompt text,
//! temperature). Replay reads fixtures from disk and needs no network;
//! record wraps a live client and persists each response as a fixture.
//! Credentials come from environment variables only, never from config
//! files.

use std::path::{Path, PathBuf};

use super::{ExperimentError, ModelConfig};
use crate::experiment::prompts::{Algorithm, Strategy};

/// File-safe fixture key for one cell replicate.
pub fn fixture_key(model: &str, algorithm: Algorithm, strategy: Strategy, replicate: u32) -> String {
    format!(
        "{}__{}__{}__{:02}",
        model,
        algorithm.slug(),
        strategy.slug(),
        replicate
    )
}

/// What a provider is asked for: one completion at a fixed temperature.
#[derive(Debug, Clone)]
pub struct GenerationRequest<'a> {
    pub model: &'a ModelConfig,
    pub prompt_text: &'a str,
    pub temperature: f64,
    pub algorithm: Algorithm,
    pub strategy: Strategy,
    pub replicate: u32,
}

pub trait Provider: Sync {
    fn complete(&self, request: &GenerationRequest<'_>) -> Result<String, ExperimentError>;
}

/// Replays stored fixtures keyed by (model, algorithm, strategy, replicate).
pub struct ReplayProvider {
    pub fixture_dir: PathBuf,
}

impl ReplayProvider {
    pub fn response_path(&self, request: &GenerationRequest<'_>) -> PathBuf {
        self.fixture_dir.join(format!(
            "{}.txt",
            fixture_key(
                &request.model.id,
                request.algorithm,
                request.strategy,
                request.replicate
            )
        ))
    }
}

impl Provider for ReplayProvider {
    fn complete(&self, request: &GenerationRequest<'_>) -> Result<String, ExperimentError> {
        let path = self.response_path(request);
        std::fs::read_to_string(&path).map_err(|_| ExperimentError::MissingFixture {
            cell: fixture_key(
                &request.model.id,
                request.algorithm,
                request.strategy,
                request.replicate,
            ),
            path,
        })
    }
}

/// Wraps a live provider and persists every response as a replay fixture.
pub struct RecordingProvider<P> {
    pub inner: P,
    pub fixture_dir: PathBuf,
}

impl<P: Provider> Provider for RecordingProvider<P> {
    fn complete(&self, request: &GenerationRequest<'_>) -> Result<String, ExperimentError> {
        let response = self.inner.complete(request)?;
        let key = fixture_key(
            &request.model.id,
            request.algorithm,
            request.strategy,
            request.replicate,
        );
        persist_fixture(&self.fixture_dir, &key, &response)?;
        Ok(response)
    }
}

pub fn persist_fixture(dir: &Path, key: &str, response: &str) -> Result<(), ExperimentError> {
    std::fs::create_dir_all(dir).map_err(|e| ExperimentError::FixtureIo {
        path: dir.to_path_buf(),
        source: e,
    })?;
    let path = dir.join(format!("{key}.txt"));
    std::fs::write(&path, response).map_err(|e| ExperimentError::FixtureIo { path, source: e })
}

/// Live HTTP client speaking the OpenAI-compatible chat completions shape.
/// Compiled in only with the `live` feature; the API key is read from the
/// environment variable named in the model config.
#[cfg(feature = "live")]
pub struct HttpProvider {
    client: reqwest::blocking::Client,
}

#[cfg(feature = "live")]
impl HttpProvider {
    pub fn new() -> Self {
        HttpProvider {
            client: reqwest::blocking::Client::new(),
        }
    }
}

#[cfg(feature = "live")]
impl Default for HttpProvider {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(feature = "live")]
impl Provider for HttpProvider {
    fn complete(&self, request: &GenerationRequest<'_>) -> Result<String, ExperimentError> {
        let model = request.model;
        let endpoint = model.endpoint.as_deref().ok_or_else(|| {
            ExperimentError::Config(format!("model `{}` has no endpoint configured", model.id))
        })?;
        let key_env = model.api_key_env.as_deref().ok_or_else(|| {
            ExperimentError::Config(format!("model `{}` has no api_key_env configured", model.id))
        })?;
        let api_key = std::env::var(key_env).map_err(|_| {
            ExperimentError::Config(format!(
                "credential variable `{key_env}` for model `{}` is not set",
                model.id
            ))
        })?;

        let body = serde_json::json!({
            "model": model.id,
            "temperature": request.temperature,
            "messages": [{"role": "user", "content": request.prompt_text}],
        });

        let mut last_err = None;
        for _attempt in 0..3 {
            let sent = self
                .client
                .post(endpoint)
                .bearer_auth(&api_key)
                .json(&body)
                .send();
            match sent {
                Ok(resp) if resp.status().is_success() => {
                    let value: serde_json::Value = resp
                        .json()
                        .map_err(|e| ExperimentError::Provider(e.to_string()))?;
                    let content = value["choices"][0]["message"]["content"]
                        .as_str()
                        .ok_or_else(|| {
                            ExperimentError::Provider("response has no message content".into())
                        })?;
                    return Ok(content.to_string());
                }
                Ok(resp) => last_err = Some(format!("HTTP {}", resp.status())),
                Err(e) => last_err = Some(e.to_string()),
            }
            std::thread::sleep(std::time::Duration::from_millis(500));
        }
        Err(ExperimentError::Provider(
            last_err.unwrap_or_else(|| "request failed".into()),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn request_for<'a>(model: &'a ModelConfig) -> GenerationRequest<'a> {
        GenerationRequest {
            model,
            prompt_text: "p",
            temperature: 0.0,
            algorithm: Algorithm::Aes256Gcm,
            strategy: Strategy::ZeroShot,
            replicate: 1,
        }
    }

    #[test]
    fn replay_returns_fixture_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let response = "Sure!\n```rust\nfn main() {}\n```\n";
        persist_fixture(dir.path(), "m1__aes-256-gcm__zero-shot__01", response).unwrap();

        let model = ModelConfig {
            id: "m1".into(),
            endpoint: None,
            api_key_env: None,
        };
        let provider = ReplayProvider {
            fixture_dir: dir.path().to_path_buf(),
        };
        assert_eq!(provider.complete(&request_for(&model)).unwrap(), response);
    }

    #[test]
    fn missing_fixture_names_the_cell() {
        let dir = tempfile::tempdir().unwrap();
        let model = ModelConfig {
            id: "m2".into(),
            endpoint: None,
            api_key_env: None,
        };
        let provider = ReplayProvider {
            fixture_dir: dir.path().to_path_buf(),
        };
        let err = provider.complete(&request_for(&model)).unwrap_err();
        match err {
            ExperimentError::MissingFixture { cell, .. } => {
                assert_eq!(cell, "m2__aes-256-gcm__zero-shot__01");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn recording_persists_a_replayable_fixture() {
        struct Canned;
        impl Provider for Canned {
            fn complete(&self, _r: &GenerationRequest<'_>) -> Result<String, ExperimentError> {
                Ok("canned response".into())
            }
        }
        let dir = tempfile::tempdir().unwrap();
        let model = ModelConfig {
            id: "m3".into(),
            endpoint: None,
            api_key_env: None,
        };
        let recorder = RecordingProvider {
            inner: Canned,
            fixture_dir: dir.path().to_path_buf(),
        };
        assert_eq!(recorder.complete(&request_for(&model)).unwrap(), "canned response");

        let replay = ReplayProvider {
            fixture_dir: dir.path().to_path_buf(),
        };
        assert_eq!(replay.complete(&request_for(&model)).unwrap(), "canned response");
    }
}
