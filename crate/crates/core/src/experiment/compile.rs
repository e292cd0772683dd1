//! Stage 2: compile each extracted sample in an isolated workspace and parse
//! the clippy JSON stream.
//!
//! Replay mode never reaches this module; it reads cached diagnostic streams
//! instead. Live and record runs invoke `cargo clippy --message-format=json`
//! in a throwaway directory per sample, with a shared target directory so the
//! dependency graph is built once.

use std::path::Path;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use super::manifest::inject_dependencies;
use super::ExperimentError;
use crate::diagnostics::{parse_diagnostics, CompilationOutcome};

const BASE_MANIFEST: &str = "[package]\nname = \"sample\"\nversion = \"0.1.0\"\nedition = \"2021\"\n\n[dependencies]\n";

/// True when a cargo toolchain (with clippy) is on PATH.
pub fn toolchain_available() -> bool {
    Command::new("cargo")
        .args(["clippy", "--version"])
        .stdout(Stdio::null())
        .stderr(Stdio::null())
        .status()
        .map(|s| s.success())
        .unwrap_or(false)
}

/// Compile one sample and classify its diagnostics. Returns the outcome and
/// the raw JSON stream (so record mode can cache it).
pub fn compile_sample(
    code: &str,
    workspace: &Path,
    sample_id: &str,
    timeout: Duration,
) -> Result<(CompilationOutcome, String), ExperimentError> {
    if !toolchain_available() {
        return Err(ExperimentError::ToolchainMissing);
    }

    let sample_dir = workspace.join(sample_id);
    let src_dir = sample_dir.join("src");
    std::fs::create_dir_all(&src_dir).map_err(|e| ExperimentError::FixtureIo {
        path: src_dir.clone(),
        source: e,
    })?;
    std::fs::write(src_dir.join("main.rs"), code).map_err(|e| ExperimentError::FixtureIo {
        path: src_dir.join("main.rs"),
        source: e,
    })?;
    let manifest = inject_dependencies(code, BASE_MANIFEST)?;
    std::fs::write(sample_dir.join("Cargo.toml"), manifest).map_err(|e| {
        ExperimentError::FixtureIo {
            path: sample_dir.join("Cargo.toml"),
            source: e,
        }
    })?;

    // one shared target dir across samples keeps desk-scale runs at minutes
    let target_dir = workspace.join("shared-target");
    let mut child = Command::new("cargo")
        .args(["clippy", "--message-format=json"])
        .current_dir(&sample_dir)
        .env("CARGO_TARGET_DIR", &target_dir)
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|e| ExperimentError::Subprocess(e.to_string()))?;

    let started = Instant::now();
    let mut stdout = child.stdout.take().expect("stdout was piped");
    let reader = std::thread::spawn(move || {
        use std::io::Read;
        let mut buf = String::new();
        let _ = stdout.read_to_string(&mut buf);
        buf
    });

    loop {
        match child.try_wait() {
            Ok(Some(_status)) => break,
            Ok(None) => {
                if started.elapsed() > timeout {
                    let _ = child.kill();
                    let _ = child.wait();
                    return Err(ExperimentError::SubprocessTimeout {
                        sample_id: sample_id.to_string(),
                        seconds: timeout.as_secs(),
                    });
                }
                std::thread::sleep(Duration::from_millis(50));
            }
            Err(e) => return Err(ExperimentError::Subprocess(e.to_string())),
        }
    }

    let stream = reader.join().unwrap_or_default();
    let parsed = parse_diagnostics(&stream);
    Ok((
        CompilationOutcome::from_diagnostics(sample_id, parsed.diagnostics),
        stream,
    ))
}
