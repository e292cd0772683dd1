//! Command-line entry point: scan files, score the validation corpus,
//! classify compiler diagnostics, reproduce the statistics tables, and run
//! or report experiments.
//!
//! Exit codes are a stable contract: 0 clean, 1 findings at or above the
//! severity threshold, 2 operational error.

mod report;
mod sarif;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use cryptolint_core::experiment::{self, ExperimentConfig, ExperimentMatrix, Mode};
use cryptolint_core::findings::Severity;
use cryptolint_core::validation;

#[derive(Debug, Parser)]
#[command(name = "cryptolint", version, about = "Detect AEAD cryptographic misuse in Rust source files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Scan Rust source files with the nine misuse detectors
    Scan(ScanArgs),
    /// Score the analyzer against a ground-truth corpus
    Validate(ValidateArgs),
    /// Classify cargo/clippy JSON diagnostic streams into error classes
    ClassifyErrors(ClassifyArgs),
    /// Wilson intervals and chi-square tables from counts or a results store
    Stats(StatsArgs),
    /// Run or report the generation -> compilation -> analysis pipeline
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Sarif,
}

#[derive(Debug, Args)]
struct ScanArgs {
    /// Files to scan
    #[arg(required = true)]
    paths: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Lowest severity that affects the exit status (findings below it are
    /// still listed)
    #[arg(long, default_value = "MEDIUM")]
    min_severity: String,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// Corpus directory containing manifest.toml
    #[arg(default_value = "corpus")]
    corpus_dir: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    /// Diagnostic stream files (.jsonl), one sample per file
    #[arg(required = true)]
    paths: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct StatsArgs {
    /// Results store (.jsonl) produced by `experiment run`
    #[arg(long, conflicts_with = "preset")]
    store: Option<PathBuf>,
    /// Built-in count sets; `paper` reproduces the published tables
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum ExperimentCommand {
    /// Execute the pipeline over the configured model/algorithm/prompt grid
    Run(ExperimentRunArgs),
    /// Aggregate a results store into rate tables and a findings summary
    Report(ExperimentReportArgs),
}

#[derive(Debug, Args)]
struct ExperimentRunArgs {
    /// Experiment config (TOML)
    #[arg(long)]
    config: PathBuf,
    /// Override the configured mode (live, record, replay)
    #[arg(long)]
    mode: Option<String>,
    /// Override the configured fixture directory
    #[arg(long)]
    fixtures: Option<PathBuf>,
    /// Results store to write
    #[arg(long, default_value = "results/experiment.jsonl")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ExperimentReportArgs {
    /// Results store (.jsonl) to aggregate
    #[arg(long)]
    store: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Scan(args) => cmd_scan(args),
        Command::Validate(args) => cmd_validate(args),
        Command::ClassifyErrors(args) => cmd_classify(args),
        Command::Stats(args) => cmd_stats(args),
        Command::Experiment(ExperimentCommand::Run(args)) => cmd_experiment_run(args),
        Command::Experiment(ExperimentCommand::Report(args)) => cmd_experiment_report(args),
    }
}

fn cmd_scan(args: ScanArgs) -> Result<ExitCode> {
    let min_severity = Severity::parse(&args.min_severity)
        .with_context(|| format!("unknown severity `{}` (use CRITICAL, HIGH, or MEDIUM)", args.min_severity))?;

    let mut units = Vec::new();
    for path in &args.paths {
        let unit = cryptolint_core::load_source(path)
            .with_context(|| format!("cannot scan {}", path.display()))?;
        units.push(unit);
    }
    let reports = cryptolint_core::scan::scan_units(&units);

    for (unit, file_report) in units.iter().zip(&reports) {
        for note in &file_report.notes {
            eprintln!(
                "note: {}:{}:{}: {}",
                unit.path.display(),
                note.location.line,
                note.location.column,
                note.message
            );
        }
    }

    let document = report::scan_document(&units, &reports);
    match args.format {
        Format::Text => print!("{}", report::render_scan_text(&document)),
        Format::Json => println!("{}", serde_json::to_string_pretty(&document)?),
        Format::Sarif => println!("{}", sarif::emit_sarif(&document)?),
    }

    let gating = document
        .files
        .iter()
        .flat_map(|f| &f.findings)
        .any(|finding| finding.severity >= min_severity);
    Ok(if gating { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn cmd_validate(args: ValidateArgs) -> Result<ExitCode> {
    let cases = validation::build_corpus_manifest(&args.corpus_dir)
        .with_context(|| format!("cannot load corpus at {}", args.corpus_dir.display()))?;
    let document = report::validate_document(&cases)?;
    match args.format {
        Format::Text => print!("{}", report::render_validate_text(&document)),
        Format::Json => println!("{}", serde_json::to_string_pretty(&document)?),
        Format::Sarif => bail!("sarif format applies to scan reports only"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_classify(args: ClassifyArgs) -> Result<ExitCode> {
    let document = report::taxonomy_document(&args.paths)?;
    match args.format {
        Format::Text => print!("{}", report::render_taxonomy_text(&document)),
        Format::Json => println!("{}", serde_json::to_string_pretty(&document)?),
        Format::Sarif => bail!("sarif format applies to scan reports only"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_stats(args: StatsArgs) -> Result<ExitCode> {
    let document = match (&args.store, args.preset.as_deref()) {
        (Some(store), None) => {
            let matrix = ExperimentMatrix::read_jsonl(store)
                .with_context(|| format!("cannot read results store {}", store.display()))?;
            report::stats_document_from_matrix(&matrix)?
        }
        (None, Some("paper")) => report::stats_document_paper()?,
        (None, Some(other)) => bail!("unknown preset `{other}` (available: paper)"),
        (None, None) => bail!("pass --store <results.jsonl> or --preset paper"),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    match args.format {
        Format::Text => print!("{}", report::render_stats_text(&document)),
        Format::Json => println!("{}", serde_json::to_string_pretty(&document)?),
        Format::Sarif => bail!("sarif format applies to scan reports only"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_experiment_run(args: ExperimentRunArgs) -> Result<ExitCode> {
    let mut config = ExperimentConfig::load(&args.config)
        .with_context(|| format!("cannot load experiment config {}", args.config.display()))?;
    if let Some(mode) = args.mode.as_deref() {
        config.mode = match mode {
            "live" => Mode::Live,
            "record" => Mode::Record,
            "replay" => Mode::Replay,
            other => bail!("unknown mode `{other}` (use live, record, or replay)"),
        };
    }
    if let Some(fixtures) = args.fixtures {
        config.fixture_dir = fixtures;
    }

    let matrix = experiment::run_experiment(&config)?;
    matrix.write_jsonl(&args.out)?;

    let errored = matrix.samples.iter().filter(|s| s.error.is_some()).count();
    println!(
        "experiment complete: {} samples across {} cells; {} compiled, {} extraction failures, {} errors",
        matrix.samples.len(),
        matrix.cells().len(),
        matrix.compiled_count(),
        matrix.samples.iter().filter(|s| s.extraction_failed).count(),
        errored,
    );
    println!("results store written to {}", args.out.display());
    for sample in matrix.samples.iter().filter(|s| s.error.is_some()) {
        eprintln!("sample {}: {}", sample.sample_id, sample.error.as_deref().unwrap());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_experiment_report(args: ExperimentReportArgs) -> Result<ExitCode> {
    let matrix = ExperimentMatrix::read_jsonl(&args.store)
        .with_context(|| format!("cannot read results store {}", args.store.display()))?;
    let document = report::experiment_document(&matrix)?;
    match args.format {
        Format::Text => print!("{}", report::render_experiment_text(&document)),
        Format::Json => println!("{}", serde_json::to_string_pretty(&document)?),
        Format::Sarif => bail!("sarif format applies to scan reports only"),
    }
    Ok(ExitCode::SUCCESS)
}
