use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, ValueEnum};
use patglass::pipeline::{FetchPolicySetting, Pipeline, PipelineConfig, Stage};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StageArg {
    Ingest,
    Extract,
    Consolidate,
    Filter,
    Optics,
    Liquidus,
    Basis,
    Compare,
    All,
}

impl StageArg {
    fn stage(self) -> Option<Stage> {
        Some(match self {
            StageArg::Ingest => Stage::Ingest,
            StageArg::Extract => Stage::Extract,
            StageArg::Consolidate => Stage::Consolidate,
            StageArg::Filter => Stage::Filter,
            StageArg::Optics => Stage::Optics,
            StageArg::Liquidus => Stage::Liquidus,
            StageArg::Basis => Stage::Basis,
            StageArg::Compare => Stage::Compare,
            StageArg::All => return None,
        })
    }
}

/// Patent table mining for oxide glass compositions and properties.
#[derive(Debug, Parser)]
#[command(name = "patglass", version)]
struct Cli {
    /// Stage to run.
    #[arg(value_enum, required_unless_present = "stage_flag", conflicts_with = "stage_flag")]
    stage: Option<StageArg>,

    #[arg(long = "stage", value_enum, value_name = "NAME")]
    stage_flag: Option<StageArg>,

    /// TOML configuration; relative paths inside resolve against its directory.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Rows per part file for the chunked stages.
    #[arg(long, value_name = "N")]
    chunk_size: Option<usize>,

    /// Never fetch; serve pages only from the corpus directory.
    #[arg(long)]
    offline: bool,

    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

fn load_config(cli: &Cli) -> anyhow::Result<PipelineConfig> {
    let mut config = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let mut c: PipelineConfig = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
            let base = path.parent().map(PathBuf::from).unwrap_or_default();
            let base = if base.as_os_str().is_empty() { PathBuf::from(".") } else { base };
            c.resolve_paths(&base);
            c
        }
        None => PipelineConfig::default(),
    };
    if let Some(n) = cli.chunk_size {
        config.chunk_size = Some(n);
    }
    if cli.offline {
        config.fetch.policy = FetchPolicySetting::OfflineOnly;
    }
    if let Some(out) = &cli.out {
        config.paths.out = out.clone();
    }
    Ok(config)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let pipeline = match load_config(&cli).and_then(|c| Ok(Pipeline::new(c)?)) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("configuration error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let arg = cli.stage.or(cli.stage_flag).expect("clap enforces a stage");
    let result = match arg.stage() {
        Some(s) => pipeline.run_stage(s).map(|r| vec![r]),
        None => pipeline.run_all(),
    };
    match result {
        Ok(reports) => {
            for r in reports {
                println!("{}", serde_json::to_string(&r.run).expect("report serializes"));
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("stage failed: {e}");
            ExitCode::from(2)
        }
    }
}
