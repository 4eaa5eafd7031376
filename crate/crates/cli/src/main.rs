//! `rydsim`: run, scan and validate Rydberg-network simulations.

mod config;
mod run;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use rydsim_core::engine::EngineKind;
use rydsim_core::experiments::{validate, ValidateOptions};
use serde_json::json;

use config::{Experiment, RunConfig};
use run::{execute, Report, UsageError};

#[derive(Parser)]
#[command(
    name = "rydsim",
    version,
    about = "Driven-dissipative Rydberg network simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named experiment, a config file or a previous run's summary.
    Run(RunArgs),
    /// Run a scan experiment and write only the aggregated table.
    Scan(RunArgs),
    /// Run the analytic oracles, engine cross-checks and conservation checks.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment name (fig3, fig4, fig5c, fig7-and, fig7-nand, appB, appC,
    /// appD, appE) or path to a JSON config or summary.
    target: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trajectories: Option<usize>,
    #[arg(long, value_parser = parse_engine)]
    engine: Option<EngineKind>,
    /// Output directory; defaults to `results/<experiment>`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Integration step for the dense-engine checks, in units of 1/Ω.
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trajectories: Option<usize>,
}

fn parse_engine(s: &str) -> Result<EngineKind, String> {
    s.parse().map_err(|e: rydsim_core::Error| e.to_string())
}

enum Failure {
    Usage(anyhow::Error),
    Engine(anyhow::Error),
}

fn load_config(args: &RunArgs) -> Result<RunConfig> {
    let path = Path::new(&args.target);
    let mut cfg = if path.is_file() {
        let text =
            fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        RunConfig::from_json(&text).with_context(|| format!("in {}", path.display()))?
    } else {
        let experiment: Experiment = args.target.parse()?;
        if experiment == Experiment::Custom {
            anyhow::bail!("custom runs need a config file with a `device`");
        }
        RunConfig::defaults(experiment)
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(t) = args.trajectories {
        cfg.trajectories = t;
    }
    if args.engine.is_some() {
        cfg.engine = args.engine;
    }
    cfg.check()?;
    Ok(cfg)
}

fn configure_pool() -> Result<()> {
    if let Ok(v) = std::env::var("RYDSIM_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .with_context(|| format!("RYDSIM_THREADS must be a positive integer, got `{v}`"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("cannot configure the work pool")?;
    }
    Ok(())
}

fn write_outputs(cfg: &RunConfig, report: &Report, dir: &Path, only_scan: bool) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let hash = cfg.hash();
    let header = format!(
        "# rydsim {} experiment={} config={hash} seed={}\n",
        env!("CARGO_PKG_VERSION"),
        cfg.experiment,
        cfg.seed
    );
    let mut names = Vec::new();
    for f in &report.files {
        if only_scan && !f.name.ends_with("scan.csv") {
            continue;
        }
        let path = dir.join(&f.name);
        fs::write(&path, format!("{header}{}", f.body))
            .with_context(|| format!("cannot write {}", path.display()))?;
        names.push(f.name.clone());
    }
    let summary = json!({
        "tool": "rydsim",
        "version": env!("CARGO_PKG_VERSION"),
        "experiment": cfg.experiment,
        "config_hash": hash,
        "config": cfg,
        "conservation_ok": report.conservation_ok,
        "results": report.results,
        "files": names,
    });
    let path = dir.join("summary.json");
    fs::write(&path, serde_json::to_string_pretty(&summary)? + "\n")
        .with_context(|| format!("cannot write {}", path.display()))?;
    log::info!("wrote {} files to {}", names.len() + 1, dir.display());
    Ok(())
}

fn run(args: &RunArgs, only_scan: bool) -> Result<(), Failure> {
    let cfg = load_config(args).map_err(Failure::Usage)?;
    if only_scan && !cfg.experiment.is_scan() {
        return Err(Failure::Usage(anyhow::anyhow!(
            "`{}` is not a scan experiment (use fig3, appD or appE)",
            cfg.experiment
        )));
    }
    let report = execute(&cfg).map_err(|e| {
        if e.downcast_ref::<UsageError>().is_some() {
            Failure::Usage(e)
        } else {
            Failure::Engine(e)
        }
    })?;
    let dir = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("results").join(cfg.experiment.name()));
    write_outputs(&cfg, &report, &dir, only_scan).map_err(Failure::Engine)?;
    if !report.conservation_ok {
        return Err(Failure::Engine(anyhow::anyhow!(
            "conservation bounds were violated; see summary.json"
        )));
    }
    Ok(())
}

fn run_validate(args: &ValidateArgs) -> Result<(), Failure> {
    let mut opts = ValidateOptions::default();
    if let Some(dt) = args.dt {
        if !(dt > 0.0) {
            return Err(Failure::Usage(anyhow::anyhow!("--dt must be positive")));
        }
        opts.dt = Some(dt);
    }
    if let Some(seed) = args.seed {
        opts.seed = seed;
    }
    if let Some(t) = args.trajectories {
        if t == 0 {
            return Err(Failure::Usage(anyhow::anyhow!(
                "--trajectories must be positive"
            )));
        }
        opts.trajectories = t;
    }
    let checks = validate(&opts);
    for c in &checks {
        println!("{c}");
    }
    let failed = checks.iter().filter(|c| c.failed()).count();
    if failed > 0 {
        return Err(Failure::Engine(anyhow::anyhow!("{failed} check(s) failed")));
    }
    println!("all checks passed");
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = configure_pool() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    let result = match &cli.command {
        Command::Run(a) => run(a, false),
        Command::Scan(a) => run(a, true),
        Command::Validate(a) => run_validate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Engine(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
