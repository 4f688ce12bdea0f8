//! Command-line front end over `sepnet::harness`.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 runtime failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::error;

use sepnet::harness::{self, RunConfig, Summary};
use sepnet::objectives::HyperParams;
use sepnet::seo::Mode;
use sepnet::Error;

#[derive(Parser, Debug)]
#[command(name = "sepnet", version, about = "Pareto front learning with evolved sampling hyper-parameters")]
struct Cli {
    /// Flat key = value configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (run directory for train/eval).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_parser = parse_mode)]
    mode: Option<Mode>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Train and write a run directory.
    Train,
    /// Re-evaluate a checkpoint on the test split at one or more phi values.
    Eval {
        /// Defaults to checkpoint.sepn in the run directory.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// `alpha,lambda`; repeatable. Defaults to the best phi in summary.txt.
        #[arg(long, value_parser = parse_phi)]
        phi: Vec<HyperParams>,
    },
    /// Preference-conflict experiment over the mixture grid.
    Conflict,
    /// Pairwise output divergence of single-ray models.
    Correlate,
    /// Fixed-phi hypervolume grid.
    Sweep,
    /// Render front CSVs to an SVG (written to --out, default fronts.svg).
    Plot {
        #[arg(required = true)]
        fronts: Vec<PathBuf>,
    },
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

fn parse_phi(s: &str) -> Result<HyperParams, String> {
    let (a, l) = s.split_once(',').ok_or_else(|| format!("expected alpha,lambda, got `{s}`"))?;
    let a: f64 = a.trim().parse().map_err(|e| format!("alpha: {e}"))?;
    let l: f64 = l.trim().parse().map_err(|e| format!("lambda: {e}"))?;
    HyperParams::new(a, l).map_err(|e| e.to_string())
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_usage() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Runtime(e.to_string())
        }
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig, Failure> {
    let from_run_dir = match (&cli.config, &cli.command, &cli.out) {
        (None, Command::Eval { .. }, Some(out)) => Some(out.join(harness::CONFIG_SNAPSHOT)),
        _ => None,
    };
    let mut cfg = match cli.config.as_ref().or(from_run_dir.as_ref()) {
        Some(path) => harness::parse_config(path).map_err(|e| Failure::Usage(e.to_string()))?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.out = out.clone();
    }
    if let Some(mode) = cli.mode {
        cfg.seo.mode = mode;
    }
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), Failure> {
    harness::configure_threads().map_err(|e| Failure::Usage(e.to_string()))?;
    let cfg = load_config(&cli)?;
    match &cli.command {
        Command::Train => {
            let record = harness::cmd_train(&cfg)?;
            println!("test_hv={} alpha={} lambda={} dir={}", record.test_hv, record.phi.alpha, record.phi.lambda, record.out_dir.display());
        }
        Command::Eval { checkpoint, phi } => {
            let checkpoint = checkpoint.clone().unwrap_or_else(|| cfg.out.join(harness::CHECKPOINT));
            let phis = if phi.is_empty() {
                let summary = Summary::read(&cfg.out.join(harness::SUMMARY))?;
                vec![HyperParams::new(summary.best_alpha, summary.best_lambda)?]
            } else {
                phi.clone()
            };
            for r in harness::cmd_eval(&cfg, &checkpoint, &phis, &cfg.out)? {
                println!("alpha={} lambda={} hv={} front={}", r.phi.alpha, r.phi.lambda, r.hv, r.path.display());
            }
        }
        Command::Conflict => {
            let report = harness::cmd_conflict(&cfg, &cfg.out)?;
            for r in &report.rows {
                println!("p={} query={} measured={:.6} predicted={:.6}", r.p, r.query, r.measured, r.predicted);
            }
            println!("spearman_a={:?}", report.spearman_a);
        }
        Command::Correlate => {
            let report = harness::cmd_correlate(&cfg, &cfg.out)?;
            let far = report.mean_by_gap(&report.js, 0.5, f64::INFINITY);
            println!("adjacent_js={:.6} far_js={far:?}", report.adjacent_js());
        }
        Command::Sweep => {
            let report = harness::cmd_sweep(&cfg, &cfg.out)?;
            for r in &report.rows {
                println!("alpha={} lambda={} mean_hv={:.6} std_hv={:.6}", r.alpha, r.lambda, r.mean_hv, r.std_hv);
            }
        }
        Command::Plot { fronts } => {
            let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("fronts.svg"));
            let out = if out.extension().is_some() { out } else { out.join("fronts.svg") };
            if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| Failure::Runtime(format!("{}: {e}", dir.display())))?;
            }
            harness::emit_svg_scatter(fronts, cfg.seo.reference, Path::new(&out))?;
            println!("{}", out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            error!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            error!("{msg}");
            ExitCode::from(2)
        }
    }
}
