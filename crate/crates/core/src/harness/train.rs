use std::fs;
use std::path::{Path, PathBuf};

use log::{error, info};

use crate::data::{Problem, SharedScalarSpec, FairnessSpec, TabularSchema};
use crate::harness::config::{RunConfig, TaskId};
use crate::harness::io::{csv_writer, finish, write_front_csv, write_row, write_text};
use crate::net::{checkpoint_load, checkpoint_save};
use crate::objectives::{HyperParams, TaskPair};
use crate::pareto::{hypervolume_2d, sweep_front, ParetoFront};
use crate::seo::{run_seo, PhiTrace};
use crate::{Error, Result};

pub const CONFIG_SNAPSHOT: &str = "config.snapshot";
pub const PHI_TRACE: &str = "phi_trace.csv";
pub const METRICS: &str = "metrics.csv";
pub const FRONT_TEST: &str = "front_test.csv";
pub const CHECKPOINT: &str = "checkpoint.sepn";
pub const SUMMARY: &str = "summary.txt";
pub const ABORTED: &str = "ABORTED";

pub const PHI_TRACE_HEADER: [&str; 6] = ["epoch", "alpha", "lambda", "active_coord", "val_hv", "best_val_hv"];
const METRICS_HEADER: [&str; 5] = ["epoch", "train_loss", "batches", "skipped_batches", "val_hv"];

/// Generate or load the configured dataset and split it.
pub fn build_problem(cfg: &RunConfig) -> Result<Problem> {
    match cfg.task {
        TaskId::SharedScalar => {
            let spec = SharedScalarSpec { samples: cfg.samples.unwrap_or(cfg.shared_scalar.samples), ..cfg.shared_scalar };
            Problem::shared_scalar(&spec, cfg.seed)
        }
        TaskId::Fairness => {
            let spec = FairnessSpec { samples: cfg.samples.unwrap_or(cfg.fairness.samples), ..cfg.fairness.clone() };
            Problem::fairness(&spec, cfg.seed)
        }
        TaskId::Tabular => {
            let (csv, schema) = cfg.csv.as_ref().zip(cfg.schema.as_ref()).ok_or_else(|| Error::ConfigField {
                field: "data.csv".into(),
                message: "tabular tasks need data.csv and data.schema".into(),
            })?;
            Problem::tabular(csv, &TabularSchema::load(schema)?, cfg.seed)
        }
    }
}

/// Persisted outcome of one training run.
#[derive(Clone, Debug)]
pub struct RunRecord {
    pub out_dir: PathBuf,
    pub phi: HyperParams,
    pub best_epoch: Option<usize>,
    pub best_val_hv: f64,
    pub test_hv: f64,
    pub test_front: ParetoFront,
    pub trace: PhiTrace,
    pub wall_clock_s: f64,
}

/// Contents of `summary.txt`.
#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub test_hv: f64,
    pub best_alpha: f64,
    pub best_lambda: f64,
    pub best_epoch: Option<usize>,
    pub best_val_hv: f64,
    pub wall_clock_s: f64,
}

impl Summary {
    fn render(&self) -> String {
        let epoch = self.best_epoch.map_or("init".to_string(), |e| e.to_string());
        format!(
            "test_hv={}\nbest_alpha={}\nbest_lambda={}\nbest_epoch={epoch}\nbest_val_hv={}\nwall_clock_s={}\n",
            self.test_hv, self.best_alpha, self.best_lambda, self.best_val_hv, self.wall_clock_s
        )
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let get = |key: &str| {
            text.lines()
                .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
                .ok_or_else(|| Error::format(format!("{}: missing `{key}`", path.display())))
        };
        let num = |key: &str| -> Result<f64> {
            get(key)?.parse().map_err(|e| Error::format(format!("{}: `{key}`: {e}", path.display())))
        };
        let best_epoch = match get("best_epoch")? {
            "init" => None,
            e => Some(e.parse().map_err(|e| Error::format(format!("{}: best_epoch: {e}", path.display())))?),
        };
        Ok(Summary {
            test_hv: num("test_hv")?,
            best_alpha: num("best_alpha")?,
            best_lambda: num("best_lambda")?,
            best_epoch,
            best_val_hv: num("best_val_hv")?,
            wall_clock_s: num("wall_clock_s")?,
        })
    }
}

fn prepare_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let marker = dir.join(ABORTED);
    if marker.exists() {
        fs::remove_file(&marker).map_err(|e| Error::io(&marker, e))?;
    }
    Ok(())
}

/// Train per `cfg` and write the run directory `cfg.out`.
///
/// Trace and metrics rows are flushed every epoch; on failure an `ABORTED`
/// marker holding the error is left next to them.
pub fn cmd_train(cfg: &RunConfig) -> Result<RunRecord> {
    let dir = cfg.out.clone();
    prepare_dir(&dir)?;
    write_text(&dir.join(CONFIG_SNAPSHOT), &cfg.to_snapshot())?;
    let result = train_into(cfg, &dir);
    if let Err(e) = &result {
        error!("run aborted: {e}");
        write_text(&dir.join(ABORTED), &format!("{e}\n"))?;
    }
    result
}

fn train_into(cfg: &RunConfig, dir: &Path) -> Result<RunRecord> {
    let problem = build_problem(cfg)?;
    let spec = cfg.net_spec(problem.input_dim());
    let (trace_path, metrics_path) = (dir.join(PHI_TRACE), dir.join(METRICS));
    let mut trace_csv = csv_writer(&trace_path, &PHI_TRACE_HEADER)?;
    let mut metrics_csv = csv_writer(&metrics_path, &METRICS_HEADER)?;
    info!("training {} ({}) for {} epochs into {}", cfg.task, cfg.seo.mode, cfg.seo.epochs, dir.display());

    let run = run_seo(&cfg.seo, &spec, &problem, cfg.seed, &mut |report| {
        let r = report.record;
        let row = [
            r.epoch.to_string(),
            r.alpha.to_string(),
            r.lambda.to_string(),
            r.active.to_string(),
            r.val_hv.to_string(),
            r.best_val_hv.to_string(),
        ];
        write_row(&mut trace_csv, &trace_path, &row)?;
        trace_csv.flush().map_err(|e| Error::io(&trace_path, e))?;
        let s = report.stats;
        let row = [r.epoch.to_string(), s.mean_loss.to_string(), s.batches.to_string(), s.skipped.to_string(), r.val_hv.to_string()];
        write_row(&mut metrics_csv, &metrics_path, &row)?;
        metrics_csv.flush().map_err(|e| Error::io(&metrics_path, e))
    })?;
    finish(trace_csv, &trace_path)?;
    finish(metrics_csv, &metrics_path)?;

    write_front_csv(&run.test_front, &dir.join(FRONT_TEST))?;
    checkpoint_save(&run.params, &dir.join(CHECKPOINT))?;
    let summary = Summary {
        test_hv: run.test_hv,
        best_alpha: run.phi.alpha,
        best_lambda: run.phi.lambda,
        best_epoch: run.best_epoch,
        best_val_hv: run.best_val_hv,
        wall_clock_s: run.wall_clock_s,
    };
    write_text(&dir.join(SUMMARY), &summary.render())?;
    info!("test HV {:.5} at alpha {:.4}, lambda {:.4}", run.test_hv, run.phi.alpha, run.phi.lambda);
    Ok(RunRecord {
        out_dir: dir.to_path_buf(),
        phi: run.phi,
        best_epoch: run.best_epoch,
        best_val_hv: run.best_val_hv,
        test_hv: run.test_hv,
        test_front: run.test_front,
        trace: run.trace,
        wall_clock_s: run.wall_clock_s,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalResult {
    pub phi: HyperParams,
    pub hv: f64,
    pub front: ParetoFront,
    pub path: PathBuf,
}

/// File name of the front evaluated at `phi`.
pub fn eval_front_name(phi: HyperParams) -> String {
    format!("front_eval_alpha{}_lambda{}.csv", phi.alpha, phi.lambda)
}

/// Sweep the checkpoint's front on the test split for each `phi`, writing one CSV per value into `out`.
pub fn cmd_eval(cfg: &RunConfig, checkpoint: &Path, phis: &[HyperParams], out: &Path) -> Result<Vec<EvalResult>> {
    if phis.is_empty() {
        return Err(Error::invalid("no phi values to evaluate"));
    }
    let params = checkpoint_load(checkpoint)?;
    let problem = build_problem(cfg)?;
    let expected = cfg.net_spec(problem.input_dim());
    if params.spec() != &expected {
        return Err(Error::structural(format!(
            "checkpoint network {:?} does not match the configured task {:?}",
            params.spec(),
            expected
        )));
    }
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let tasks = TaskPair::for_problem(problem.kind);
    let rays = cfg.seo.eval_rays()?;
    phis.iter()
        .map(|&phi| {
            let front = sweep_front(&params, &tasks, &problem.splits.test, phi, &rays, cfg.seo.reference)?;
            let path = out.join(eval_front_name(phi));
            write_front_csv(&front, &path)?;
            Ok(EvalResult { phi, hv: hypervolume_2d(&front), front, path })
        })
        .collect()
}
