//! Preference-conflict and output-correlation experiments on unconditioned networks.

use std::fs;
use std::path::Path;

use log::info;
use rayon::prelude::*;

use crate::data::{conflict_loss_oracle, Dataset, Problem, ProblemKind};
use crate::harness::config::RunConfig;
use crate::harness::io::{csv_writer, finish, write_matrix_csv, write_row, write_text};
use crate::harness::svg::{heatmap, line_plot, Series};
use crate::harness::train::build_problem;
use crate::mathcore::{cosine_similarity, js_divergence, stats, PreferenceRay, Rng};
use crate::net::{adam_step, AdamConfig, AdamState, NetParams};
use crate::objectives::{linear_scalarization, pfl_loss_at, task_losses, HyperParams, TaskPair};
use crate::{Error, Result};

pub const CONFLICT_CSV: &str = "conflict.csv";
pub const CONFLICT_SVG: &str = "conflict.svg";
pub const JS_CSV: &str = "correlation_js.csv";
pub const COS_CSV: &str = "correlation_cos.csv";

/// Plain scalarized training of an unconditioned network; `pick` chooses each batch's ray.
fn train_unconditioned(
    cfg: &RunConfig,
    problem: &Problem,
    epochs: usize,
    rng: &mut Rng,
    mut pick: impl FnMut(&mut Rng) -> PreferenceRay,
) -> Result<NetParams> {
    let spec = cfg.net_spec(problem.input_dim()).unconditioned();
    let tasks = TaskPair::for_problem(problem.kind);
    let train = &problem.splits.train;
    let phi = HyperParams::new(1.0, 0.0)?;
    let mut params = NetParams::init(&spec, rng)?;
    let mut adam = AdamState::new(&params);
    let adam_cfg = AdamConfig::with_lr(cfg.seo.train_lr);
    let mut order: Vec<usize> = (0..train.len()).collect();
    for _ in 0..epochs {
        rng.shuffle(&mut order);
        for (b, chunk) in order.chunks(cfg.seo.batch_size).enumerate() {
            let ray = pick(rng);
            let eval = match pfl_loss_at(&params, &tasks, &train.subset(chunk), ray, phi) {
                Err(Error::DegenerateBatch(_)) => continue,
                other => other?,
            };
            adam_step(&mut params, &eval.grads, &mut adam, &adam_cfg).map_err(|e| match e {
                Error::TrainingDivergence { reason, .. } => Error::TrainingDivergence { batch: b, reason },
                other => other,
            })?;
        }
    }
    Ok(params)
}

fn test_losses(params: &NetParams, problem: &Problem) -> Result<[f64; 2]> {
    let test = &problem.splits.test;
    let cond = HyperParams::new(1.0, 0.0)?.condition(PreferenceRay::from_first(0.5)?)?;
    let outputs = params.predict(&test.inputs, &cond)?;
    Ok(task_losses(&TaskPair::for_problem(problem.kind), &outputs, test)?.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConflictRow {
    pub p: f64,
    /// `"a"` or `"b"`.
    pub query: &'static str,
    pub ray: PreferenceRay,
    pub measured: f64,
    pub measured_std: f64,
    pub predicted: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConflictReport {
    pub rows: Vec<ConflictRow>,
    /// Spearman correlation of measured against predicted loss at ray `a` across the mixture grid.
    pub spearman_a: Option<f64>,
}

/// Train one unconditioned network per (mixture, seed), drawing ray `a`
/// with probability `p` per batch, and compare scalarized test losses with the oracle.
pub fn cmd_conflict(cfg: &RunConfig, out: &Path) -> Result<ConflictReport> {
    let problem = build_problem(cfg)?;
    if problem.kind != ProblemKind::SharedScalar {
        return Err(Error::ConfigField { field: "task".into(), message: "the conflict experiment needs task = shared_scalar".into() });
    }
    let c = &cfg.conflict;
    let (ray_a, ray_b) = (PreferenceRay::from_first(c.ray_a)?, PreferenceRay::from_first(c.ray_b)?);
    let root = Rng::new(cfg.seed);
    let jobs: Vec<(usize, usize)> = (0..c.mixtures.len()).flat_map(|i| (0..c.seeds).map(move |s| (i, s))).collect();
    let losses = jobs
        .par_iter()
        .map(|&(i, s)| {
            let p = c.mixtures[i];
            let mut rng = root.fork_indexed("conflict", (i * c.seeds + s) as u64);
            let params = train_unconditioned(cfg, &problem, c.epochs, &mut rng, |r| if r.bernoulli(p) { ray_a } else { ray_b })?;
            test_losses(&params, &problem)
        })
        .collect::<Result<Vec<_>>>()?;

    let delta2 = problem.splits.test.target_gap();
    let mut rows = Vec::new();
    for (i, &p) in c.mixtures.iter().enumerate() {
        let runs = &losses[i * c.seeds..(i + 1) * c.seeds];
        for (query, ray) in [("a", ray_a), ("b", ray_b)] {
            let per_seed: Vec<f64> = runs.iter().map(|&l| linear_scalarization(l, ray)).collect();
            rows.push(ConflictRow {
                p,
                query,
                ray,
                measured: stats::mean(&per_seed),
                measured_std: if per_seed.len() > 1 { stats::std_dev(&per_seed) } else { 0.0 },
                predicted: conflict_loss_oracle(delta2, p, ray_a, ray_b, ray)?,
            });
        }
    }
    let (measured_a, predicted_a): (Vec<f64>, Vec<f64>) =
        rows.iter().filter(|r| r.query == "a").map(|r| (r.measured, r.predicted)).unzip();
    let spearman_a = stats::spearman(&measured_a, &predicted_a);

    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let path = out.join(CONFLICT_CSV);
    let mut w = csv_writer(&path, &["p", "query", "ray_r1", "ray_r2", "measured", "measured_std", "predicted"])?;
    for r in &rows {
        let row = [
            r.p.to_string(),
            r.query.to_string(),
            r.ray.r1().to_string(),
            r.ray.r2().to_string(),
            r.measured.to_string(),
            r.measured_std.to_string(),
            r.predicted.to_string(),
        ];
        write_row(&mut w, &path, &row)?;
    }
    finish(w, &path)?;
    let series = |query: &str, measured: bool| Series {
        label: format!("{} at ray {query}", if measured { "measured" } else { "predicted" }),
        points: rows.iter().filter(|r| r.query == query).map(|r| (r.p, if measured { r.measured } else { r.predicted })).collect(),
    };
    let plot = line_plot(&[series("a", true), series("a", false), series("b", true), series("b", false)], "p (share of ray a)", "scalarized test loss", None);
    write_text(&out.join(CONFLICT_SVG), &plot)?;
    info!("conflict: Spearman(measured, predicted) at ray a = {spearman_a:?}");
    Ok(ConflictReport { rows, spearman_a })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationReport {
    pub rays: Vec<f64>,
    pub js: Vec<Vec<f64>>,
    pub cos: Vec<Vec<f64>>,
}

impl CorrelationReport {
    /// Mean of `m[i][j]` over pairs whose rays differ by `|r_i - r_j|` in `[lo, hi)`, excluding the diagonal.
    pub fn mean_by_gap(&self, m: &[Vec<f64>], lo: f64, hi: f64) -> Option<f64> {
        let mut vals = Vec::new();
        for i in 0..self.rays.len() {
            for j in 0..self.rays.len() {
                let gap = (self.rays[i] - self.rays[j]).abs();
                if i != j && gap >= lo - 1e-12 && gap < hi {
                    vals.push(m[i][j]);
                }
            }
        }
        (!vals.is_empty()).then(|| stats::mean(&vals))
    }

    /// Mean JS divergence between neighbouring rays.
    pub fn adjacent_js(&self) -> f64 {
        let n = self.rays.len();
        (0..n - 1).map(|i| self.js[i][i + 1]).sum::<f64>() / (n - 1) as f64
    }
}

/// Two-class distributions read off each output.
fn soften(outputs: &[f64], kind: ProblemKind) -> Vec<[f64; 2]> {
    let gain = match kind {
        ProblemKind::SharedScalar => 2.0,
        ProblemKind::Fairness => 1.0,
    };
    outputs
        .iter()
        .map(|&o| {
            let p = 1.0 / (1.0 + (-gain * o).exp());
            [p, 1.0 - p]
        })
        .collect()
}

fn pair_means(a: &[[f64; 2]], b: &[[f64; 2]]) -> Result<(f64, f64)> {
    let mut js = 0.0;
    let mut cos = 0.0;
    for (p, q) in a.iter().zip(b) {
        js += js_divergence(p, q)?;
        cos += cosine_similarity(p, q)?;
    }
    let n = a.len() as f64;
    Ok((js / n, cos / n))
}

/// Train `k` single-ray models on evenly spaced rays and compare their test outputs pairwise.
pub fn cmd_correlate(cfg: &RunConfig, out: &Path) -> Result<CorrelationReport> {
    let problem = build_problem(cfg)?;
    let k = cfg.correlate.k;
    let rays: Vec<f64> = (0..k).map(|i| 0.01 + 0.98 * i as f64 / (k - 1) as f64).collect();
    let root = Rng::new(cfg.seed);
    let test: &Dataset = &problem.splits.test;
    let cond = HyperParams::new(1.0, 0.0)?.condition(PreferenceRay::from_first(0.5)?)?;
    let outputs = rays
        .par_iter()
        .enumerate()
        .map(|(i, &r1)| {
            let ray = PreferenceRay::from_first(r1)?;
            let mut rng = root.fork_indexed("correlate", i as u64);
            let params = train_unconditioned(cfg, &problem, cfg.correlate.epochs, &mut rng, |_| ray)?;
            Ok(soften(&params.predict(&test.inputs, &cond)?.column(0), problem.kind))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut js = vec![vec![0.0; k]; k];
    let mut cos = vec![vec![1.0; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let (d, c) = pair_means(&outputs[i], &outputs[j])?;
            js[i][j] = d;
            js[j][i] = d;
            cos[i][j] = c;
            cos[j][i] = c;
        }
    }

    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    write_matrix_csv(&out.join(JS_CSV), &rays, &js)?;
    write_matrix_csv(&out.join(COS_CSV), &rays, &cos)?;
    write_text(&out.join("correlation_js.svg"), &heatmap(&js, "mean JS divergence"))?;
    write_text(&out.join("correlation_cos.svg"), &heatmap(&cos, "mean cosine similarity"))?;
    Ok(CorrelationReport { rays, js, cos })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(dir: &Path) -> RunConfig {
        let mut cfg = RunConfig { out: dir.to_path_buf(), samples: Some(500), ..RunConfig::default() };
        cfg.conflict.epochs = 2;
        cfg.conflict.seeds = 1;
        cfg.correlate.k = 4;
        cfg.correlate.epochs = 2;
        cfg
    }

    #[test]
    fn conflict_report_has_a_row_per_query() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = small(tmp.path());
        let report = cmd_conflict(&cfg, tmp.path()).unwrap();
        assert_eq!(report.rows.len(), 2 * cfg.conflict.mixtures.len());
        assert!(tmp.path().join(CONFLICT_CSV).exists());
        let p1 = report.rows.iter().find(|r| r.p == 1.0 && r.query == "a").unwrap();
        let delta2 = build_problem(&cfg).unwrap().splits.test.target_gap();
        let oracle = crate::data::analytic_front(delta2, p1.ray).unwrap();
        assert!((p1.predicted - linear_scalarization(oracle, p1.ray)).abs() < 1e-12);
        assert!((p1.predicted - 0.16 * delta2).abs() < 1e-12);
    }

    #[test]
    fn conflict_needs_shared_scalar() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = RunConfig { task: crate::harness::config::TaskId::Fairness, ..small(tmp.path()) };
        assert!(matches!(cmd_conflict(&cfg, tmp.path()), Err(Error::ConfigField { .. })));
    }

    #[test]
    fn correlation_matrices_are_symmetric() {
        let tmp = tempfile::tempdir().unwrap();
        let report = cmd_correlate(&small(tmp.path()), tmp.path()).unwrap();
        for i in 0..4 {
            assert_eq!(report.js[i][i], 0.0);
            assert_eq!(report.cos[i][i], 1.0);
            for j in 0..4 {
                assert!((report.js[i][j] - report.js[j][i]).abs() < 1e-9);
                assert!((report.cos[i][j] - report.cos[j][i]).abs() < 1e-9);
            }
        }
        assert!(tmp.path().join(JS_CSV).exists() && tmp.path().join(COS_CSV).exists());
    }
}
