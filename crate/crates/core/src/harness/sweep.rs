//! Fixed-`phi` sensitivity grid.

use std::fs;
use std::path::Path;

use log::info;
use rayon::prelude::*;

use crate::harness::config::RunConfig;
use crate::harness::io::{csv_writer, finish, write_row};
use crate::harness::train::build_problem;
use crate::mathcore::stats;
use crate::seo::{run_seo, Mode};
use crate::{Error, Result};

pub const SWEEP_CSV: &str = "sweep.csv";

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub lambda: f64,
    /// Test hypervolume per seed, in `sweep.seeds` order.
    pub hvs: Vec<f64>,
    pub mean_hv: f64,
    pub std_hv: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub reference: [f64; 2],
}

impl SweepReport {
    /// Largest minus smallest cell mean.
    pub fn hv_range(&self) -> f64 {
        let means = self.rows.iter().map(|r| r.mean_hv);
        means.clone().fold(f64::NEG_INFINITY, f64::max) - means.fold(f64::INFINITY, f64::min)
    }

    pub fn mean_seed_std(&self) -> f64 {
        stats::mean(&self.rows.iter().map(|r| r.std_hv).collect::<Vec<_>>())
    }
}

/// Train one constant-`phi` run per grid cell and seed. Cosmos mode keeps
/// continuous ray sampling; every other mode uses the sparse grid.
pub fn cmd_sweep(cfg: &RunConfig, out: &Path) -> Result<SweepReport> {
    let sw = &cfg.sweep;
    if sw.alphas.is_empty() || sw.lambdas.is_empty() || sw.seeds.is_empty() {
        return Err(Error::ConfigField { field: "sweep.alphas".into(), message: "sweep needs alphas, lambdas and seeds".into() });
    }
    let mode = if cfg.seo.mode == Mode::Cosmos { Mode::Cosmos } else { Mode::Fixed };
    let cells: Vec<(f64, f64)> = sw.alphas.iter().flat_map(|&a| sw.lambdas.iter().map(move |&l| (a, l))).collect();
    let jobs: Vec<(usize, u64)> = (0..cells.len()).flat_map(|c| sw.seeds.iter().map(move |&s| (c, s))).collect();
    let hvs = jobs
        .par_iter()
        .map(|&(c, seed)| {
            let (alpha0, lambda0) = cells[c];
            let run_cfg = RunConfig { seed, ..cfg.clone() };
            let problem = build_problem(&run_cfg)?;
            let seo = crate::seo::SeoConfig { mode, alpha0, lambda0, ..cfg.seo.clone() };
            let spec = run_cfg.net_spec(problem.input_dim());
            Ok(run_seo(&seo, &spec, &problem, seed, &mut |_| Ok(()))?.test_hv)
        })
        .collect::<Result<Vec<f64>>>()?;

    let n = sw.seeds.len();
    let rows: Vec<SweepRow> = cells
        .iter()
        .enumerate()
        .map(|(c, &(alpha, lambda))| {
            let hvs = hvs[c * n..(c + 1) * n].to_vec();
            let std_hv = if n > 1 { stats::std_dev(&hvs) } else { 0.0 };
            SweepRow { alpha, lambda, mean_hv: stats::mean(&hvs), std_hv, hvs }
        })
        .collect();

    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let path = out.join(SWEEP_CSV);
    let mut w = csv_writer(&path, &["alpha", "lambda", "mean_hv", "std_hv", "seeds", "hv_per_seed", "reference_1", "reference_2"])?;
    let reference = cfg.seo.reference;
    for r in &rows {
        let per_seed = r.hvs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        let row = [
            r.alpha.to_string(),
            r.lambda.to_string(),
            r.mean_hv.to_string(),
            r.std_hv.to_string(),
            n.to_string(),
            per_seed,
            reference[0].to_string(),
            reference[1].to_string(),
        ];
        write_row(&mut w, &path, &row)?;
    }
    finish(w, &path)?;
    let report = SweepReport { rows, reference };
    info!("sweep: HV range {:.4}, mean seed std {:.4}", report.hv_range(), report.mean_seed_std());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_rows_and_metadata() {
        let tmp = tempfile::tempdir().unwrap();
        let mut cfg = RunConfig { samples: Some(300), ..RunConfig::default() };
        cfg.seo.epochs = 1;
        cfg.sweep.seeds = vec![0, 1];
        let report = cmd_sweep(&cfg, tmp.path()).unwrap();
        assert_eq!(report.rows.len(), 9);
        let text = std::fs::read_to_string(tmp.path().join(SWEEP_CSV)).unwrap();
        assert_eq!(text.lines().count(), 10);
        assert!(text.lines().nth(1).unwrap().ends_with(",2,2"));
    }
}
