//! Hypervolume over a fixed (alpha, lambda) grid.
//!
//! cargo run --release --example hyperparam_sweep -- [epochs] [out_dir]

use std::path::PathBuf;

use sepnet::harness::{cmd_sweep, RunConfig};

fn main() -> sepnet::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let mut cfg = RunConfig::default();
    cfg.seo.epochs = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let out = PathBuf::from(args.get(2).cloned().unwrap_or_else(|| "runs/sweep".into()));
    let report = cmd_sweep(&cfg, &out)?;
    println!("alpha  lambda  mean_hv  std_hv");
    for r in &report.rows {
        println!("{:5.2}  {:6.2}  {:.4}   {:.4}", r.alpha, r.lambda, r.mean_hv, r.std_hv);
    }
    println!("spread across the grid {:.4}, mean seed std {:.4}", report.hv_range(), report.mean_seed_std());
    Ok(())
}
