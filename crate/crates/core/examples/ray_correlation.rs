//! Output divergence between networks trained on single rays.
//!
//! cargo run --release --example ray_correlation -- [k] [out_dir]

use std::path::PathBuf;

use sepnet::harness::{cmd_correlate, RunConfig};

fn main() -> sepnet::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let mut cfg = RunConfig::default();
    if let Some(k) = args.get(1).and_then(|s| s.parse().ok()) {
        cfg.correlate.k = k;
    }
    let out = PathBuf::from(args.get(2).cloned().unwrap_or_else(|| "runs/correlate".into()));
    let report = cmd_correlate(&cfg, &out)?;
    println!("adjacent-ray JS {:.5}", report.adjacent_js());
    for (lo, hi) in [(0.0, 0.25), (0.25, 0.5), (0.5, 0.75), (0.75, 1.0)] {
        println!("JS for ray gaps in [{lo}, {hi}): {:?}", report.mean_by_gap(&report.js, lo, hi));
    }
    println!("matrices in {}", out.display());
    Ok(())
}
