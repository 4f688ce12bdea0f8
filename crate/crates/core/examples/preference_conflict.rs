//! Train a shared network on two rays in varying proportions and compare the
//! damage at each ray with the closed-form prediction.
//!
//! cargo run --release --example preference_conflict -- [out_dir]

use std::path::PathBuf;

use sepnet::harness::{cmd_conflict, RunConfig};

fn main() -> sepnet::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "runs/conflict".into()));
    let cfg = RunConfig { out: out.clone(), ..RunConfig::default() };
    let report = cmd_conflict(&cfg, &out)?;
    println!("   p  ray   measured  predicted");
    for r in &report.rows {
        println!("{:.2}  {:>3}   {:.4}    {:.4}", r.p, r.query, r.measured, r.predicted);
    }
    println!("Spearman at ray a: {:?}; plot in {}", report.spearman_a, out.display());
    Ok(())
}
