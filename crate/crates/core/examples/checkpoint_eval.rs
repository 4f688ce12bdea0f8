//! Train into a run directory, then reload the checkpoint and evaluate it at
//! other hyper-parameter settings.
//!
//! cargo run --release --example checkpoint_eval -- [out_dir]

use std::path::PathBuf;

use sepnet::harness::{cmd_eval, cmd_train, RunConfig, CHECKPOINT};
use sepnet::net::checkpoint_load;
use sepnet::objectives::HyperParams;

fn main() -> sepnet::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "runs/checkpoint".into()));
    let mut cfg = RunConfig { out: out.clone(), ..RunConfig::default() };
    cfg.seo.epochs = 20;
    let record = cmd_train(&cfg)?;
    println!("trained: test HV {:.4} at alpha {:.3}, lambda {:.3}", record.test_hv, record.phi.alpha, record.phi.lambda);

    let path = out.join(CHECKPOINT);
    println!("checkpoint holds {} parameters", checkpoint_load(&path)?.len());
    let phis = [record.phi, HyperParams::new(0.5, 0.0)?, HyperParams::new(1.0, 2.0)?, HyperParams::new(2.0, 5.0)?];
    for r in cmd_eval(&cfg, &path, &phis, &out)? {
        println!("alpha {:.3}  lambda {:.3}  HV {:.4}  -> {}", r.phi.alpha, r.phi.lambda, r.hv, r.path.display());
    }
    Ok(())
}
