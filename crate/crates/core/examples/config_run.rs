//! Parse a flat key = value configuration, train, and list the run directory.
//!
//! cargo run --release --example config_run -- [config_file]

use std::path::Path;

use sepnet::harness::{cmd_train, parse_config, RunConfig};

const DEMO: &str = "\
task = shared_scalar
seed = 3
out = runs/config_demo
mode = sepnet
seo.epochs = 25
seo.population = 10
";

fn main() -> sepnet::Result<()> {
    let cfg = match std::env::args().nth(1) {
        Some(path) => parse_config(Path::new(&path))?,
        None => RunConfig::parse_str(DEMO, Path::new("."))?,
    };
    let record = cmd_train(&cfg)?;
    println!("test HV {:.4}, best epoch {:?}, {:.1}s", record.test_hv, record.best_epoch, record.wall_clock_s);
    let mut names: Vec<String> = std::fs::read_dir(&record.out_dir)
        .map_err(|e| sepnet::Error::Io { path: record.out_dir.clone(), source: e })?
        .filter_map(|e| e.ok().map(|e| e.file_name().to_string_lossy().into_owned()))
        .collect();
    names.sort();
    println!("{}: {}", record.out_dir.display(), names.join(", "));
    Ok(())
}
