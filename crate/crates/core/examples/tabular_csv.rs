//! Load a CSV through a column schema and train on it.
//!
//! cargo run --release --example tabular_csv -- [data.csv schema.txt]
//!
//! Without arguments a small synthetic CSV is written to the temp directory.

use std::fmt::Write as _;
use std::path::PathBuf;

use sepnet::data::{load_tabular_csv, Problem, TabularSchema};
use sepnet::mathcore::Rng;
use sepnet::net::NetSpec;
use sepnet::seo::{run_seo, SeoConfig};

const SCHEMA: &str = "\
# column = role[:positive value]
age = feature
hours = feature
sector = feature
group = sensitive:b
income = label:>50K
id = ignore
";

fn write_demo() -> sepnet::Result<(PathBuf, PathBuf)> {
    let dir = std::env::temp_dir().join("sepnet_tabular_demo");
    let io = |e| sepnet::Error::Io { path: dir.clone(), source: e };
    std::fs::create_dir_all(&dir).map_err(io)?;
    let mut rng = Rng::new(9);
    let mut csv = String::from("id,age,hours,sector,group,income\n");
    for i in 0..2000 {
        let group = if rng.bernoulli(0.5) { "a" } else { "b" };
        let age = rng.uniform(18.0, 70.0);
        let hours = rng.uniform(10.0, 60.0);
        let sector = ["public", "private", "self"][rng.below(3)];
        let score = (age - 40.0) / 15.0 + (hours - 35.0) / 12.0 + if group == "b" { 0.8 } else { 0.0 } + rng.normal();
        let income = if score > 0.5 { ">50K" } else { "<=50K" };
        let _ = writeln!(csv, "{i},{age:.1},{hours:.1},{sector},{group},{income}");
    }
    let (csv_path, schema_path) = (dir.join("demo.csv"), dir.join("schema.txt"));
    std::fs::write(&csv_path, csv).map_err(io)?;
    std::fs::write(&schema_path, SCHEMA).map_err(io)?;
    Ok((csv_path, schema_path))
}

fn main() -> sepnet::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let (csv, schema) = match (args.get(1), args.get(2)) {
        (Some(c), Some(s)) => (PathBuf::from(c), PathBuf::from(s)),
        _ => write_demo()?,
    };
    let schema = TabularSchema::load(&schema)?;
    let splits = load_tabular_csv(&csv, &schema, 0)?;
    println!("train {} / val {} / test {} rows, {} encoded features", splits.train.len(), splits.val.len(), splits.test.len(), splits.train.input_dim());

    let problem = Problem::tabular(&csv, &schema, 0)?;
    let cfg = SeoConfig { epochs: 15, ..SeoConfig::default() };
    let run = run_seo(&cfg, &NetSpec::with_input(problem.input_dim()), &problem, 0, &mut |_| Ok(()))?;
    for p in &run.test_front.points {
        println!("ray {:.2}: bce {:.4}, gap {:.4}", p.ray.r1(), p.losses[0], p.losses[1]);
    }
    println!("test HV {:.4}", run.test_hv);
    Ok(())
}
