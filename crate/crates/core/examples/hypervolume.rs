//! Exact two-objective hypervolume against a Monte-Carlo estimate.
//!
//! cargo run --release --example hypervolume -- [points] [samples]

use sepnet::mathcore::Rng;
use sepnet::pareto::{hypervolume_2d, hypervolume_mc_oracle, non_dominated_filter, ParetoFront, DEFAULT_REFERENCE};

fn main() -> sepnet::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let n: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    let samples: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(1_000_000);

    let mut rng = Rng::new(3);
    let points: Vec<[f64; 2]> = (0..n).map(|_| [rng.uniform(0.0, 2.2), rng.uniform(0.0, 2.2)]).collect();
    let front = ParetoFront::from_losses(&points, DEFAULT_REFERENCE)?;
    println!("{n} points, {} non-dominated:", non_dominated_filter(&points).len());
    for p in non_dominated_filter(&points) {
        println!("  ({:.3}, {:.3})", p[0], p[1]);
    }
    let exact = hypervolume_2d(&front);
    let mc = hypervolume_mc_oracle(&front, samples, &mut rng)?;
    println!("exact {exact:.5}");
    println!("mc    {:.5} +/- {:.5} ({:.2} standard errors off)", mc.value, mc.std_error, (exact - mc.value).abs() / mc.std_error);
    Ok(())
}
