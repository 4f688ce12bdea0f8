//! Accuracy against opportunity gap on the synthetic fairness data.
//!
//! cargo run --release --example fairness_front -- [seed] [epochs]

use sepnet::data::{bayes_optimal_deo, FairnessSpec, Problem};
use sepnet::net::NetSpec;
use sepnet::seo::{run_seo, SeoConfig};

fn main() -> sepnet::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let seed = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let epochs = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(20);

    let spec = FairnessSpec { samples: 8000, ..FairnessSpec::default() };
    let problem = Problem::fairness(&spec, seed)?;
    let net = NetSpec::with_input(problem.input_dim());
    println!("{} trunk parameters, {} in conditioning modules", net.trunk_param_count(), net.cond_param_count());
    let cfg = SeoConfig { epochs, ..SeoConfig::default() };
    let run = run_seo(&cfg, &net, &problem, seed, &mut |r| {
        println!("epoch {:3}  alpha {:.3}  lambda {:.3}  val_hv {:.4}", r.record.epoch, r.record.alpha, r.record.lambda, r.record.val_hv);
        Ok(())
    })?;
    println!("\nray_r1   bce      gap");
    for p in &run.test_front.points {
        println!("{:.2}     {:.4}   {:.4}", p.ray.r1(), p.losses[0], p.losses[1]);
    }
    println!("test HV {:.4}; gap of the Bayes classifier {:.4}", run.test_hv, bayes_optimal_deo(&spec)?);
    Ok(())
}
