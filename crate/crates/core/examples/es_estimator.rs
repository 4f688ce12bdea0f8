//! The mean-baselined evolution-strategy gradient on a quadratic, and
//! hyper-parameter ascent on an injected fitness.
//!
//! cargo run --release --example es_estimator

use sepnet::mathcore::Rng;
use sepnet::objectives::HyperParams;
use sepnet::seo::{es_gradient, es_update_with, SeoConfig};

fn main() -> sepnet::Result<()> {
    let c = [1.0, 2.0];
    let phi = [1.5, 2.0];
    let fitness = |p: [f64; 2]| Ok(-((p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2)));
    let mut rng = Rng::new(0);
    println!("true gradient ({:.2}, {:.2})", -2.0 * (phi[0] - c[0]), -2.0 * (phi[1] - c[1]));
    for n in [10, 100, 1_000, 10_000] {
        let (g, _) = es_gradient(phi, [true; 2], 0.1, n, &mut rng, |p, e| Ok([p[0] + e[0], p[1] + e[1]]), fitness)?;
        println!("  n = {n:5}: ({:+.4}, {:+.4})", g[0], g[1]);
    }

    let cfg = SeoConfig::default();
    let mut p = HyperParams::new(0.4, 3.0)?;
    println!("\nascent towards alpha 1.3, lambda 1.0 (five steps per coordinate):");
    for step in 0..300 {
        let coord = cfg.active_coord(step);
        p = es_update_with(p, coord, &cfg, &mut rng, |q| Ok(-(q.alpha - 1.3).powi(2) - (q.lambda - 1.0).powi(2)))?.phi;
        if step % 50 == 49 {
            println!("  step {:3}: alpha {:.3}, lambda {:.3}", step + 1, p.alpha, p.lambda);
        }
    }
    Ok(())
}
