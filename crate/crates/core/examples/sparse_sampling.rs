//! Dirichlet ray sampling, ray quantization, and the offset bins used for
//! the effective hyper-parameters.
//!
//! cargo run --example sparse_sampling -- [alpha]

use sepnet::mathcore::{dirichlet_sample, quantize, quantize_ray, QuantSpec, Rng};
use sepnet::objectives::HyperParams;
use sepnet::seo::SeoConfig;

fn main() -> sepnet::Result<()> {
    let alpha: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1.0);
    let mut rng = Rng::new(0);

    // Histogram of quantized r1 over a 10-bin grid.
    let mut counts = [0usize; 10];
    for _ in 0..20_000 {
        let ray = quantize_ray(dirichlet_sample(alpha, &mut rng)?, 10)?;
        counts[((ray.r1() * 10.0) as usize).min(9)] += 1;
    }
    println!("quantized r1 under Dir({alpha}, {alpha}):");
    for (k, c) in counts.iter().enumerate() {
        println!("  {:.2}  {:6}  {}", (2 * k + 1) as f64 / 20.0, c, "#".repeat(c / 200));
    }

    let bins = QuantSpec::with_width(-0.2, 0.2, 0.1)?;
    println!("\nalpha offset bin centres: {:?}", bins.centers());
    for x in [-0.31, -0.12, 0.0, 0.04, 0.19] {
        println!("  offset {x:+.2} -> {:+.2}", quantize(x, &bins)?);
    }

    let sampler = SeoConfig::default().sampler()?;
    let phi = HyperParams::new(1.0, 0.5)?;
    println!("\neffective phi draws around {phi:?}:");
    for _ in 0..5 {
        let eps = sampler.draw_offsets(&mut rng);
        let eff = sampler.effective(phi, eps)?;
        println!("  eps ({:+.3}, {:+.3}) -> alpha {:.2}, lambda {:.2}", eps.0, eps.1, eff.alpha, eff.lambda);
    }
    Ok(())
}
