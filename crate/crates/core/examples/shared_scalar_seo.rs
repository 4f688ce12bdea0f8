//! Train on the shared-scalar task and compare the learned front with the
//! closed-form one.
//!
//! cargo run --release --example shared_scalar_seo -- [seed] [epochs] [lambda0]

use sepnet::data::{analytic_front, Problem, SharedScalarSpec};
use sepnet::net::NetSpec;
use sepnet::pareto::{hypervolume_2d, ParetoFront};
use sepnet::seo::{run_seo, SeoConfig};

fn main() -> sepnet::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let seed = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let epochs = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(60);
    let lambda0 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(SeoConfig::default().lambda0);

    let problem = Problem::shared_scalar(&SharedScalarSpec::default(), seed)?;
    let cfg = SeoConfig { epochs, lambda0, ..SeoConfig::default() };
    let spec = NetSpec::with_input(problem.input_dim());
    let run = run_seo(&cfg, &spec, &problem, seed, &mut |r| {
        let rec = r.record;
        println!("epoch {:3}  {:6}  alpha {:.3}  lambda {:.3}  val_hv {:.4}", rec.epoch, rec.active, rec.alpha, rec.lambda, rec.val_hv);
        Ok(())
    })?;

    let delta2 = problem.splits.test.target_gap();
    let oracle: Vec<[f64; 2]> =
        run.test_front.points.iter().map(|p| analytic_front(delta2, p.ray)).collect::<sepnet::Result<_>>()?;
    let hv_oracle = hypervolume_2d(&ParetoFront::from_losses(&oracle, cfg.reference)?);
    println!("\nray_r1   loss1    loss2    oracle1  oracle2");
    for (p, o) in run.test_front.points.iter().zip(&oracle) {
        println!("{:.2}     {:.4}   {:.4}   {:.4}   {:.4}", p.ray.r1(), p.losses[0], p.losses[1], o[0], o[1]);
    }
    println!(
        "\ntest HV {:.4} vs analytic {:.4} (ratio {:.4}); best epoch {:?}; {:.1}s",
        run.test_hv,
        hv_oracle,
        run.test_hv / hv_oracle,
        run.best_epoch,
        run.wall_clock_s
    );
    Ok(())
}
