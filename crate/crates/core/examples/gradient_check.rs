//! Central finite differences against the analytic gradient of the full
//! training objective (conditioning modules plus cosine term).
//!
//! cargo run --release --example gradient_check -- [lambda]

use sepnet::data::{gen_synthetic_fairness, FairnessSpec, ProblemKind};
use sepnet::mathcore::{PreferenceRay, Rng};
use sepnet::net::{NetParams, NetSpec};
use sepnet::objectives::{pfl_loss_at, HyperParams, TaskPair};

fn main() -> sepnet::Result<()> {
    let lambda: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2.0);
    let spec = FairnessSpec { samples: 64, ..FairnessSpec::default() };
    let data = gen_synthetic_fairness(&spec, 1)?;
    let net = NetSpec { hidden_dims: vec![8, 6], ..NetSpec::with_input(spec.input_dim()) };
    let mut rng = Rng::new(2);
    let mut params = NetParams::init(&net, &mut rng)?;
    for r in params.conditioning_ranges() {
        for v in &mut params.values_mut()[r] {
            *v += 0.2 * rng.normal();
        }
    }
    let tasks = TaskPair::for_problem(ProblemKind::Fairness);
    let (ray, phi) = (PreferenceRay::from_first(0.3)?, HyperParams::new(1.0, lambda)?);
    let eval = pfl_loss_at(&params, &tasks, &data, ray, phi)?;
    println!("loss {:.6}, task losses {:?}, {} parameters", eval.loss, eval.losses, params.len());

    let h = 1e-5;
    let mut worst = (0.0f64, 0);
    for k in 0..params.len() {
        let mut up = params.clone();
        up.values_mut()[k] += h;
        let mut down = params.clone();
        down.values_mut()[k] -= h;
        let fd = (pfl_loss_at(&up, &tasks, &data, ray, phi)?.loss - pfl_loss_at(&down, &tasks, &data, ray, phi)?.loss) / (2.0 * h);
        let an = eval.grads.as_slice()[k];
        let rel = (fd - an).abs() / fd.abs().max(an.abs()).max(1e-6);
        if rel > worst.0 {
            worst = (rel, k);
        }
    }
    println!("max relative error {:.3e} at parameter {}", worst.0, worst.1);
    Ok(())
}
