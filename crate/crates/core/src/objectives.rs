//! Task losses and the preference-conditioned training objective.
//!
//! Losses are computed per batch. The training objective at ray `r` with
//! regularizer weight `lambda` is `r . L - lambda * cos(r, L)`.

use crate::data::{Dataset, ProblemKind};
use crate::mathcore::{dirichlet_sample, quantize, quantize_ray, Matrix, PreferenceRay, QuantSpec, Rng};
use crate::net::{ConditionVector, Gradients, NetParams};
use crate::{Error, Result};

/// Smoothing constant for the absolute value in the opportunity gap.
const DEO_SMOOTHING: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TaskKind {
    Mse,
    /// Binary cross-entropy on logits.
    Bce,
    /// `|mean tanh(o) over y=1,s=0  -  mean tanh(o) over y=1,s=1|`.
    DeoTanh,
}

/// One objective: a loss kind reading one output column against one target column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TaskDef {
    pub kind: TaskKind,
    pub output: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TaskPair(pub [TaskDef; 2]);

impl TaskPair {
    pub fn for_problem(kind: ProblemKind) -> Self {
        let task = |kind| TaskDef { kind, output: 0 };
        match kind {
            ProblemKind::SharedScalar => TaskPair([task(TaskKind::Mse), task(TaskKind::Mse)]),
            ProblemKind::Fairness => TaskPair([task(TaskKind::Bce), task(TaskKind::DeoTanh)]),
        }
    }
}

/// `phi = [alpha, lambda]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HyperParams {
    pub alpha: f64,
    pub lambda: f64,
}

impl HyperParams {
    pub fn new(alpha: f64, lambda: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::invalid(format!("alpha must be positive, got {alpha}")));
        }
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::invalid(format!("lambda must be non-negative, got {lambda}")));
        }
        Ok(HyperParams { alpha, lambda })
    }

    pub fn clamped(self, alpha_min: f64, lambda_min: f64) -> Self {
        HyperParams { alpha: self.alpha.max(alpha_min), lambda: self.lambda.max(lambda_min) }
    }

    pub fn as_array(&self) -> [f64; 2] {
        [self.alpha, self.lambda]
    }

    pub fn condition(&self, ray: PreferenceRay) -> Result<ConditionVector> {
        ConditionVector::new(ray, self.alpha, self.lambda)
    }
}

/// Loss value and its gradient with respect to each output in the batch.
pub fn task_loss(kind: TaskKind, outputs: &[f64], targets: &[f64], sensitive: Option<&[f64]>) -> Result<(f64, Vec<f64>)> {
    let n = outputs.len();
    if n == 0 || targets.len() != n {
        return Err(Error::structural(format!("{n} outputs against {} targets", targets.len())));
    }
    let inv = 1.0 / n as f64;
    match kind {
        TaskKind::Mse => {
            let loss = outputs.iter().zip(targets).map(|(o, t)| (o - t).powi(2)).sum::<f64>() * inv;
            let grad = outputs.iter().zip(targets).map(|(o, t)| 2.0 * (o - t) * inv).collect();
            Ok((loss, grad))
        }
        TaskKind::Bce => {
            // log(1 + e^o) - t o, written to stay finite for large |o|.
            let softplus = |o: f64| o.max(0.0) + (-o.abs()).exp().ln_1p();
            let sigmoid = |o: f64| 1.0 / (1.0 + (-o).exp());
            let loss = outputs.iter().zip(targets).map(|(&o, &t)| softplus(o) - t * o).sum::<f64>() * inv;
            let grad = outputs.iter().zip(targets).map(|(&o, &t)| (sigmoid(o) - t) * inv).collect();
            Ok((loss, grad))
        }
        TaskKind::DeoTanh => deo_tanh(outputs, targets, sensitive),
    }
}

fn deo_tanh(outputs: &[f64], labels: &[f64], sensitive: Option<&[f64]>) -> Result<(f64, Vec<f64>)> {
    let s = sensitive.ok_or_else(|| Error::structural("opportunity gap needs the sensitive attribute"))?;
    if s.len() != outputs.len() {
        return Err(Error::structural("sensitive attribute length differs from the batch"));
    }
    let mut sums = [0.0; 2];
    let mut counts = [0usize; 2];
    for ((&o, &y), &g) in outputs.iter().zip(labels).zip(s) {
        if y == 1.0 {
            let g = usize::from(g == 1.0);
            sums[g] += o.tanh();
            counts[g] += 1;
        }
    }
    if counts.contains(&0) {
        return Err(Error::DegenerateBatch(format!(
            "positive examples per sensitive group: {} and {}",
            counts[0], counts[1]
        )));
    }
    let d = sums[0] / counts[0] as f64 - sums[1] / counts[1] as f64;
    let smooth = (d * d + DEO_SMOOTHING).sqrt();
    let loss = smooth - DEO_SMOOTHING.sqrt();
    let dd = d / smooth;
    let grad = outputs
        .iter()
        .zip(labels)
        .zip(s)
        .map(|((&o, &y), &g)| {
            if y != 1.0 {
                return 0.0;
            }
            let sech2 = 1.0 - o.tanh().powi(2);
            if g == 1.0 {
                -dd * sech2 / counts[1] as f64
            } else {
                dd * sech2 / counts[0] as f64
            }
        })
        .collect();
    Ok((loss, grad))
}

pub fn linear_scalarization(losses: [f64; 2], ray: PreferenceRay) -> f64 {
    ray.r1() * losses[0] + ray.r2() * losses[1]
}

/// `cos(r, L)` and its gradient in `L`; zero at `L = 0`.
pub fn cosine_regularizer(ray: PreferenceRay, losses: [f64; 2]) -> (f64, [f64; 2]) {
    let r = ray.as_array();
    let l_norm = losses[0].hypot(losses[1]);
    if l_norm == 0.0 {
        return (0.0, [0.0; 2]);
    }
    let r_norm = r[0].hypot(r[1]);
    let cos = (r[0] * losses[0] + r[1] * losses[1]) / (r_norm * l_norm);
    let grad = [0, 1].map(|i| r[i] / (r_norm * l_norm) - cos * losses[i] / (l_norm * l_norm));
    (cos, grad)
}

/// Per-task losses of `outputs` on `batch`, with gradients as an output-shaped matrix each.
pub fn task_losses(tasks: &TaskPair, outputs: &Matrix, batch: &Dataset) -> Result<([f64; 2], [Matrix; 2])> {
    let mut values = [0.0; 2];
    let mut grads = [Matrix::zeros(outputs.rows(), outputs.cols()), Matrix::zeros(outputs.rows(), outputs.cols())];
    for (t, task) in tasks.0.iter().enumerate() {
        if task.output >= outputs.cols() {
            return Err(Error::structural(format!("task reads output {} of {}", task.output, outputs.cols())));
        }
        let column = outputs.column(task.output);
        let (value, grad) = task_loss(task.kind, &column, &batch.targets[t], batch.sensitive.as_deref())?;
        values[t] = value;
        for (i, g) in grad.into_iter().enumerate() {
            grads[t].set(i, task.output, g);
        }
    }
    Ok((values, grads))
}

/// Objective value at a fixed condition.
#[derive(Clone, Debug)]
pub struct PflEval {
    pub loss: f64,
    pub losses: [f64; 2],
    pub grads: Gradients,
}

/// `r . L - lambda cos(r, L)` at condition `[ray, phi]` and its parameter gradient.
pub fn pfl_loss_at(
    params: &NetParams,
    tasks: &TaskPair,
    batch: &Dataset,
    ray: PreferenceRay,
    phi: HyperParams,
) -> Result<PflEval> {
    let (outputs, cache) = params.forward(&batch.inputs, &phi.condition(ray)?)?;
    let (losses, task_grads) = task_losses(tasks, &outputs, batch)?;
    let (cos, cos_grad) = cosine_regularizer(ray, losses);
    let loss = linear_scalarization(losses, ray) - phi.lambda * cos;
    let r = ray.as_array();
    let weights = [0, 1].map(|i| r[i] - phi.lambda * cos_grad[i]);
    let mut grad_out = Matrix::zeros(outputs.rows(), outputs.cols());
    for (w, g) in weights.iter().zip(&task_grads) {
        for (acc, v) in grad_out.as_mut_slice().iter_mut().zip(g.as_slice()) {
            *acc += w * v;
        }
    }
    let grads = params.backward(&cache, &grad_out)?;
    Ok(PflEval { loss, losses, grads })
}

/// How training conditions are drawn around the current `phi`.
///
/// Offsets are drawn uniformly over each range and snapped to the centre of
/// their bin; a `None` range disables the offset for that coordinate. Rays are
/// snapped to a `ray_grid`-bin grid unless it is `None`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditionSampler {
    pub alpha_offsets: Option<QuantSpec>,
    pub lambda_offsets: Option<QuantSpec>,
    pub ray_grid: Option<u32>,
    pub alpha_min: f64,
    pub lambda_min: f64,
}

impl ConditionSampler {
    pub fn draw_offsets(&self, rng: &mut Rng) -> (f64, f64) {
        let mut draw = |spec: &Option<QuantSpec>| spec.map_or(0.0, |q| rng.uniform(q.lo(), q.hi()));
        let a = draw(&self.alpha_offsets);
        (a, draw(&self.lambda_offsets))
    }

    /// `phi + eps` with each offset snapped to its bin centre, then clamped.
    pub fn effective(&self, phi: HyperParams, eps: (f64, f64)) -> Result<HyperParams> {
        let snap = |x: f64, spec: &Option<QuantSpec>| match spec {
            Some(q) => quantize(x, q),
            None => Ok(0.0),
        };
        let alpha = phi.alpha + snap(eps.0, &self.alpha_offsets)?;
        let lambda = phi.lambda + snap(eps.1, &self.lambda_offsets)?;
        Ok(HyperParams { alpha, lambda }.clamped(self.alpha_min, self.lambda_min))
    }

    pub fn snap_ray(&self, ray: PreferenceRay) -> Result<PreferenceRay> {
        match self.ray_grid {
            Some(tau) => quantize_ray(ray, tau),
            None => Ok(ray),
        }
    }

    pub fn draw_ray(&self, alpha: f64, rng: &mut Rng) -> Result<PreferenceRay> {
        self.snap_ray(dirichlet_sample(alpha, rng)?)
    }
}

/// One stochastic training objective evaluation.
#[derive(Clone, Debug)]
pub struct PflStep {
    pub eval: PflEval,
    pub ray: PreferenceRay,
    pub phi: HyperParams,
}

/// Draw `r ~ Dir(alpha_eff)`, snap it, and evaluate the objective at `[r, phi_eff]`.
pub fn pfl_training_loss(
    params: &NetParams,
    tasks: &TaskPair,
    batch: &Dataset,
    phi: HyperParams,
    eps: (f64, f64),
    sampler: &ConditionSampler,
    rng: &mut Rng,
) -> Result<PflStep> {
    let effective = sampler.effective(phi, eps)?;
    let ray = sampler.draw_ray(effective.alpha, rng)?;
    let eval = pfl_loss_at(params, tasks, batch, ray, effective)?;
    Ok(PflStep { eval, ray, phi: effective })
}
