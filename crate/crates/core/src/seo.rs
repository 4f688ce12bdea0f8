//! Evolution-strategy search over `phi = [alpha, lambda]` interleaved with training.
//!
//! Each epoch trains the network on conditions drawn around the current
//! `phi`, then takes one evolution-strategy step on a single coordinate of
//! `phi` using validation hypervolume as fitness. The coordinate being
//! evolved alternates every `alternation_period` epochs.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use log::{debug, info};
use rayon::prelude::*;

use crate::data::{Dataset, Problem};
use crate::mathcore::{quantize, PreferenceRay, QuantSpec, Rng};
use crate::net::{adam_step, AdamConfig, AdamState, NetParams, NetSpec};
use crate::objectives::{pfl_training_loss, ConditionSampler, HyperParams, TaskPair};
use crate::pareto::{hypervolume_2d, sweep_front, ParetoFront, DEFAULT_REFERENCE};
use crate::{Error, Result};

/// Which parts of the procedure run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Sparse sampling, offset noise on `phi`, and evolution of `phi`.
    Sepnet,
    /// Sparse ray sampling at a constant `phi`.
    Fixed,
    /// Continuous ray sampling at a constant `phi`.
    Cosmos,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Sepnet => "sepnet",
            Mode::Fixed => "fixed",
            Mode::Cosmos => "cosmos",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "sepnet" => Ok(Mode::Sepnet),
            "fixed" => Ok(Mode::Fixed),
            "cosmos" => Ok(Mode::Cosmos),
            other => Err(format!("unknown mode `{other}` (expected sepnet, fixed or cosmos)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coord {
    Alpha,
    Lambda,
}

impl Coord {
    pub fn index(self) -> usize {
        match self {
            Coord::Alpha => 0,
            Coord::Lambda => 1,
        }
    }

    pub fn other(self) -> Coord {
        match self {
            Coord::Alpha => Coord::Lambda,
            Coord::Lambda => Coord::Alpha,
        }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coord::Alpha => "alpha",
            Coord::Lambda => "lambda",
        })
    }
}

impl FromStr for Coord {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "alpha" => Ok(Coord::Alpha),
            "lambda" => Ok(Coord::Lambda),
            other => Err(format!("unknown coordinate `{other}` (expected alpha or lambda)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeoConfig {
    pub mode: Mode,
    pub sigma: f64,
    pub population: usize,
    pub es_lr: f64,
    pub alternation_period: usize,
    pub start_coord: Coord,
    pub alpha0: f64,
    pub lambda0: f64,
    pub alpha_offset_range: (f64, f64),
    pub alpha_offset_bin: f64,
    pub lambda_offset_range: (f64, f64),
    pub lambda_offset_bin: f64,
    pub alpha_min: f64,
    pub lambda_min: f64,
    pub epochs: usize,
    pub train_lr: f64,
    pub batch_size: usize,
    pub ray_grid: u32,
    /// First components of the validation / test rays.
    pub eval_rays: Vec<f64>,
    pub reference: [f64; 2],
}

impl Default for SeoConfig {
    fn default() -> Self {
        SeoConfig {
            mode: Mode::Sepnet,
            sigma: 0.1,
            population: 10,
            es_lr: 0.01,
            alternation_period: 5,
            start_coord: Coord::Alpha,
            alpha0: 1.0,
            lambda0: 0.0,
            alpha_offset_range: (-0.2, 0.2),
            alpha_offset_bin: 0.1,
            lambda_offset_range: (-1.0, 1.0),
            lambda_offset_bin: 0.5,
            alpha_min: 0.1,
            lambda_min: 0.0,
            epochs: 60,
            train_lr: 1e-3,
            batch_size: 32,
            ray_grid: 10,
            eval_rays: vec![0.05, 0.25, 0.45, 0.65, 0.85],
            reference: DEFAULT_REFERENCE,
        }
    }
}

impl SeoConfig {
    pub fn validate(&self) -> Result<()> {
        let field = |name: &str, message: String| Err(Error::ConfigField { field: name.into(), message });
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return field("seo.sigma", format!("must be positive, got {}", self.sigma));
        }
        if self.population < 2 {
            return field("seo.population", format!("needs at least 2 members, got {}", self.population));
        }
        if !(self.es_lr.is_finite() && self.es_lr >= 0.0) {
            return field("seo.es_lr", format!("must be non-negative, got {}", self.es_lr));
        }
        if self.alternation_period == 0 {
            return field("seo.alternation_period", "must be at least 1".into());
        }
        if !(self.train_lr.is_finite() && self.train_lr > 0.0) {
            return field("seo.train_lr", format!("must be positive, got {}", self.train_lr));
        }
        if self.batch_size == 0 {
            return field("seo.batch_size", "must be at least 1".into());
        }
        if self.ray_grid == 0 {
            return field("seo.ray_grid", "must be at least 1".into());
        }
        if !(self.alpha_min.is_finite() && self.alpha_min > 0.0) {
            return field("seo.alpha_min", format!("must be positive, got {}", self.alpha_min));
        }
        if !(self.lambda_min.is_finite() && self.lambda_min >= 0.0) {
            return field("seo.lambda_min", format!("must be non-negative, got {}", self.lambda_min));
        }
        if let Err(e) = HyperParams::new(self.alpha0, self.lambda0) {
            return field("seo.alpha0", e.to_string());
        }
        if let Err(e) = self.offset_specs() {
            return field("seo.alpha_offset_range", e.to_string());
        }
        if !self.reference.iter().all(|r| r.is_finite() && *r > 0.0) {
            return field("seo.reference", format!("must be positive, got {:?}", self.reference));
        }
        if self.eval_rays.is_empty() {
            return field("seo.eval_rays", "needs at least one ray".into());
        }
        match self.eval_rays() {
            Ok(rays) if rays.iter().enumerate().all(|(i, r)| !rays[..i].contains(r)) => Ok(()),
            Ok(_) => field("seo.eval_rays", "rays must be distinct".into()),
            Err(e) => field("seo.eval_rays", e.to_string()),
        }
    }

    pub fn initial_phi(&self) -> Result<HyperParams> {
        HyperParams::new(self.alpha0, self.lambda0)
    }

    fn offset_specs(&self) -> Result<(QuantSpec, QuantSpec)> {
        let (a, l) = (self.alpha_offset_range, self.lambda_offset_range);
        Ok((
            QuantSpec::with_width(a.0, a.1, self.alpha_offset_bin)?,
            QuantSpec::with_width(l.0, l.1, self.lambda_offset_bin)?,
        ))
    }

    /// Training-condition sampler for this mode.
    pub fn sampler(&self) -> Result<ConditionSampler> {
        let (alpha, lambda) = self.offset_specs()?;
        let sepnet = self.mode == Mode::Sepnet;
        Ok(ConditionSampler {
            alpha_offsets: sepnet.then_some(alpha),
            lambda_offsets: sepnet.then_some(lambda),
            ray_grid: (self.mode != Mode::Cosmos).then_some(self.ray_grid),
            alpha_min: self.alpha_min,
            lambda_min: self.lambda_min,
        })
    }

    /// Evaluation rays, snapped to the ray grid in the sparse modes.
    pub fn eval_rays(&self) -> Result<Vec<PreferenceRay>> {
        let sampler = self.sampler()?;
        self.eval_rays.iter().map(|&r1| sampler.snap_ray(PreferenceRay::from_first(r1)?)).collect()
    }

    pub fn evolves(&self) -> bool {
        self.mode == Mode::Sepnet
    }

    /// Coordinate evolved during `epoch`.
    pub fn active_coord(&self, epoch: usize) -> Coord {
        if (epoch / self.alternation_period).is_multiple_of(2) {
            self.start_coord
        } else {
            self.start_coord.other()
        }
    }
}

/// One epoch of the `phi` trajectory.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhiRecord {
    pub epoch: usize,
    pub alpha: f64,
    pub lambda: f64,
    pub active: Coord,
    pub val_hv: f64,
    pub best_val_hv: f64,
}

pub type PhiTrace = Vec<PhiRecord>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpochStats {
    pub mean_loss: f64,
    pub batches: usize,
    pub skipped: usize,
}

/// One pass over shuffled `train`, one Adam step per batch.
#[allow(clippy::too_many_arguments)]
pub fn train_epoch(
    params: &mut NetParams,
    adam: &mut AdamState,
    train: &Dataset,
    tasks: &TaskPair,
    phi: HyperParams,
    cfg: &SeoConfig,
    rng: &mut Rng,
) -> Result<EpochStats> {
    let sampler = cfg.sampler()?;
    let adam_cfg = AdamConfig::with_lr(cfg.train_lr);
    let mut order: Vec<usize> = (0..train.len()).collect();
    rng.shuffle(&mut order);
    let mut total = 0.0;
    let mut stats = EpochStats { mean_loss: 0.0, batches: 0, skipped: 0 };
    for (b, chunk) in order.chunks(cfg.batch_size).enumerate() {
        let batch = train.subset(chunk);
        let eps = sampler.draw_offsets(rng);
        let step = match pfl_training_loss(params, tasks, &batch, phi, eps, &sampler, rng) {
            Ok(step) => step,
            Err(Error::DegenerateBatch(why)) => {
                debug!("skipping batch {b}: {why}");
                stats.skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        if !step.eval.loss.is_finite() {
            return Err(Error::TrainingDivergence { batch: b, reason: format!("loss {}", step.eval.loss) });
        }
        adam_step(params, &step.eval.grads, adam, &adam_cfg).map_err(|e| match e {
            Error::TrainingDivergence { reason, .. } => Error::TrainingDivergence { batch: b, reason },
            other => other,
        })?;
        total += step.eval.loss;
        stats.batches += 1;
    }
    if stats.batches > 0 {
        stats.mean_loss = total / stats.batches as f64;
    }
    Ok(stats)
}

/// Mean-baselined evolution-strategy gradient estimate.
///
/// Draws `n` standard normal perturbations (zero on coordinates outside
/// `mask`), evaluates `fitness` at `snap(phi, sigma * eps)`, and returns
/// `1/(n sigma) sum (S_i - mean S) eps_i` with the fitness values.
pub fn es_gradient<S, F>(
    phi: [f64; 2],
    mask: [bool; 2],
    sigma: f64,
    n: usize,
    rng: &mut Rng,
    snap: S,
    fitness: F,
) -> Result<([f64; 2], Vec<f64>)>
where
    S: Fn([f64; 2], [f64; 2]) -> Result<[f64; 2]> + Sync,
    F: Fn([f64; 2]) -> Result<f64> + Sync,
{
    let eps: Vec<[f64; 2]> = (0..n)
        .map(|_| [0, 1].map(|i| if mask[i] { rng.normal() } else { 0.0 }))
        .collect();
    let scores = eps
        .par_iter()
        .map(|e| fitness(snap(phi, [sigma * e[0], sigma * e[1]])?))
        .collect::<Result<Vec<f64>>>()?;
    let mean = scores.iter().sum::<f64>() / n as f64;
    let mut grad = [0.0; 2];
    for (s, e) in scores.iter().zip(&eps) {
        for i in 0..2 {
            grad[i] += (s - mean) * e[i];
        }
    }
    Ok((grad.map(|g| g / (n as f64 * sigma)), scores))
}

#[derive(Clone, Debug, PartialEq)]
pub struct EsStep {
    pub phi: HyperParams,
    pub gradient: [f64; 2],
    pub fitness: Vec<f64>,
}

/// One ascent step on `active` with an arbitrary fitness of `phi`.
///
/// Perturbations are snapped to the offset bins centred on the current
/// `phi` and clamped to the configured minima before evaluation.
pub fn es_update_with<F>(phi: HyperParams, active: Coord, cfg: &SeoConfig, rng: &mut Rng, fitness: F) -> Result<EsStep>
where
    F: Fn(HyperParams) -> Result<f64> + Sync,
{
    let (alpha_bins, lambda_bins) = cfg.offset_specs()?;
    let bins = [alpha_bins, lambda_bins];
    let k = active.index();
    let mut mask = [false; 2];
    mask[k] = true;
    let snap = |center: [f64; 2], delta: [f64; 2]| {
        let mut point = center;
        point[k] += quantize(delta[k], &bins[k])?;
        Ok(point)
    };
    let (gradient, scores) = es_gradient(phi.as_array(), mask, cfg.sigma, cfg.population, rng, snap, |p| {
        fitness(HyperParams { alpha: p[0], lambda: p[1] }.clamped(cfg.alpha_min, cfg.lambda_min))
    })?;
    if scores.iter().all(|&s| s == scores[0]) {
        debug!("constant fitness {} across the population; phi unchanged", scores[0]);
    }
    let mut next = phi.as_array();
    next[k] += cfg.es_lr * gradient[k];
    let phi = HyperParams { alpha: next[0], lambda: next[1] }.clamped(cfg.alpha_min, cfg.lambda_min);
    Ok(EsStep { phi, gradient, fitness: scores })
}

/// Validation hypervolume of `params` conditioned on `phi`.
pub fn validation_hv(
    params: &NetParams,
    tasks: &TaskPair,
    data: &Dataset,
    phi: HyperParams,
    cfg: &SeoConfig,
) -> Result<f64> {
    let front = sweep_front(params, tasks, data, phi, &cfg.eval_rays()?, cfg.reference)?;
    Ok(hypervolume_2d(&front))
}

/// One ES step with hypervolume fitness on `val`; `params` are only read.
pub fn es_update(
    params: &NetParams,
    tasks: &TaskPair,
    phi: HyperParams,
    val: &Dataset,
    cfg: &SeoConfig,
    active: Coord,
    rng: &mut Rng,
) -> Result<EsStep> {
    es_update_with(phi, active, cfg, rng, |p| validation_hv(params, tasks, val, p, cfg))
}

/// Per-epoch progress handed to observers of [`run_seo`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpochReport {
    pub record: PhiRecord,
    pub stats: EpochStats,
}

#[derive(Clone, Debug)]
pub struct SeoRun {
    /// Snapshot with the highest validation hypervolume.
    pub params: NetParams,
    pub phi: HyperParams,
    /// `None` when no trained epoch beat the initial network.
    pub best_epoch: Option<usize>,
    pub best_val_hv: f64,
    pub trace: PhiTrace,
    pub test_front: ParetoFront,
    pub test_hv: f64,
    pub wall_clock_s: f64,
}

/// Train, evolve, keep the best validation snapshot, and score it on test.
pub fn run_seo(
    cfg: &SeoConfig,
    spec: &NetSpec,
    problem: &Problem,
    seed: u64,
    on_epoch: &mut dyn FnMut(&EpochReport) -> Result<()>,
) -> Result<SeoRun> {
    cfg.validate()?;
    let started = Instant::now();
    let root = Rng::new(seed);
    let mut train_rng = root.fork("train");
    let mut es_rng = root.fork("es");
    let tasks = TaskPair::for_problem(problem.kind);
    let splits = &problem.splits;

    let mut params = NetParams::init(spec, &mut root.fork("init"))?;
    let mut adam = AdamState::new(&params);
    let mut phi = cfg.initial_phi()?;
    let mut best = (params.clone(), phi, None, validation_hv(&params, &tasks, &splits.val, phi, cfg)?);
    let mut trace = Vec::with_capacity(cfg.epochs);

    for epoch in 0..cfg.epochs {
        let stats = train_epoch(&mut params, &mut adam, &splits.train, &tasks, phi, cfg, &mut train_rng)?;
        let active = cfg.active_coord(epoch);
        if cfg.evolves() {
            phi = es_update(&params, &tasks, phi, &splits.val, cfg, active, &mut es_rng)?.phi;
        }
        let val_hv = validation_hv(&params, &tasks, &splits.val, phi, cfg)?;
        if val_hv > best.3 {
            best = (params.clone(), phi, Some(epoch), val_hv);
        }
        let record = PhiRecord { epoch, alpha: phi.alpha, lambda: phi.lambda, active, val_hv, best_val_hv: best.3 };
        debug!("epoch {epoch}: loss {:.5} alpha {:.4} lambda {:.4} val_hv {val_hv:.5}", stats.mean_loss, phi.alpha, phi.lambda);
        on_epoch(&EpochReport { record, stats })?;
        trace.push(record);
    }

    let (params, phi, best_epoch, best_val_hv) = best;
    let test_front = sweep_front(&params, &tasks, &splits.test, phi, &cfg.eval_rays()?, cfg.reference)?;
    let test_hv = hypervolume_2d(&test_front);
    info!("best epoch {best_epoch:?}: val_hv {best_val_hv:.5} test_hv {test_hv:.5}");
    Ok(SeoRun {
        params,
        phi,
        best_epoch,
        best_val_hv,
        trace,
        test_front,
        test_hv,
        wall_clock_s: started.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::SharedScalarSpec;

    fn quadratic(c: [f64; 2]) -> impl Fn([f64; 2]) -> Result<f64> + Sync {
        move |p| Ok(-((p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2)))
    }

    #[test]
    fn estimator_matches_analytic_gradient() {
        let c = [1.0, 2.0];
        let phi = [1.5, 2.0];
        let mut rng = Rng::new(21);
        let pops = 10;
        let mut mean = [0.0; 2];
        for _ in 0..pops {
            let (g, _) = es_gradient(phi, [true; 2], 0.1, 10_000, &mut rng, |p, d| Ok([p[0] + d[0], p[1] + d[1]]), quadratic(c)).unwrap();
            mean[0] += g[0] / pops as f64;
            mean[1] += g[1] / pops as f64;
        }
        assert!((mean[0] + 1.0).abs() < 0.05, "{mean:?}");
        assert!(mean[1].abs() < 0.05, "{mean:?}");
    }

    #[test]
    fn estimator_error_shrinks_with_population() {
        let c = [0.0, 0.0];
        let phi = [0.5, 0.0];
        let mut errors = Vec::new();
        for n in [100, 1_000, 10_000] {
            let mut rng = Rng::new(n as u64);
            let reps = 20;
            let mut sq = 0.0;
            for _ in 0..reps {
                let (g, _) = es_gradient(phi, [true; 2], 0.1, n, &mut rng, |p, d| Ok([p[0] + d[0], p[1] + d[1]]), quadratic(c)).unwrap();
                sq += (g[0] + 1.0).powi(2) + g[1].powi(2);
            }
            errors.push((sq / reps as f64).sqrt());
        }
        assert!(errors[0] > errors[1] && errors[1] > errors[2], "{errors:?}");
        assert!(errors[2] < 0.05, "{errors:?}");
    }

    #[test]
    fn constant_fitness_leaves_phi_alone() {
        let cfg = SeoConfig::default();
        let phi = HyperParams::new(1.2, 0.7).unwrap();
        for coord in [Coord::Alpha, Coord::Lambda] {
            let step = es_update_with(phi, coord, &cfg, &mut Rng::new(1), |_| Ok(3.0)).unwrap();
            assert_eq!(step.phi, phi);
            assert_eq!(step.fitness.len(), cfg.population);
        }
    }

    #[test]
    fn injected_fitness_converges() {
        let cfg = SeoConfig::default();
        let mut phi = HyperParams::new(0.8, 0.0).unwrap();
        let mut rng = Rng::new(5);
        for _ in 0..200 {
            phi = es_update_with(phi, Coord::Alpha, &cfg, &mut rng, |p| Ok(-(p.alpha - 1.3).powi(2))).unwrap().phi;
        }
        assert!((phi.alpha - 1.3).abs() < 0.05, "{phi:?}");
        assert_eq!(phi.lambda, 0.0);
    }

    #[test]
    fn updates_respect_minimums() {
        let cfg = SeoConfig { es_lr: 50.0, ..SeoConfig::default() };
        let mut phi = HyperParams::new(0.3, 0.4).unwrap();
        let mut rng = Rng::new(2);
        for step in 0..50 {
            let coord = if step % 2 == 0 { Coord::Alpha } else { Coord::Lambda };
            phi = es_update_with(phi, coord, &cfg, &mut rng, |p| Ok(-p.alpha - p.lambda)).unwrap().phi;
            assert!(phi.alpha >= 0.1 && phi.lambda >= 0.0, "{phi:?}");
        }
        assert_eq!(phi.alpha, 0.1);
        assert_eq!(phi.lambda, 0.0);
    }

    #[test]
    fn alternation_schedule() {
        let cfg = SeoConfig::default();
        let coords: Vec<Coord> = (0..12).map(|e| cfg.active_coord(e)).collect();
        assert!(coords[..5].iter().all(|&c| c == Coord::Alpha));
        assert!(coords[5..10].iter().all(|&c| c == Coord::Lambda));
        assert_eq!(coords[10], Coord::Alpha);
        let flipped = SeoConfig { start_coord: Coord::Lambda, ..cfg };
        assert_eq!(flipped.active_coord(0), Coord::Lambda);
    }

    #[test]
    fn eval_rays_sit_on_the_grid() {
        let rays = SeoConfig::default().eval_rays().unwrap();
        let r1: Vec<f64> = rays.iter().map(|r| r.r1()).collect();
        for (got, want) in r1.iter().zip([0.05, 0.25, 0.45, 0.65, 0.85]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    fn small_problem() -> Problem {
        Problem::shared_scalar(&SharedScalarSpec { samples: 600, ..SharedScalarSpec::default() }, 3).unwrap()
    }

    #[test]
    fn zero_epochs_returns_initial_state() {
        let problem = small_problem();
        let cfg = SeoConfig { epochs: 0, ..SeoConfig::default() };
        let spec = NetSpec::with_input(problem.input_dim());
        let run = run_seo(&cfg, &spec, &problem, 7, &mut |_| Ok(())).unwrap();
        let init = NetParams::init(&spec, &mut Rng::new(7).fork("init")).unwrap();
        assert_eq!(run.params, init);
        assert_eq!(run.phi, cfg.initial_phi().unwrap());
        assert!(run.trace.is_empty());
        assert_eq!(run.best_epoch, None);
    }

    #[test]
    fn runs_are_seeded() {
        let problem = small_problem();
        let cfg = SeoConfig { epochs: 6, alternation_period: 2, lambda0: 1.0, ..SeoConfig::default() };
        let spec = NetSpec::with_input(problem.input_dim());
        let a = run_seo(&cfg, &spec, &problem, 11, &mut |_| Ok(())).unwrap();
        let b = run_seo(&cfg, &spec, &problem, 11, &mut |_| Ok(())).unwrap();
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.params, b.params);
        assert_eq!(a.test_hv, b.test_hv);
        assert!(a.trace.iter().all(|r| r.alpha >= 0.1 && r.lambda >= 0.0));
    }

    #[test]
    fn training_reduces_validation_loss() {
        let problem = small_problem();
        let tasks = TaskPair::for_problem(problem.kind);
        let cfg = SeoConfig::default();
        let spec = NetSpec::with_input(problem.input_dim());
        let mut rng = Rng::new(1);
        let mut params = NetParams::init(&spec, &mut rng).unwrap();
        let mut adam = AdamState::new(&params);
        let phi = cfg.initial_phi().unwrap();
        let scalarized = |p: &NetParams| {
            let front = sweep_front(p, &tasks, &problem.splits.val, phi, &cfg.eval_rays().unwrap(), cfg.reference).unwrap();
            front.points.iter().map(|q| q.ray.r1() * q.losses[0] + q.ray.r2() * q.losses[1]).sum::<f64>()
        };
        let before = scalarized(&params);
        for _ in 0..30 {
            train_epoch(&mut params, &mut adam, &problem.splits.train, &tasks, phi, &cfg, &mut rng).unwrap();
        }
        let after = scalarized(&params);
        assert!(after < before, "{before} -> {after}");
    }

    #[test]
    fn collapsed_noise_is_plain_conditioned_training() {
        // Fixed mode draws no offsets, so the effective phi is exactly phi.
        let cfg = SeoConfig { mode: Mode::Fixed, ..SeoConfig::default() };
        let sampler = cfg.sampler().unwrap();
        let mut rng = Rng::new(3);
        let phi = HyperParams::new(1.0, 2.0).unwrap();
        for _ in 0..20 {
            let eps = sampler.draw_offsets(&mut rng);
            assert_eq!(sampler.effective(phi, eps).unwrap(), phi);
        }
        assert!(SeoConfig { mode: Mode::Cosmos, ..cfg }.sampler().unwrap().ray_grid.is_none());
    }

    #[test]
    fn invalid_configs_name_the_field() {
        let err = SeoConfig { sigma: 0.0, ..SeoConfig::default() }.validate().unwrap_err();
        assert!(matches!(err, Error::ConfigField { ref field, .. } if field == "seo.sigma"));
        assert!(SeoConfig { population: 1, ..SeoConfig::default() }.validate().is_err());
        assert!(SeoConfig { eval_rays: vec![0.05, 0.06], ..SeoConfig::default() }.validate().is_err());
    }
}
