//! Flat `key = value` run configuration.
//!
//! ```text
//! # shared-scalar run with a shorter schedule
//! task = shared_scalar
//! seed = 3
//! seo.epochs = 40
//! seo.eval_rays = 0.05, 0.25, 0.45, 0.65, 0.85
//! ```
//!
//! Lists are comma separated. Unknown keys, repeated keys, and malformed
//! values are errors. [`RunConfig::to_snapshot`] writes every key and
//! re-parses to an equal config.

use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::data::{FairnessSpec, SharedScalarSpec, Wave};
use crate::net::NetSpec;
use crate::seo::SeoConfig;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TaskId {
    SharedScalar,
    Fairness,
    Tabular,
}

impl fmt::Display for TaskId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TaskId::SharedScalar => "shared_scalar",
            TaskId::Fairness => "fairness",
            TaskId::Tabular => "tabular",
        })
    }
}

impl FromStr for TaskId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "shared_scalar" => Ok(TaskId::SharedScalar),
            "fairness" => Ok(TaskId::Fairness),
            "tabular" => Ok(TaskId::Tabular),
            other => Err(format!("unknown task `{other}` (expected shared_scalar, fairness or tabular)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConflictConfig {
    /// Probabilities of training on ray `a` in a batch.
    pub mixtures: Vec<f64>,
    pub ray_a: f64,
    pub ray_b: f64,
    pub epochs: usize,
    /// Independent networks averaged per mixture.
    pub seeds: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrelateConfig {
    pub k: usize,
    pub epochs: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub alphas: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub seeds: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub task: TaskId,
    pub seed: u64,
    pub out: PathBuf,
    pub hidden: Vec<usize>,
    pub cond_sites: Vec<usize>,
    pub seo: SeoConfig,
    pub shared_scalar: SharedScalarSpec,
    pub fairness: FairnessSpec,
    /// Overrides the generator's sample count when set.
    pub samples: Option<usize>,
    pub csv: Option<PathBuf>,
    pub schema: Option<PathBuf>,
    pub conflict: ConflictConfig,
    pub correlate: CorrelateConfig,
    pub sweep: SweepConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            task: TaskId::SharedScalar,
            seed: 0,
            out: PathBuf::from("runs/default"),
            hidden: vec![60, 25],
            cond_sites: vec![0, 1],
            seo: SeoConfig::default(),
            shared_scalar: SharedScalarSpec::default(),
            fairness: FairnessSpec::default(),
            samples: None,
            csv: None,
            schema: None,
            conflict: ConflictConfig { mixtures: vec![1.0, 0.8, 0.6, 0.5], ray_a: 0.2, ray_b: 0.8, epochs: 20, seeds: 3 },
            correlate: CorrelateConfig { k: 20, epochs: 20 },
            sweep: SweepConfig { alphas: vec![0.5, 1.0, 1.5], lambdas: vec![1.0, 3.0, 5.0], seeds: vec![0, 1, 2] },
        }
    }
}

/// Every accepted key, in snapshot order.
pub const KEYS: &[&str] = &[
    "task",
    "seed",
    "mode",
    "out",
    "net.hidden",
    "net.cond_sites",
    "seo.sigma",
    "seo.population",
    "seo.es_lr",
    "seo.alternation_period",
    "seo.start_coord",
    "seo.alpha0",
    "seo.lambda0",
    "seo.alpha_offset_range",
    "seo.alpha_offset_bin",
    "seo.lambda_offset_range",
    "seo.lambda_offset_bin",
    "seo.alpha_min",
    "seo.lambda_min",
    "seo.epochs",
    "seo.train_lr",
    "seo.batch_size",
    "seo.ray_grid",
    "seo.eval_rays",
    "seo.reference",
    "data.samples",
    "data.input_dim",
    "data.f1",
    "data.f2",
    "data.informative",
    "data.noise",
    "data.signal",
    "data.correlation",
    "data.csv",
    "data.schema",
    "conflict.mixtures",
    "conflict.ray_a",
    "conflict.ray_b",
    "conflict.epochs",
    "conflict.seeds",
    "correlate.k",
    "correlate.epochs",
    "sweep.alphas",
    "sweep.lambdas",
    "sweep.seeds",
];

fn suggestion(key: &str) -> Option<&'static str> {
    let key_leaf = key.rsplit('.').next().unwrap_or(key);
    KEYS.iter()
        .map(|&k| {
            let leaf = k.rsplit('.').next().unwrap_or(k);
            let d = strsim::damerau_levenshtein(key, k)
                .min(strsim::damerau_levenshtein(key, leaf))
                .min(strsim::damerau_levenshtein(key_leaf, leaf));
            (d, k)
        })
        .filter(|&(d, _)| d <= 2.max(key.len() / 3))
        .min_by_key(|&(d, _)| d)
        .map(|(_, k)| k)
}

fn scalar<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    value.parse().map_err(|e| Error::ConfigField { field: key.into(), message: format!("`{value}`: {e}") })
}

fn list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>>
where
    T::Err: fmt::Display,
{
    if value.is_empty() {
        return Ok(Vec::new());
    }
    value.split(',').map(|v| scalar(key, v.trim())).collect()
}

fn fixed<const N: usize>(key: &str, value: &str) -> Result<[f64; N]> {
    let items: Vec<f64> = list(key, value)?;
    items.try_into().map_err(|v: Vec<f64>| Error::ConfigField {
        field: key.into(),
        message: format!("expected {N} comma-separated numbers, got {}", v.len()),
    })
}

fn wave(key: &str, value: &str) -> Result<Wave> {
    let [amplitude, frequency, phase] = fixed::<3>(key, value)?;
    Ok(Wave { amplitude, frequency, phase })
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn path(base: &Path, value: &str) -> Option<PathBuf> {
    if value.is_empty() {
        return None;
    }
    let p = PathBuf::from(value);
    Some(if p.is_absolute() { p } else { base.join(p) })
}

impl RunConfig {
    fn set(&mut self, key: &str, value: &str, base: &Path) -> Result<()> {
        let s = &mut self.seo;
        match key {
            "task" => self.task = scalar(key, value)?,
            "seed" => self.seed = scalar(key, value)?,
            "mode" => s.mode = scalar(key, value)?,
            "out" => self.out = PathBuf::from(value),
            "net.hidden" => self.hidden = list(key, value)?,
            "net.cond_sites" => self.cond_sites = list(key, value)?,
            "seo.sigma" => s.sigma = scalar(key, value)?,
            "seo.population" => s.population = scalar(key, value)?,
            "seo.es_lr" => s.es_lr = scalar(key, value)?,
            "seo.alternation_period" => s.alternation_period = scalar(key, value)?,
            "seo.start_coord" => s.start_coord = scalar(key, value)?,
            "seo.alpha0" => s.alpha0 = scalar(key, value)?,
            "seo.lambda0" => s.lambda0 = scalar(key, value)?,
            "seo.alpha_offset_range" => s.alpha_offset_range = fixed::<2>(key, value)?.into(),
            "seo.alpha_offset_bin" => s.alpha_offset_bin = scalar(key, value)?,
            "seo.lambda_offset_range" => s.lambda_offset_range = fixed::<2>(key, value)?.into(),
            "seo.lambda_offset_bin" => s.lambda_offset_bin = scalar(key, value)?,
            "seo.alpha_min" => s.alpha_min = scalar(key, value)?,
            "seo.lambda_min" => s.lambda_min = scalar(key, value)?,
            "seo.epochs" => s.epochs = scalar(key, value)?,
            "seo.train_lr" => s.train_lr = scalar(key, value)?,
            "seo.batch_size" => s.batch_size = scalar(key, value)?,
            "seo.ray_grid" => s.ray_grid = scalar(key, value)?,
            "seo.eval_rays" => s.eval_rays = list(key, value)?,
            "seo.reference" => s.reference = fixed::<2>(key, value)?,
            "data.samples" => self.samples = if value.is_empty() { None } else { Some(scalar(key, value)?) },
            "data.input_dim" => self.shared_scalar.input_dim = scalar(key, value)?,
            "data.f1" => self.shared_scalar.f1 = wave(key, value)?,
            "data.f2" => self.shared_scalar.f2 = wave(key, value)?,
            "data.informative" => self.fairness.informative = scalar(key, value)?,
            "data.noise" => self.fairness.noise = scalar(key, value)?,
            "data.signal" => self.fairness.signal = scalar(key, value)?,
            "data.correlation" => self.fairness.correlation = scalar(key, value)?,
            "data.csv" => self.csv = path(base, value),
            "data.schema" => self.schema = path(base, value),
            "conflict.mixtures" => self.conflict.mixtures = list(key, value)?,
            "conflict.ray_a" => self.conflict.ray_a = scalar(key, value)?,
            "conflict.ray_b" => self.conflict.ray_b = scalar(key, value)?,
            "conflict.epochs" => self.conflict.epochs = scalar(key, value)?,
            "conflict.seeds" => self.conflict.seeds = scalar(key, value)?,
            "correlate.k" => self.correlate.k = scalar(key, value)?,
            "correlate.epochs" => self.correlate.epochs = scalar(key, value)?,
            "sweep.alphas" => self.sweep.alphas = list(key, value)?,
            "sweep.lambdas" => self.sweep.lambdas = list(key, value)?,
            "sweep.seeds" => self.sweep.seeds = list(key, value)?,
            _ => unreachable!("key list and setter disagree on `{key}`"),
        }
        Ok(())
    }

    /// Parse config text; relative data paths resolve against `base`.
    pub fn parse_str(text: &str, base: &Path) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut seen: Vec<&str> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::ConfigParse { line: line_no, message: format!("expected `key = value`, got `{line}`") });
            };
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                let hint = suggestion(key).map_or(String::new(), |k| format!("; did you mean `{k}`?"));
                return Err(Error::ConfigParse { line: line_no, message: format!("unknown key `{key}`{hint}") });
            }
            if seen.contains(&key) {
                return Err(Error::ConfigParse { line: line_no, message: format!("key `{key}` given twice") });
            }
            seen.push(key);
            cfg.set(key, value, base).map_err(|e| match e {
                Error::ConfigField { field, message } => {
                    Error::ConfigParse { line: line_no, message: format!("{field}: {message}") }
                }
                other => other,
            })?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let field = |name: &str, message: String| Err(Error::ConfigField { field: name.into(), message });
        self.seo.validate()?;
        if let Err(e) = self.net_spec(1).validate() {
            return field("net.hidden", e.to_string());
        }
        if self.task == TaskId::Tabular && (self.csv.is_none() || self.schema.is_none()) {
            return field("data.csv", "tabular tasks need data.csv and data.schema".into());
        }
        if self.samples.is_some_and(|n| n < 10) || self.shared_scalar.input_dim == 0 {
            return field("data.samples", "need at least 10 samples of at least one feature".into());
        }
        if !(0.0..1.0).contains(&self.fairness.correlation) {
            return field("data.correlation", format!("must lie in [0, 1), got {}", self.fairness.correlation));
        }
        if self.conflict.mixtures.is_empty() || self.conflict.mixtures.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return field("conflict.mixtures", "need probabilities in [0, 1]".into());
        }
        for (name, r) in [("conflict.ray_a", self.conflict.ray_a), ("conflict.ray_b", self.conflict.ray_b)] {
            if !(0.0..=1.0).contains(&r) {
                return field(name, format!("first ray component must lie in [0, 1], got {r}"));
            }
        }
        if self.conflict.seeds == 0 {
            return field("conflict.seeds", "must be at least 1".into());
        }
        if self.correlate.k < 2 {
            return field("correlate.k", "needs at least 2 models".into());
        }
        if self.sweep.alphas.iter().any(|&a| !(a > 0.0)) || self.sweep.lambdas.iter().any(|&l| !(l >= 0.0)) {
            return field("sweep.alphas", "alphas must be positive and lambdas non-negative".into());
        }
        Ok(())
    }

    pub fn net_spec(&self, input_dim: usize) -> NetSpec {
        NetSpec {
            input_dim,
            hidden_dims: self.hidden.clone(),
            head_dims: vec![1],
            cond_dim: 4,
            cond_sites: self.cond_sites.clone(),
        }
    }

    /// Every key with its current value; parses back to an equal config.
    pub fn to_snapshot(&self) -> String {
        let s = &self.seo;
        let ss = &self.shared_scalar;
        let wave = |w: &Wave| join(&[w.amplitude, w.frequency, w.phase]);
        let opt_path = |p: &Option<PathBuf>| p.as_ref().map_or(String::new(), |p| p.display().to_string());
        let values: Vec<String> = vec![
            self.task.to_string(),
            self.seed.to_string(),
            s.mode.to_string(),
            self.out.display().to_string(),
            join(&self.hidden),
            join(&self.cond_sites),
            s.sigma.to_string(),
            s.population.to_string(),
            s.es_lr.to_string(),
            s.alternation_period.to_string(),
            s.start_coord.to_string(),
            s.alpha0.to_string(),
            s.lambda0.to_string(),
            join(&[s.alpha_offset_range.0, s.alpha_offset_range.1]),
            s.alpha_offset_bin.to_string(),
            join(&[s.lambda_offset_range.0, s.lambda_offset_range.1]),
            s.lambda_offset_bin.to_string(),
            s.alpha_min.to_string(),
            s.lambda_min.to_string(),
            s.epochs.to_string(),
            s.train_lr.to_string(),
            s.batch_size.to_string(),
            s.ray_grid.to_string(),
            join(&s.eval_rays),
            join(&s.reference),
            self.samples.map_or(String::new(), |n| n.to_string()),
            ss.input_dim.to_string(),
            wave(&ss.f1),
            wave(&ss.f2),
            self.fairness.informative.to_string(),
            self.fairness.noise.to_string(),
            self.fairness.signal.to_string(),
            self.fairness.correlation.to_string(),
            opt_path(&self.csv),
            opt_path(&self.schema),
            join(&self.conflict.mixtures),
            self.conflict.ray_a.to_string(),
            self.conflict.ray_b.to_string(),
            self.conflict.epochs.to_string(),
            self.conflict.seeds.to_string(),
            self.correlate.k.to_string(),
            self.correlate.epochs.to_string(),
            join(&self.sweep.alphas),
            join(&self.sweep.lambdas),
            join(&self.sweep.seeds),
        ];
        debug_assert_eq!(values.len(), KEYS.len());
        let mut out = String::new();
        for (k, v) in KEYS.iter().zip(values) {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }
}

pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    RunConfig::parse_str(&text, path.parent().unwrap_or(Path::new(".")))
}
