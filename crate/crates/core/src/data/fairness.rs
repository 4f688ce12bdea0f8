use crate::data::Dataset;
use crate::mathcore::{Matrix, Rng};
use crate::{Error, Result};

/// Tabular classification with a binary sensitive attribute.
///
/// `y ~ Bernoulli(1/2)`; the sensitive attribute agrees with the label with
/// probability `(1 + correlation) / 2`; informative features are
/// `y * mu + N(0, I)` with `|mu| = signal`; noise features are `N(0, 1)`.
/// The last column is the sensitive attribute itself.
#[derive(Clone, Debug, PartialEq)]
pub struct FairnessSpec {
    pub samples: usize,
    pub informative: usize,
    pub noise: usize,
    pub signal: f64,
    pub correlation: f64,
}

impl Default for FairnessSpec {
    fn default() -> Self {
        FairnessSpec { samples: 20_000, informative: 2, noise: 2, signal: 1.0, correlation: 0.5 }
    }
}

impl FairnessSpec {
    pub fn input_dim(&self) -> usize {
        self.informative + self.noise + 1
    }

    fn validate(&self) -> Result<()> {
        if self.samples == 0 || self.informative == 0 {
            return Err(Error::invalid("fairness task needs samples and informative features"));
        }
        if !(0.0..1.0).contains(&self.correlation) {
            return Err(Error::invalid(format!("correlation {} must lie in [0, 1)", self.correlation)));
        }
        if !(self.signal.is_finite() && self.signal > 0.0) {
            return Err(Error::invalid("signal must be positive"));
        }
        Ok(())
    }
}

pub fn gen_synthetic_fairness(spec: &FairnessSpec, seed: u64) -> Result<Dataset> {
    spec.validate()?;
    let mut rng = Rng::new(seed).fork("fairness");
    let d = spec.input_dim();
    let mu = spec.signal / (spec.informative as f64).sqrt();
    let agree = 0.5 * (1.0 + spec.correlation);
    let mut x = Matrix::zeros(spec.samples, d);
    let mut labels = Vec::with_capacity(spec.samples);
    let mut sensitive = Vec::with_capacity(spec.samples);
    for i in 0..spec.samples {
        let y = if rng.bernoulli(0.5) { 1.0 } else { 0.0 };
        let s = if rng.bernoulli(agree) { y } else { 1.0 - y };
        let row = x.row_mut(i);
        for v in &mut row[..spec.informative] {
            *v = y * mu + rng.normal();
        }
        for v in &mut row[spec.informative..d - 1] {
            *v = rng.normal();
        }
        row[d - 1] = 2.0 * s - 1.0;
        labels.push(y);
        sensitive.push(s);
    }
    Dataset::new(x, [labels.clone(), labels], Some(sensitive))
}

/// Expectation of `g(Z)`, `Z ~ N(mean, var)`, by Simpson's rule on +-12 sd.
fn gaussian_expectation(mean: f64, var: f64, g: impl Fn(f64) -> f64) -> f64 {
    let sd = var.sqrt();
    let steps = 4000;
    let h = 24.0 / steps as f64;
    let density = |z: f64| (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let f = |z: f64| density(z) * g(mean + sd * z);
    let mut sum = f(-12.0) + f(12.0);
    for k in 1..steps {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(-12.0 + k as f64 * h);
    }
    sum * h / 3.0
}

/// Tanh-relaxed equal-opportunity gap of the Bayes-optimal logit
/// `mu.x - |mu|^2/2 + (2s - 1) ln((1 + rho) / (1 - rho))`.
///
/// Among positives `mu.x ~ N(|mu|^2, |mu|^2)`, so each group's mean of
/// `tanh(logit)` is a one-dimensional Gaussian integral.
pub fn bayes_optimal_deo(spec: &FairnessSpec) -> Result<f64> {
    spec.validate()?;
    let m2 = spec.signal * spec.signal;
    let shift = ((1.0 + spec.correlation) / (1.0 - spec.correlation)).ln();
    let base = m2 / 2.0;
    let group1 = gaussian_expectation(base + shift, m2, f64::tanh);
    let group0 = gaussian_expectation(base - shift, m2, f64::tanh);
    Ok((group0 - group1).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_and_shaped() {
        let spec = FairnessSpec { samples: 500, ..Default::default() };
        let a = gen_synthetic_fairness(&spec, 3).unwrap();
        assert_eq!(a, gen_synthetic_fairness(&spec, 3).unwrap());
        assert_eq!(a.input_dim(), 5);
        assert!(a.targets[0].iter().all(|&y| y == 0.0 || y == 1.0));
    }

    #[test]
    fn correlation_is_realised() {
        let spec = FairnessSpec { samples: 50_000, correlation: 0.8, ..Default::default() };
        let d = gen_synthetic_fairness(&spec, 1).unwrap();
        let s = d.sensitive.as_ref().unwrap();
        let agree = d.targets[0].iter().zip(s).filter(|(y, s)| y == s).count() as f64 / d.len() as f64;
        assert!((agree - 0.9).abs() < 0.01, "{agree}");
    }

    #[test]
    fn bayes_deo() {
        let null = bayes_optimal_deo(&FairnessSpec { correlation: 0.0, ..Default::default() }).unwrap();
        assert!(null.abs() < 1e-12);
        let biased = bayes_optimal_deo(&FairnessSpec { correlation: 0.8, ..Default::default() }).unwrap();
        assert!(biased > 0.2, "{biased}");
    }

    #[test]
    fn gaussian_expectation_moments() {
        assert!((gaussian_expectation(0.3, 2.0, |z| z) - 0.3).abs() < 1e-10);
        assert!((gaussian_expectation(0.3, 2.0, |z| z * z) - 2.09).abs() < 1e-9);
    }
}
