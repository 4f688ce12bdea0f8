use super::spec::{DenseSlot, Layout, NetSpec};
use crate::mathcore::{PreferenceRay, Rng};
use crate::{Error, Result};

/// Condition fed to the network: `[r1, r2, alpha, lambda]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionVector(Vec<f64>);

impl ConditionVector {
    pub fn new(ray: PreferenceRay, alpha: f64, lambda: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::invalid(format!("conditioned alpha must be positive, got {alpha}")));
        }
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::invalid(format!("conditioned lambda must be non-negative, got {lambda}")));
        }
        Ok(ConditionVector(vec![ray.r1(), ray.r2(), alpha, lambda]))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Flat parameter vector plus the spec that gives it shape.
#[derive(Clone, Debug)]
pub struct NetParams {
    spec: NetSpec,
    pub(crate) layout: Layout,
    values: Vec<f64>,
}

impl PartialEq for NetParams {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec && self.values == other.values
    }
}

fn fill_uniform(values: &mut [f64], bound: f64, rng: &mut Rng) {
    for v in values {
        *v = rng.uniform(-bound, bound);
    }
}

impl NetParams {
    pub fn zeros(spec: &NetSpec) -> Result<Self> {
        spec.validate()?;
        let layout = Layout::new(spec);
        let values = vec![0.0; layout.total];
        Ok(NetParams { spec: spec.clone(), layout, values })
    }

    /// Fan-in scaled uniform initialisation; conditioning modules start as
    /// the identity transform (second layer zero, scale bias 1, shift bias 0).
    pub fn init(spec: &NetSpec, rng: &mut Rng) -> Result<Self> {
        let mut p = Self::zeros(spec)?;
        let layout = p.layout.clone();
        for (slot, cond) in layout.hidden.iter().zip(&layout.cond) {
            let bound = (6.0 / slot.fan_in as f64).sqrt();
            fill_uniform(p.weight_mut(slot), bound, rng);
            if let Some(c) = cond {
                let bound = (6.0 / c.first.fan_in as f64).sqrt();
                fill_uniform(p.weight_mut(&c.first), bound, rng);
                let width = c.first.fan_out;
                p.bias_mut(&c.second)[..width].fill(1.0);
            }
        }
        for slot in &layout.heads {
            let bound = 1.0 / (slot.fan_in as f64).sqrt();
            fill_uniform(p.weight_mut(slot), bound, rng);
        }
        Ok(p)
    }

    pub fn from_values(spec: &NetSpec, values: Vec<f64>) -> Result<Self> {
        let mut p = Self::zeros(spec)?;
        if values.len() != p.values.len() {
            return Err(Error::structural(format!(
                "{} values for a network with {} parameters",
                values.len(),
                p.values.len()
            )));
        }
        p.values = values;
        Ok(p)
    }

    pub fn spec(&self) -> &NetSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Each parameter array in declaration order.
    pub fn arrays(&self) -> impl Iterator<Item = &[f64]> {
        self.layout.arrays.iter().map(move |&(o, n)| &self.values[o..o + n])
    }

    pub(crate) fn weight(&self, slot: &DenseSlot) -> &[f64] {
        &self.values[slot.weight..slot.weight + slot.weight_len()]
    }

    pub(crate) fn bias(&self, slot: &DenseSlot) -> &[f64] {
        &self.values[slot.bias..slot.bias + slot.fan_out]
    }

    pub(crate) fn weight_mut(&mut self, slot: &DenseSlot) -> &mut [f64] {
        &mut self.values[slot.weight..slot.weight + slot.weight_len()]
    }

    pub(crate) fn bias_mut(&mut self, slot: &DenseSlot) -> &mut [f64] {
        &mut self.values[slot.bias..slot.bias + slot.fan_out]
    }

    /// Zero every conditioning-module weight and reset the biases to the
    /// identity transform.
    pub fn reset_conditioning_to_identity(&mut self) {
        let layout = self.layout.clone();
        for c in layout.cond.iter().flatten() {
            self.weight_mut(&c.first).fill(0.0);
            self.bias_mut(&c.first).fill(0.0);
            self.weight_mut(&c.second).fill(0.0);
            let width = c.first.fan_out;
            let bias = self.bias_mut(&c.second);
            bias[..width].fill(1.0);
            bias[width..].fill(0.0);
        }
    }

    /// Index ranges of conditioning-module parameters.
    pub fn conditioning_ranges(&self) -> Vec<std::ops::Range<usize>> {
        self.layout
            .cond
            .iter()
            .flatten()
            .flat_map(|c| {
                [
                    c.first.weight..c.first.bias + c.first.fan_out,
                    c.second.weight..c.second.bias + c.second.fan_out,
                ]
            })
            .collect()
    }
}

/// Gradient with the same layout as [`NetParams`].
#[derive(Clone, Debug, PartialEq)]
pub struct Gradients(pub(crate) Vec<f64>);

impl Gradients {
    pub fn zeros_like(params: &NetParams) -> Self {
        Gradients(vec![0.0; params.len()])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|g| g.is_finite())
    }

    pub fn scale(&mut self, factor: f64) {
        self.0.iter_mut().for_each(|g| *g *= factor);
    }

    pub fn add_assign(&mut self, other: &Gradients) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
    }
}
