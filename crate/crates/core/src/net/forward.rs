use super::params::{ConditionVector, Gradients, NetParams};
use super::spec::DenseSlot;
use crate::mathcore::Matrix;
use crate::{Error, Result};

/// Activations recorded by [`NetParams::forward`] for the matching backward pass.
#[derive(Clone, Debug)]
pub struct ForwardCache {
    param_len: usize,
    input: Matrix,
    cond: Vec<f64>,
    layers: Vec<LayerCache>,
}

#[derive(Clone, Debug)]
struct LayerCache {
    /// Pre-activation `W x + b`.
    pre: Matrix,
    /// ReLU output.
    act: Matrix,
    film: Option<FilmCache>,
    /// Feature handed to the next layer.
    out: Matrix,
}

#[derive(Clone, Debug)]
struct FilmCache {
    hidden_pre: Vec<f64>,
    hidden: Vec<f64>,
    scale: Vec<f64>,
}

impl ForwardCache {
    pub fn batch_size(&self) -> usize {
        self.input.rows()
    }
}

/// `y = x W^T + b` for every row of `x`.
fn dense(params: &NetParams, slot: &DenseSlot, x: &Matrix) -> Matrix {
    let w = params.weight(slot);
    let b = params.bias(slot);
    let mut y = Matrix::zeros(x.rows(), slot.fan_out);
    for n in 0..x.rows() {
        let xr = x.row(n);
        let yr = y.row_mut(n);
        for (o, out) in yr.iter_mut().enumerate() {
            let wr = &w[o * slot.fan_in..(o + 1) * slot.fan_in];
            *out = b[o] + wr.iter().zip(xr).map(|(a, c)| a * c).sum::<f64>();
        }
    }
    y
}

/// Single-vector dense layer used by the conditioning modules.
fn dense_vec(params: &NetParams, slot: &DenseSlot, x: &[f64]) -> Vec<f64> {
    let w = params.weight(slot);
    let b = params.bias(slot);
    (0..slot.fan_out)
        .map(|o| {
            let wr = &w[o * slot.fan_in..(o + 1) * slot.fan_in];
            b[o] + wr.iter().zip(x).map(|(a, c)| a * c).sum::<f64>()
        })
        .collect()
}

/// Accumulate `dW`, `db` for `y = x W^T + b` and return `dx` when asked.
fn dense_backward(
    params: &NetParams,
    slot: &DenseSlot,
    x: &Matrix,
    dy: &Matrix,
    grads: &mut [f64],
    want_dx: bool,
) -> Option<Matrix> {
    let (fi, fo) = (slot.fan_in, slot.fan_out);
    for n in 0..x.rows() {
        let xr = x.row(n);
        let dyr = dy.row(n);
        for o in 0..fo {
            let g = dyr[o];
            if g == 0.0 {
                continue;
            }
            let dw = &mut grads[slot.weight + o * fi..slot.weight + (o + 1) * fi];
            for (d, &xv) in dw.iter_mut().zip(xr) {
                *d += g * xv;
            }
            grads[slot.bias + o] += g;
        }
    }
    if !want_dx {
        return None;
    }
    let w = params.weight(slot);
    let mut dx = Matrix::zeros(x.rows(), fi);
    for n in 0..x.rows() {
        let dyr = dy.row(n);
        let dxr = dx.row_mut(n);
        for o in 0..fo {
            let g = dyr[o];
            if g == 0.0 {
                continue;
            }
            for (d, &wv) in dxr.iter_mut().zip(&w[o * fi..(o + 1) * fi]) {
                *d += g * wv;
            }
        }
    }
    Some(dx)
}

fn relu(m: &Matrix) -> Matrix {
    let mut out = m.clone();
    out.as_mut_slice().iter_mut().for_each(|v| *v = v.max(0.0));
    out
}

impl NetParams {
    /// Evaluate a batch (one example per row) under a shared condition.
    ///
    /// Returns the concatenated head outputs and the cache for [`backward`].
    ///
    /// [`backward`]: NetParams::backward
    pub fn forward(&self, x: &Matrix, cond: &ConditionVector) -> Result<(Matrix, ForwardCache)> {
        let spec = self.spec();
        if x.cols() != spec.input_dim {
            return Err(Error::structural(format!(
                "input has {} columns, network expects {}",
                x.cols(),
                spec.input_dim
            )));
        }
        if spec.is_conditioned() && cond.len() != spec.cond_dim {
            return Err(Error::structural(format!(
                "condition has length {}, network expects {}",
                cond.len(),
                spec.cond_dim
            )));
        }
        let c = cond.as_slice();
        let mut layers = Vec::with_capacity(spec.hidden_dims.len());
        let mut feature = x.clone();
        for (slot, cslot) in self.layout.hidden.iter().zip(&self.layout.cond) {
            let pre = dense(self, slot, &feature);
            let act = relu(&pre);
            let (film, out) = match cslot {
                Some(cs) => {
                    let hidden_pre = dense_vec(self, &cs.first, c);
                    let hidden: Vec<f64> = hidden_pre.iter().map(|v| v.max(0.0)).collect();
                    let gs = dense_vec(self, &cs.second, &hidden);
                    let width = slot.fan_out;
                    let (scale, shift) = gs.split_at(width);
                    let mut out = act.clone();
                    for n in 0..out.rows() {
                        for (j, v) in out.row_mut(n).iter_mut().enumerate() {
                            *v = scale[j] * *v + shift[j];
                        }
                    }
                    let film = FilmCache { hidden_pre, hidden, scale: scale.to_vec() };
                    (Some(film), out)
                }
                None => (None, act.clone()),
            };
            feature = out.clone();
            layers.push(LayerCache { pre, act, film, out });
        }
        let mut output = Matrix::zeros(x.rows(), spec.output_dim());
        let mut col = 0;
        for slot in &self.layout.heads {
            let h = dense(self, slot, &feature);
            for n in 0..x.rows() {
                output.row_mut(n)[col..col + slot.fan_out].copy_from_slice(h.row(n));
            }
            col += slot.fan_out;
        }
        let cache = ForwardCache { param_len: self.len(), input: x.clone(), cond: c.to_vec(), layers };
        Ok((output, cache))
    }

    /// Forward pass without keeping the cache.
    pub fn predict(&self, x: &Matrix, cond: &ConditionVector) -> Result<Matrix> {
        Ok(self.forward(x, cond)?.0)
    }

    /// Exact reverse-mode gradient of `sum(grad_out * output)` with respect
    /// to every parameter.
    pub fn backward(&self, cache: &ForwardCache, grad_out: &Matrix) -> Result<Gradients> {
        let spec = self.spec();
        if cache.param_len != self.len() || cache.layers.len() != spec.hidden_dims.len() {
            return Err(Error::structural("forward cache belongs to a different network"));
        }
        if grad_out.rows() != cache.batch_size() || grad_out.cols() != spec.output_dim() {
            return Err(Error::structural(format!(
                "output gradient is {}x{}, expected {}x{}",
                grad_out.rows(),
                grad_out.cols(),
                cache.batch_size(),
                spec.output_dim()
            )));
        }
        let mut grads = vec![0.0; self.len()];
        let last = cache.layers.last().map_or(&cache.input, |l| &l.out);

        let mut d_feature = Matrix::zeros(last.rows(), last.cols());
        let mut col = 0;
        for slot in &self.layout.heads {
            let mut dy = Matrix::zeros(grad_out.rows(), slot.fan_out);
            for n in 0..grad_out.rows() {
                dy.row_mut(n).copy_from_slice(&grad_out.row(n)[col..col + slot.fan_out]);
            }
            col += slot.fan_out;
            let dx = dense_backward(self, slot, last, &dy, &mut grads, true).expect("dx requested");
            for (a, b) in d_feature.as_mut_slice().iter_mut().zip(dx.as_slice()) {
                *a += b;
            }
        }

        for i in (0..cache.layers.len()).rev() {
            let layer = &cache.layers[i];
            let slot = &self.layout.hidden[i];
            let mut d_act = d_feature;
            if let (Some(film), Some(cs)) = (&layer.film, &self.layout.cond[i]) {
                let width = slot.fan_out;
                let mut d_gs = vec![0.0; 2 * width];
                for n in 0..d_act.rows() {
                    let a = layer.act.row(n);
                    let da = d_act.row_mut(n);
                    for j in 0..width {
                        d_gs[j] += da[j] * a[j];
                        d_gs[width + j] += da[j];
                        da[j] *= film.scale[j];
                    }
                }
                let hidden = Matrix::from_vec(1, width, film.hidden.clone())?;
                let d_gs = Matrix::from_vec(1, 2 * width, d_gs)?;
                let d_hidden = dense_backward(self, &cs.second, &hidden, &d_gs, &mut grads, true)
                    .expect("dx requested");
                let mut d_hidden_pre = d_hidden;
                for (d, &p) in d_hidden_pre.as_mut_slice().iter_mut().zip(&film.hidden_pre) {
                    if p <= 0.0 {
                        *d = 0.0;
                    }
                }
                let cond = Matrix::from_vec(1, cache.cond.len(), cache.cond.clone())?;
                dense_backward(self, &cs.first, &cond, &d_hidden_pre, &mut grads, false);
            }
            let mut d_pre = d_act;
            for (d, &p) in d_pre.as_mut_slice().iter_mut().zip(layer.pre.as_slice()) {
                if p <= 0.0 {
                    *d = 0.0;
                }
            }
            let input = if i == 0 { &cache.input } else { &cache.layers[i - 1].out };
            let dx = dense_backward(self, slot, input, &d_pre, &mut grads, i > 0);
            d_feature = dx.unwrap_or_else(|| Matrix::zeros(0, 0));
        }
        Ok(Gradients(grads))
    }
}
