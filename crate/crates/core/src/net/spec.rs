use crate::{Error, Result};

/// Shape of a conditioned network.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetSpec {
    pub input_dim: usize,
    pub hidden_dims: Vec<usize>,
    /// Output width of each head; heads are concatenated in the output.
    pub head_dims: Vec<usize>,
    /// Length of the condition vector.
    pub cond_dim: usize,
    /// Hidden-layer indices followed by a conditioning module.
    pub cond_sites: Vec<usize>,
}

impl NetSpec {
    /// Two hidden layers (60, 25) with a conditioning module after each and
    /// a single output head.
    pub fn with_input(input_dim: usize) -> Self {
        NetSpec {
            input_dim,
            hidden_dims: vec![60, 25],
            head_dims: vec![1],
            cond_dim: 4,
            cond_sites: vec![0, 1],
        }
    }

    /// The same trunk and heads with every conditioning module removed.
    pub fn unconditioned(&self) -> Self {
        NetSpec { cond_sites: Vec::new(), ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::structural(msg));
        if self.input_dim == 0 {
            return bad("input_dim must be positive".into());
        }
        if self.hidden_dims.contains(&0) {
            return bad(format!("hidden dims {:?} must be positive", self.hidden_dims));
        }
        if self.head_dims.is_empty() || self.head_dims.contains(&0) {
            return bad(format!("head dims {:?} must be non-empty and positive", self.head_dims));
        }
        if !self.cond_sites.is_empty() && self.cond_dim == 0 {
            return bad("conditioning sites need a positive cond_dim".into());
        }
        if self.cond_sites.windows(2).any(|w| w[0] >= w[1]) {
            return bad(format!("cond_sites {:?} must be strictly increasing", self.cond_sites));
        }
        if let Some(&site) = self.cond_sites.iter().find(|&&s| s >= self.hidden_dims.len()) {
            return bad(format!(
                "cond site {site} does not name one of the {} hidden layers",
                self.hidden_dims.len()
            ));
        }
        Ok(())
    }

    pub fn output_dim(&self) -> usize {
        self.head_dims.iter().sum()
    }

    /// Width of the feature the heads read.
    pub fn feature_dim(&self) -> usize {
        self.hidden_dims.last().copied().unwrap_or(self.input_dim)
    }

    pub fn is_conditioned(&self) -> bool {
        !self.cond_sites.is_empty()
    }

    /// Parameters of the trunk and heads.
    pub fn trunk_param_count(&self) -> usize {
        let mut fan_in = self.input_dim;
        let mut n = 0;
        for &w in &self.hidden_dims {
            n += w * fan_in + w;
            fan_in = w;
        }
        n + self.head_dims.iter().map(|&h| h * fan_in + h).sum::<usize>()
    }

    /// Parameters of all conditioning modules.
    pub fn cond_param_count(&self) -> usize {
        self.cond_sites
            .iter()
            .map(|&s| {
                let w = self.hidden_dims[s];
                (w * self.cond_dim + w) + (2 * w * w + 2 * w)
            })
            .sum()
    }

    pub fn param_count(&self) -> usize {
        self.trunk_param_count() + self.cond_param_count()
    }
}

/// Offsets of one dense layer inside the flat parameter vector.
#[derive(Clone, Copy, Debug)]
pub(crate) struct DenseSlot {
    pub weight: usize,
    pub bias: usize,
    pub fan_in: usize,
    pub fan_out: usize,
}

impl DenseSlot {
    fn alloc(cursor: &mut usize, arrays: &mut Vec<(usize, usize)>, fan_in: usize, fan_out: usize) -> Self {
        let weight = *cursor;
        arrays.push((weight, fan_in * fan_out));
        *cursor += fan_in * fan_out;
        let bias = *cursor;
        arrays.push((bias, fan_out));
        *cursor += fan_out;
        DenseSlot { weight, bias, fan_in, fan_out }
    }

    pub fn weight_len(&self) -> usize {
        self.fan_in * self.fan_out
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct CondSlot {
    pub first: DenseSlot,
    pub second: DenseSlot,
}

#[derive(Clone, Debug)]
pub(crate) struct Layout {
    pub hidden: Vec<DenseSlot>,
    /// Conditioning module following each hidden layer, if any.
    pub cond: Vec<Option<CondSlot>>,
    pub heads: Vec<DenseSlot>,
    /// `(offset, len)` of every array in declaration order.
    pub arrays: Vec<(usize, usize)>,
    pub total: usize,
}

impl Layout {
    pub fn new(spec: &NetSpec) -> Self {
        let mut cursor = 0;
        let mut arrays = Vec::new();
        let mut hidden = Vec::new();
        let mut cond = Vec::new();
        let mut fan_in = spec.input_dim;
        for (i, &w) in spec.hidden_dims.iter().enumerate() {
            hidden.push(DenseSlot::alloc(&mut cursor, &mut arrays, fan_in, w));
            if spec.cond_sites.contains(&i) {
                let first = DenseSlot::alloc(&mut cursor, &mut arrays, spec.cond_dim, w);
                let second = DenseSlot::alloc(&mut cursor, &mut arrays, w, 2 * w);
                cond.push(Some(CondSlot { first, second }));
            } else {
                cond.push(None);
            }
            fan_in = w;
        }
        let heads = spec
            .head_dims
            .iter()
            .map(|&h| DenseSlot::alloc(&mut cursor, &mut arrays, fan_in, h))
            .collect();
        Layout { hidden, cond, heads, arrays, total: cursor }
    }
}
