use std::path::Path;

use crate::data::{
    gen_shared_scalar, gen_synthetic_fairness, load_tabular_csv, FairnessSpec, SharedScalarSpec, Splits,
    TabularSchema,
};
use crate::mathcore::Rng;
use crate::Result;

/// Which pair of objectives the splits are meant for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProblemKind {
    /// Two MSE targets regressed through one shared scalar output.
    SharedScalar,
    /// Cross-entropy on the label against the tanh-relaxed opportunity gap.
    Fairness,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub kind: ProblemKind,
    pub splits: Splits,
}

impl Problem {
    pub fn shared_scalar(spec: &SharedScalarSpec, seed: u64) -> Result<Self> {
        let data = gen_shared_scalar(spec, seed)?;
        let splits = Splits::partition(&data, Splits::DEFAULT_FRACTIONS, &mut Rng::new(seed).fork("split"))?;
        Ok(Problem { kind: ProblemKind::SharedScalar, splits })
    }

    pub fn fairness(spec: &FairnessSpec, seed: u64) -> Result<Self> {
        let data = gen_synthetic_fairness(spec, seed)?;
        let splits = Splits::partition(&data, Splits::DEFAULT_FRACTIONS, &mut Rng::new(seed).fork("split"))?;
        Ok(Problem { kind: ProblemKind::Fairness, splits })
    }

    pub fn tabular(csv: &Path, schema: &TabularSchema, seed: u64) -> Result<Self> {
        Ok(Problem { kind: ProblemKind::Fairness, splits: load_tabular_csv(csv, schema, seed)? })
    }

    pub fn input_dim(&self) -> usize {
        self.splits.train.input_dim()
    }

    /// Every task reads the same single output unit.
    pub fn head_dims(&self) -> Vec<usize> {
        vec![1]
    }
}
