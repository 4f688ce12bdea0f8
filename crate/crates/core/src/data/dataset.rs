use crate::mathcore::{Matrix, Rng};
use crate::{Error, Result};

/// Inputs with one target column per task.
///
/// For classification tasks the target is the binary label; the optional
/// sensitive attribute feeds the fairness objective.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub inputs: Matrix,
    pub targets: [Vec<f64>; 2],
    pub sensitive: Option<Vec<f64>>,
}

impl Dataset {
    pub fn new(inputs: Matrix, targets: [Vec<f64>; 2], sensitive: Option<Vec<f64>>) -> Result<Self> {
        let n = inputs.rows();
        if targets.iter().any(|t| t.len() != n) || sensitive.as_ref().is_some_and(|s| s.len() != n) {
            return Err(Error::structural(format!("dataset columns disagree with {n} input rows")));
        }
        Ok(Dataset { inputs, targets, sensitive })
    }

    pub fn len(&self) -> usize {
        self.inputs.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn input_dim(&self) -> usize {
        self.inputs.cols()
    }

    pub fn subset(&self, indices: &[usize]) -> Dataset {
        let pick = |v: &Vec<f64>| indices.iter().map(|&i| v[i]).collect::<Vec<_>>();
        Dataset {
            inputs: self.inputs.select_rows(indices),
            targets: [pick(&self.targets[0]), pick(&self.targets[1])],
            sensitive: self.sensitive.as_ref().map(pick),
        }
    }

    /// Mean squared gap between the two target columns.
    pub fn target_gap(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let sum: f64 = self.targets[0].iter().zip(&self.targets[1]).map(|(a, b)| (a - b).powi(2)).sum();
        sum / self.len() as f64
    }
}

/// Train / validation / test partition.
#[derive(Clone, Debug, PartialEq)]
pub struct Splits {
    pub train: Dataset,
    pub val: Dataset,
    pub test: Dataset,
}

impl Splits {
    pub const DEFAULT_FRACTIONS: [f64; 3] = [0.7, 0.1, 0.2];

    /// Shuffle with `rng` and cut by `fractions` (train, val, test).
    pub fn partition(data: &Dataset, fractions: [f64; 3], rng: &mut Rng) -> Result<Self> {
        if fractions.iter().any(|&f| !(0.0..=1.0).contains(&f)) || (fractions.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!("split fractions {fractions:?} must sum to 1")));
        }
        let mut order: Vec<usize> = (0..data.len()).collect();
        rng.shuffle(&mut order);
        let n = data.len() as f64;
        let n_train = (fractions[0] * n).round() as usize;
        let n_val = ((fractions[1] * n).round() as usize).min(data.len() - n_train);
        let split = Splits {
            train: data.subset(&order[..n_train]),
            val: data.subset(&order[n_train..n_train + n_val]),
            test: data.subset(&order[n_train + n_val..]),
        };
        if split.train.is_empty() || split.val.is_empty() || split.test.is_empty() {
            return Err(Error::invalid(format!("{} rows are too few to split 70/10/20", data.len())));
        }
        Ok(split)
    }
}
