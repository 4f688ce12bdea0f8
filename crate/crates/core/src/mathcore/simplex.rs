use super::Rng;
use crate::{Error, Result};

/// Tolerance on `r1 + r2 = 1`.
const SIMPLEX_TOL: f64 = 1e-12;

/// A point on the 2-simplex weighting the two task losses.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PreferenceRay([f64; 2]);

impl PreferenceRay {
    pub fn new(r1: f64, r2: f64) -> Result<Self> {
        let ok = r1.is_finite()
            && r2.is_finite()
            && (0.0..=1.0).contains(&r1)
            && (0.0..=1.0).contains(&r2)
            && (r1 + r2 - 1.0).abs() <= SIMPLEX_TOL;
        if !ok {
            return Err(Error::invalid(format!("({r1}, {r2}) is not on the 2-simplex")));
        }
        Ok(PreferenceRay([r1, r2]))
    }

    /// The ray `(r1, 1 - r1)`.
    pub fn from_first(r1: f64) -> Result<Self> {
        Self::new(r1, 1.0 - r1)
    }

    pub fn r1(&self) -> f64 {
        self.0[0]
    }

    pub fn r2(&self) -> f64 {
        self.0[1]
    }

    pub fn as_array(&self) -> [f64; 2] {
        self.0
    }
}

/// Draw from a symmetric Dirichlet on the 2-simplex: `r1 ~ Beta(alpha, alpha)`.
pub fn dirichlet_sample(alpha: f64, rng: &mut Rng) -> Result<PreferenceRay> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::invalid(format!("dirichlet concentration must be positive, got {alpha}")));
    }
    let r1 = rng.beta(alpha, alpha);
    Ok(PreferenceRay([r1, 1.0 - r1]))
}
