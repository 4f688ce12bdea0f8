use crate::data::Dataset;
use crate::mathcore::{Matrix, PreferenceRay, Rng};
use crate::{Error, Result};

/// `amplitude * sin(pi * (frequency * x1) + phase)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Wave {
    pub amplitude: f64,
    pub frequency: f64,
    pub phase: f64,
}

impl Wave {
    pub fn eval(&self, x1: f64) -> f64 {
        self.amplitude * (std::f64::consts::PI * self.frequency * x1 + self.phase).sin()
    }
}

/// Two regression targets read from one shared scalar output, so every
/// network output trades one task against the other.
#[derive(Clone, Debug, PartialEq)]
pub struct SharedScalarSpec {
    pub input_dim: usize,
    pub samples: usize,
    pub f1: Wave,
    pub f2: Wave,
}

impl Default for SharedScalarSpec {
    fn default() -> Self {
        SharedScalarSpec {
            input_dim: 2,
            samples: 4096,
            f1: Wave { amplitude: 1.0, frequency: 1.0, phase: 0.0 },
            f2: Wave { amplitude: -1.0, frequency: 1.0, phase: 0.0 },
        }
    }
}

/// `x ~ U[-1, 1]^d`, task `i` target `f_i(x)`.
pub fn gen_shared_scalar(spec: &SharedScalarSpec, seed: u64) -> Result<Dataset> {
    if spec.input_dim == 0 || spec.samples == 0 {
        return Err(Error::invalid("shared-scalar task needs positive input_dim and samples"));
    }
    let mut rng = Rng::new(seed).fork("shared_scalar");
    let n = spec.samples;
    let mut x = Matrix::zeros(n, spec.input_dim);
    for v in x.as_mut_slice() {
        *v = rng.uniform(-1.0, 1.0);
    }
    let t1: Vec<f64> = (0..n).map(|i| spec.f1.eval(x.get(i, 0))).collect();
    let t2: Vec<f64> = (0..n).map(|i| spec.f2.eval(x.get(i, 0))).collect();
    let data = Dataset::new(x, [t1, t2], None)?;
    if data.target_gap() < 1e-12 {
        return Err(Error::invalid("shared-scalar targets coincide: there is no trade-off to learn"));
    }
    Ok(data)
}

fn check_delta2(delta2: f64) -> Result<()> {
    if !(delta2.is_finite() && delta2 > 0.0) {
        return Err(Error::invalid(format!("target gap must be positive, got {delta2}")));
    }
    Ok(())
}

/// Losses of the scalarization-optimal shared output `r1 f1 + r2 f2`:
/// `(r2^2 delta2, r1^2 delta2)`.
pub fn analytic_front(delta2: f64, ray: PreferenceRay) -> Result<[f64; 2]> {
    check_delta2(delta2)?;
    Ok([ray.r2().powi(2) * delta2, ray.r1().powi(2) * delta2])
}

/// Scalarized loss at `query` of the optimum obtained when training draws
/// `ray_a` with probability `p` and `ray_b` otherwise.
pub fn conflict_loss_oracle(
    delta2: f64,
    p: f64,
    ray_a: PreferenceRay,
    ray_b: PreferenceRay,
    query: PreferenceRay,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("mixture probability {p} outside [0, 1]")));
    }
    let r1 = p * ray_a.r1() + (1.0 - p) * ray_b.r1();
    let effective = PreferenceRay::from_first(r1)?;
    let [l1, l2] = analytic_front(delta2, effective)?;
    Ok(query.r1() * l1 + query.r2() * l2)
}

/// Euclidean distance from `(sqrt L1, sqrt L2)` to the segment joining
/// `(0, sqrt delta2)` and `(sqrt delta2, 0)`, the analytic front in root
/// coordinates.
pub fn sqrt_front_distance(delta2: f64, losses: [f64; 2]) -> Result<f64> {
    check_delta2(delta2)?;
    let root = delta2.sqrt();
    let (u, v) = (losses[0].max(0.0).sqrt(), losses[1].max(0.0).sqrt());
    // Project onto the line u + v = root, then clamp to the segment.
    let t = ((u - v + root) / (2.0 * root)).clamp(0.0, 1.0);
    let (pu, pv) = (t * root, (1.0 - t) * root);
    Ok((u - pu).hypot(v - pv))
}

/// Area dominated by the continuous front `sqrt(L1) + sqrt(L2) = sqrt(delta2)`
/// inside the box below `reference`, by composite Simpson quadrature.
pub fn analytic_front_area(delta2: f64, reference: [f64; 2], intervals: usize) -> Result<f64> {
    check_delta2(delta2)?;
    let intervals = intervals.max(2) & !1;
    let root = delta2.sqrt();
    // Height of the dominated region above L1 = u.
    let height = |u: f64| {
        let front = (root - u.sqrt()).max(0.0).powi(2);
        (reference[1] - front).clamp(0.0, reference[1])
    };
    let upper = reference[0].min(delta2);
    let h = upper / intervals as f64;
    let mut sum = height(0.0) + height(upper);
    for k in 1..intervals {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * height(k as f64 * h);
    }
    // Beyond L1 = delta2 the front sits on L2 = 0.
    let tail = (reference[0] - upper).max(0.0) * reference[1];
    Ok(sum * h / 3.0 + tail)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ray(r1: f64) -> PreferenceRay {
        PreferenceRay::from_first(r1).unwrap()
    }

    #[test]
    fn root_distance() {
        for r1 in [0.0, 0.3, 1.0] {
            let l = analytic_front(2.0, ray(r1)).unwrap();
            assert!(sqrt_front_distance(2.0, l).unwrap() < 1e-12);
        }
        // (1, 1) in root space is (2 - sqrt 2) / sqrt 2 from the line u + v = sqrt 2.
        let d = sqrt_front_distance(2.0, [1.0, 1.0]).unwrap();
        assert!((d - (2.0 - 2f64.sqrt()) / 2f64.sqrt()).abs() < 1e-12);
        // Beyond the end of the segment the distance is to the endpoint.
        let d = sqrt_front_distance(1.0, [4.0, 0.0]).unwrap();
        assert!((d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn default_gap_is_two() {
        // E[4 sin^2(pi x)] over U[-1, 1] is 2.
        let d = gen_shared_scalar(&SharedScalarSpec::default(), 0).unwrap();
        assert_eq!(d.len(), 4096);
        assert!((d.target_gap() - 2.0).abs() < 0.1, "{}", d.target_gap());
    }

    #[test]
    fn identical_targets_rejected() {
        let spec = SharedScalarSpec { f2: SharedScalarSpec::default().f1, ..Default::default() };
        assert!(matches!(gen_shared_scalar(&spec, 0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn generator_is_seeded() {
        let s = SharedScalarSpec::default();
        assert_eq!(gen_shared_scalar(&s, 5).unwrap(), gen_shared_scalar(&s, 5).unwrap());
        assert_ne!(gen_shared_scalar(&s, 5).unwrap(), gen_shared_scalar(&s, 6).unwrap());
    }

    #[test]
    fn analytic_front_fixtures() {
        assert_eq!(analytic_front(1.0, ray(0.5)).unwrap(), [0.25, 0.25]);
        assert_eq!(analytic_front(1.0, ray(1.0)).unwrap(), [0.0, 1.0]);
        let [a, b] = analytic_front(2.0, ray(0.3)).unwrap();
        assert!((a - 0.98).abs() < 1e-12 && (b - 0.18).abs() < 1e-12);
        assert!(analytic_front(0.0, ray(0.3)).is_err());
    }

    #[test]
    fn analytic_front_lies_on_root_line() {
        for k in 0..=20 {
            let [a, b] = analytic_front(2.0, ray(k as f64 / 20.0)).unwrap();
            assert!((a.sqrt() + b.sqrt() - 2f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn conflict_oracle_fixtures() {
        let (ra, rb) = (ray(0.2), ray(0.8));
        let full = conflict_loss_oracle(1.0, 1.0, ra, rb, ra).unwrap();
        assert!((full - 0.16).abs() < 1e-12);
        let half = conflict_loss_oracle(1.0, 0.5, ra, rb, ra).unwrap();
        assert!((half - 0.25).abs() < 1e-12);
        let mut prev = full;
        for p in [0.9, 0.8, 0.7, 0.6, 0.5] {
            let v = conflict_loss_oracle(1.0, p, ra, rb, ra).unwrap();
            assert!(v > prev);
            prev = v;
        }
        // At p = 1 the oracle is the analytic front's scalarization at r_a.
        let [l1, l2] = analytic_front(2.0, ra).unwrap();
        let oracle = conflict_loss_oracle(2.0, 1.0, ra, rb, ra).unwrap();
        assert!((oracle - (0.2 * l1 + 0.8 * l2)).abs() < 1e-12);
    }

    #[test]
    fn continuous_front_area() {
        // 4 - 1/6 for delta2 = 1, 4 - 2/3 for delta2 = 2.
        let a = analytic_front_area(1.0, [2.0, 2.0], 200_000).unwrap();
        assert!((a - (4.0 - 1.0 / 6.0)).abs() < 1e-6, "{a}");
        let b = analytic_front_area(2.0, [2.0, 2.0], 200_000).unwrap();
        assert!((b - (4.0 - 2.0 / 3.0)).abs() < 1e-6, "{b}");
    }
}
