//! Dominance, exact two-objective hypervolume, and front extraction.

use rayon::prelude::*;

use crate::data::Dataset;
use crate::mathcore::{PreferenceRay, Rng};
use crate::net::NetParams;
use crate::objectives::{task_losses, HyperParams, TaskPair};
use crate::{Error, Result};

pub const DEFAULT_REFERENCE: [f64; 2] = [2.0, 2.0];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrontPoint {
    pub losses: [f64; 2],
    pub ray: PreferenceRay,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParetoFront {
    pub points: Vec<FrontPoint>,
    pub reference: [f64; 2],
}

impl ParetoFront {
    pub fn new(points: Vec<FrontPoint>, reference: [f64; 2]) -> Result<Self> {
        if !reference.iter().all(|r| r.is_finite() && *r > 0.0) {
            return Err(Error::invalid(format!("reference point {reference:?} must be positive")));
        }
        if points.iter().any(|p| !p.losses.iter().all(|l| l.is_finite())) {
            return Err(Error::invalid("front points must be finite"));
        }
        Ok(ParetoFront { points, reference })
    }

    /// Front without ray labels; every point gets the balanced ray.
    pub fn from_losses(losses: &[[f64; 2]], reference: [f64; 2]) -> Result<Self> {
        let ray = PreferenceRay::from_first(0.5)?;
        Self::new(losses.iter().map(|&losses| FrontPoint { losses, ray }).collect(), reference)
    }

    pub fn losses(&self) -> Vec<[f64; 2]> {
        self.points.iter().map(|p| p.losses).collect()
    }
}

/// `a` is no worse than `b` anywhere and strictly better somewhere (minimisation).
pub fn dominates(a: &[f64; 2], b: &[f64; 2]) -> bool {
    a[0] <= b[0] && a[1] <= b[1] && (a[0] < b[0] || a[1] < b[1])
}

/// Non-dominated points, one per duplicate, ordered by the first coordinate.
pub fn non_dominated_filter(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut kept: Vec<[f64; 2]> = Vec::new();
    for p in sorted {
        if kept.last().is_none_or(|last| p[1] < last[1]) {
            kept.push(p);
        }
    }
    kept
}

/// Area dominated by the front and bounded by its reference point.
pub fn hypervolume_2d(front: &ParetoFront) -> f64 {
    let reference = front.reference;
    let inside: Vec<[f64; 2]> = front
        .points
        .iter()
        .map(|p| p.losses)
        .filter(|l| l[0] < reference[0] && l[1] < reference[1])
        .collect();
    let kept = non_dominated_filter(&inside);
    let mut area = 0.0;
    for (i, p) in kept.iter().enumerate() {
        let next_x = kept.get(i + 1).map_or(reference[0], |q| q[0]);
        area += (next_x - p[0]) * (reference[1] - p[1]);
    }
    area
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
}

/// Monte-Carlo hypervolume over the box `[0, ref1] x [0, ref2]`.
pub fn hypervolume_mc_oracle(front: &ParetoFront, samples: usize, rng: &mut Rng) -> Result<McEstimate> {
    if samples == 0 {
        return Err(Error::invalid("Monte-Carlo hypervolume needs at least one sample"));
    }
    let [rx, ry] = front.reference;
    let kept = non_dominated_filter(&front.losses());
    let mut hits = 0usize;
    for _ in 0..samples {
        let (u, v) = (rng.uniform(0.0, rx), rng.uniform(0.0, ry));
        // Among kept points with x <= u the last one has the smallest y.
        let upto = kept.partition_point(|p| p[0] <= u);
        if upto > 0 && kept[upto - 1][1] <= v {
            hits += 1;
        }
    }
    let box_area = rx * ry;
    let p = hits as f64 / samples as f64;
    Ok(McEstimate { value: p * box_area, std_error: box_area * (p * (1.0 - p) / samples as f64).sqrt() })
}

/// Mean task losses over `data` for each ray, conditioned on `[ray, phi]`.
pub fn sweep_front(
    params: &NetParams,
    tasks: &TaskPair,
    data: &Dataset,
    phi: HyperParams,
    rays: &[PreferenceRay],
    reference: [f64; 2],
) -> Result<ParetoFront> {
    if data.is_empty() {
        return Err(Error::invalid("cannot sweep a front over an empty dataset"));
    }
    for (i, a) in rays.iter().enumerate() {
        if rays[..i].contains(a) {
            return Err(Error::invalid(format!("ray ({}, {}) repeated in sweep", a.r1(), a.r2())));
        }
    }
    let points = rays
        .par_iter()
        .map(|&ray| {
            let outputs = params.predict(&data.inputs, &phi.condition(ray)?)?;
            let (losses, _) = task_losses(tasks, &outputs, data)?;
            Ok(FrontPoint { losses, ray })
        })
        .collect::<Result<Vec<_>>>()?;
    ParetoFront::new(points, reference)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::ProblemKind;
    use crate::mathcore::Matrix;
    use crate::net::NetSpec;
    use proptest::prelude::{prop_assert, prop_assert_eq, proptest};

    fn front(points: &[[f64; 2]]) -> ParetoFront {
        ParetoFront::from_losses(points, DEFAULT_REFERENCE).unwrap()
    }

    #[test]
    fn dominance_fixtures() {
        assert!(dominates(&[1.0, 1.0], &[2.0, 2.0]));
        assert!(!dominates(&[1.0, 2.0], &[2.0, 1.0]));
        assert!(!dominates(&[1.0, 1.0], &[1.0, 1.0]));
        assert!(dominates(&[1.0, 1.0], &[1.0, 1.5]));
    }

    #[test]
    fn filter_fixtures() {
        assert_eq!(non_dominated_filter(&[[1.0, 1.0], [1.2, 1.5]]), vec![[1.0, 1.0]]);
        assert_eq!(non_dominated_filter(&[[2.0, 1.0], [1.0, 2.0]]), vec![[1.0, 2.0], [2.0, 1.0]]);
        assert_eq!(non_dominated_filter(&[[1.0, 1.0], [1.0, 1.0]]), vec![[1.0, 1.0]]);
    }

    #[test]
    fn filter_matches_pairwise_oracle() {
        let mut rng = Rng::new(8);
        // Coarse values so ties and duplicates actually occur.
        let points: Vec<[f64; 2]> =
            (0..200).map(|_| [(rng.uniform(0.0, 20.0)).floor() / 10.0, (rng.uniform(0.0, 20.0)).floor() / 10.0]).collect();
        let mut oracle: Vec<[f64; 2]> = points
            .iter()
            .filter(|p| !points.iter().any(|q| dominates(q, p)))
            .copied()
            .collect();
        oracle.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        oracle.dedup();
        assert_eq!(non_dominated_filter(&points), oracle);
    }

    #[test]
    fn hypervolume_fixtures() {
        assert_eq!(hypervolume_2d(&front(&[[1.0, 1.0]])), 1.0);
        assert_eq!(hypervolume_2d(&front(&[[1.0, 1.5], [1.5, 1.0]])), 0.75);
        assert_eq!(hypervolume_2d(&front(&[[1.0, 1.0], [1.2, 1.5]])), 1.0);
        assert_eq!(hypervolume_2d(&front(&[])), 0.0);
        assert_eq!(hypervolume_2d(&front(&[[2.0, 0.5], [0.5, 3.0]])), 0.0);
    }

    #[test]
    fn oracle_fixtures() {
        let mc = hypervolume_mc_oracle(&front(&[[1.0, 1.0]]), 1_000_000, &mut Rng::new(1)).unwrap();
        assert!((mc.value - 1.0).abs() < 0.004, "{mc:?}");
        assert_eq!(hypervolume_mc_oracle(&front(&[]), 100, &mut Rng::new(1)).unwrap().value, 0.0);
        assert!(hypervolume_mc_oracle(&front(&[]), 0, &mut Rng::new(1)).is_err());
    }

    #[test]
    fn reference_must_be_positive() {
        assert!(ParetoFront::from_losses(&[[1.0, 1.0]], [0.0, 2.0]).is_err());
        assert!(ParetoFront::from_losses(&[[f64::NAN, 1.0]], [2.0, 2.0]).is_err());
    }

    proptest! {
        #[test]
        fn adding_points_never_shrinks(points in proptest::collection::vec((0.0f64..2.5, 0.0f64..2.5), 0..12), extra in (0.0f64..2.5, 0.0f64..2.5)) {
            let mut pts: Vec<[f64; 2]> = points.iter().map(|&(a, b)| [a, b]).collect();
            let before = hypervolume_2d(&front(&pts));
            prop_assert!((0.0..=4.0).contains(&before));
            pts.push([extra.0, extra.1]);
            let after = hypervolume_2d(&front(&pts));
            prop_assert!(after >= before - 1e-12);
        }

        #[test]
        fn dominated_points_add_nothing(points in proptest::collection::vec((0.0f64..2.0, 0.0f64..2.0), 1..10), shift in (0.0f64..1.0, 0.0f64..1.0)) {
            let mut pts: Vec<[f64; 2]> = points.iter().map(|&(a, b)| [a, b]).collect();
            let before = hypervolume_2d(&front(&pts));
            pts.push([pts[0][0] + shift.0, pts[0][1] + shift.1]);
            prop_assert_eq!(hypervolume_2d(&front(&pts)), before);
        }

        #[test]
        fn order_does_not_matter(points in proptest::collection::vec((0.0f64..2.5, 0.0f64..2.5), 0..12), seed in 0u64..1000) {
            let pts: Vec<[f64; 2]> = points.iter().map(|&(a, b)| [a, b]).collect();
            let mut shuffled = pts.clone();
            Rng::new(seed).shuffle(&mut shuffled);
            prop_assert_eq!(hypervolume_2d(&front(&pts)), hypervolume_2d(&front(&shuffled)));
        }
    }

    #[test]
    fn sweep_on_identity_conditioning_is_flat() {
        let mut rng = Rng::new(4);
        let spec = NetSpec::with_input(2);
        let params = NetParams::init(&spec, &mut rng).unwrap();
        let x = Matrix::from_vec(50, 2, (0..100).map(|_| rng.uniform(-1.0, 1.0)).collect()).unwrap();
        let t: Vec<f64> = (0..50).map(|i| x.get(i, 0).sin()).collect();
        let data = Dataset::new(x, [t.clone(), t.iter().map(|v| -v).collect()], None).unwrap();
        let rays: Vec<PreferenceRay> =
            [0.05, 0.25, 0.45, 0.65, 0.85].iter().map(|&r| PreferenceRay::from_first(r).unwrap()).collect();
        let tasks = TaskPair::for_problem(ProblemKind::SharedScalar);
        let phi = HyperParams::new(1.0, 0.0).unwrap();
        let f = sweep_front(&params, &tasks, &data, phi, &rays, DEFAULT_REFERENCE).unwrap();
        assert_eq!(f.points.len(), 5);
        assert!(f.points.iter().all(|p| p.losses == f.points[0].losses));
        assert!(sweep_front(&params, &tasks, &data, phi, &[rays[0], rays[0]], DEFAULT_REFERENCE).is_err());
    }
}
