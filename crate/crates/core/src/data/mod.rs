//! Desk-scale datasets with analytic oracles, plus CSV and IDX ingestion.

mod dataset;
mod fairness;
mod mnist;
mod problem;
mod shared_scalar;
mod tabular;

pub use dataset::{Dataset, Splits};
pub use fairness::{bayes_optimal_deo, gen_synthetic_fairness, FairnessSpec};
pub use mnist::{compose_multi_overlap, load_mnist_idx, parse_idx_images, parse_idx_labels, MnistSet, CANVAS_SIDE};
pub use problem::{Problem, ProblemKind};
pub use shared_scalar::{
    analytic_front, analytic_front_area, conflict_loss_oracle, gen_shared_scalar, sqrt_front_distance, SharedScalarSpec, Wave,
};
pub use tabular::{load_tabular_csv, ColumnRole, TabularSchema};
