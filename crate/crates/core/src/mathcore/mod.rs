//! Sampling, the sparse-sampling quantizer, and small vector statistics.

mod divergence;
mod matrix;
mod quant;
mod rng;
mod simplex;
pub mod stats;

pub use divergence::{cosine_similarity, js_divergence};
pub use matrix::Matrix;
pub use quant::{quantize, quantize_ray, QuantSpec};
pub use rng::Rng;
pub use simplex::{dirichlet_sample, PreferenceRay};
