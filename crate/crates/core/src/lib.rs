//! Pareto front learning with a single preference-conditioned network.
//!
//! A feed-forward network receives the condition vector `C = [r, alpha, lambda]`
//! through affine (FiLM-style) conditioning modules. Training samples preference
//! rays from a symmetric Dirichlet, quantizes rays and hyper-parameter offsets to
//! a sparse grid, and minimises linear scalarization minus a cosine alignment
//! term. Between epochs an evolution strategy ascends the hypervolume of the
//! validation front with respect to `[alpha, lambda]`.
//!
//! Module map:
//!
//! - [`mathcore`]: deterministic RNG, Dirichlet sampling, quantizer, divergences.
//! - [`net`]: conditioned MLP with exact reverse-mode gradients, Adam, checkpoints.
//! - [`objectives`]: task losses, scalarization, cosine regularizer, training loss.
//! - [`pareto`]: dominance, non-dominated filter, exact 2-D hypervolume, front sweep.
//! - [`seo`]: training epochs, the ES update, and the full alternating run.
//! - [`data`]: synthetic tasks with analytic oracles, CSV and IDX loaders.
//! - [`harness`]: config files, run directories, diagnostics, SVG plots.

pub mod data;
pub mod error;
pub mod harness;
pub mod mathcore;
pub mod net;
pub mod objectives;
pub mod pareto;
pub mod seo;

pub use error::{Error, Result};
