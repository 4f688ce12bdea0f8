//! Conditioned feed-forward network.
//!
//! Dense ReLU layers form the trunk; after each layer listed in
//! `cond_sites` a conditioning module maps the condition vector `C` through
//! two dense layers to a per-feature `(scale, shift)` pair and replaces the
//! activated feature `a` with `scale * a + shift`. Linear heads read the last
//! trunk feature.
//!
//! All parameters live in one flat `Vec<f64>` whose layout follows
//! declaration order, which is also the checkpoint order.

mod adam;
mod checkpoint;
mod forward;
mod params;
mod spec;

pub use adam::{adam_step, AdamConfig, AdamState};
pub use checkpoint::{checkpoint_load, checkpoint_save, read_checkpoint, write_checkpoint, CHECKPOINT_VERSION};
pub use forward::ForwardCache;
pub use params::{ConditionVector, Gradients, NetParams};
pub use spec::NetSpec;
