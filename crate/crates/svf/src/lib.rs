//! Reconstruction of set-valued functions whose values are finite unions of
//! compact intervals, from samples on a partition of the domain.
//!
//! The pipeline is:
//! 1. [`sets`] — interval unions, the Hausdorff metric, metric pairs/chains;
//! 2. [`model`] — analytic ground-truth models and sampling;
//! 3. [`chains`] — significant metric chains over augmented samples;
//! 4. [`kernels`] — scalar interpolation building blocks;
//! 5. [`reconstruct`] — the three reconstruction methods;
//! 6. [`bench`] — convergence measurement and rate estimation.

pub mod bench;
pub mod chains;
pub mod kernels;
pub mod model;
pub mod reconstruct;
pub mod sets;

pub use model::{builtin, chebyshev_partition, uniform_partition, BuiltinModel, SampleSet, SvfModel};
pub use reconstruct::{reconstruct_c4, reconstruct_holder, reconstruct_metric_poly, Approximant};
pub use sets::{hausdorff, CompactSet, Interval};
