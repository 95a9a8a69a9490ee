//! Training data: continuous datasets, marginal transforms, discretization
//! into 2ⁿ-bin targets, and divergences.

mod dataset;
mod divergence;
mod target;
mod transform;

pub use dataset::{generate_x_dataset, ContinuousDataset};
pub use divergence::{kl_divergence, random_baseline, KL_FLOOR};
pub use target::{bin_center, discretize, generate_parity_dataset, TargetDistribution};
pub use transform::{minmax_transform, pit_transform, TransformKind};
