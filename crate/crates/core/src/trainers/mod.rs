//! Training routines: gradient-free QCBM (CMA-ES on a shot-estimated KL
//! objective) and QGAN (parameter-shift generator against an MLP
//! discriminator), plus inference from stored parameters.
//!
//! Both trainers count circuit executions exactly. A QCBM epoch is one CMA-ES
//! generation and costs `λ · n_shots`; a QGAN epoch costs
//! `(2 · n_params + 1) · batch_size`.

mod device;
mod gradient;
mod mlp;
mod qcbm;
mod qgan;
mod trace;

pub use device::{run_inference, Backend, Device};
pub use gradient::{for_each_shifted_pmf, pmf_param_shift_grad};
pub use mlp::MlpDiscriminator;
pub use qcbm::{train_qcbm, QcbmConfig};
pub use qgan::{
    generator_gradient_estimate, qgan_executions_per_epoch, train_qgan, GeneratorLoss, QganConfig,
};
pub use trace::{Clock, NoClock, TraceRow, TrainingRun, TrainingTrace};

use alloc::vec::Vec;
use rand::Rng;

/// Circuit parameters start uniform in [-0.1, 0.1].
pub(crate) fn initial_params<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-0.1..=0.1)).collect()
}
