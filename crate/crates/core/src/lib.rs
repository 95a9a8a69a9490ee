//! Core numerics for benchmarking quantum generative models.
//!
//! Everything in this crate is pure computation over owned buffers: dense
//! statevector, density-matrix and trajectory simulators, the copula ansatz,
//! noise channels, target-distribution construction, CMA-ES, a small MLP
//! discriminator, parameter-shift gradients, the QCBM/QGAN training loops, and
//! convergence-curve fitting. It builds without `std`; file formats, the
//! experiment harness and the CLI live in the `genbench` crate.
//!
//! Bit convention: qubit 0 is the least-significant bit of every basis index
//! and PMF index.

#![cfg_attr(not(any(feature = "std", test)), no_std)]
// `!(x > 0.0)` deliberately rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod analysis;
pub mod ansatz;
pub mod data;
mod error;
pub mod linalg;
pub mod noise;
pub mod optim;
pub mod rng;
pub mod sim;
pub mod trainers;

pub use error::{Error, Result};

/// Complex amplitude type used by every simulator.
pub type C64 = num_complex::Complex64;
