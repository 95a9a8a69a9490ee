//! Optimizers: CMA-ES for the gradient-free QCBM, ADAM for the QGAN, and
//! Nelder–Mead for curve fitting.

mod adam;
mod cmaes;
mod nelder_mead;

pub use adam::{Adam, AdamSettings};
pub use cmaes::{cma_es_minimize, CmaEs, CmaEsResult};
pub use nelder_mead::{nelder_mead, NelderMeadResult, NelderMeadSettings};
