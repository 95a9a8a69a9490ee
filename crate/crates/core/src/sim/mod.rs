//! Dense circuit simulation: exact statevector, exact density matrix with
//! noise channels, and Monte-Carlo Kraus trajectories.

mod circuit;
mod density;
mod gate;
pub(crate) mod kernel;
mod pmf;
mod statevector;
mod trajectory;

pub use circuit::Circuit;
pub use density::{dm_simulate, dm_simulate_with_override, DensityMatrix, MAX_DENSITY_QUBITS};
pub use gate::{GateKind, GateOp};
pub use pmf::{Pmf, ShotHistogram};
pub use statevector::{simulate, simulate_with_override, StateVector, MAX_STATEVECTOR_QUBITS};
pub use trajectory::{sample_trajectories, trajectory_shot};
