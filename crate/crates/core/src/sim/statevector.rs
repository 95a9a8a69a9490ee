use alloc::vec;
use alloc::vec::Vec;

use super::kernel;
use super::{Circuit, GateOp, Pmf};
use crate::{Error, Result, C64};

/// Largest register the statevector backend accepts.
pub const MAX_STATEVECTOR_QUBITS: usize = 24;

/// Pure state of `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// |0…0⟩.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        if n_qubits > MAX_STATEVECTOR_QUBITS {
            return Err(Error::TooManyQubits {
                n_qubits,
                max: MAX_STATEVECTOR_QUBITS,
                backend: "statevector",
            });
        }
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = C64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// Wraps amplitudes, requiring length 2ⁿ and unit norm within 1e-10.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(Error::InvalidArgument(alloc::format!(
                "amplitude count {len} is not a power of two"
            )));
        }
        let n_qubits = len.trailing_zeros() as usize;
        let state = Self { n_qubits, amps };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies `gate`; `angle` must be given exactly when the gate is
    /// parameterized.
    pub fn apply_gate(&mut self, gate: &GateOp, angle: Option<f64>) -> Result<()> {
        gate.check_width(self.n_qubits)?;
        if gate.kind.is_parameterized() != angle.is_some() {
            return Err(Error::AngleMismatch {
                kind: gate.kind.name(),
                expected: gate.kind.is_parameterized(),
                got: angle.is_some(),
            });
        }
        self.apply_unchecked(gate, angle.unwrap_or(0.0));
        Ok(())
    }

    pub(crate) fn apply_unchecked(&mut self, gate: &GateOp, angle: f64) {
        kernel::apply_unitary(&mut self.amps, gate.kind, gate.qubit_pair(), angle, false);
    }

    /// Born-rule probabilities |αᵢ|².
    pub fn exact_pmf(&self) -> Pmf {
        Pmf::from_weights_unchecked(self.amps.iter().map(|a| a.norm_sqr()).collect())
    }
}

/// Runs `circuit` from |0…0⟩.
pub fn simulate(circuit: &Circuit, params: &[f64]) -> Result<StateVector> {
    circuit.check_params(params)?;
    let mut state = StateVector::zero(circuit.n_qubits())?;
    for gate in circuit.gates() {
        let angle = gate.param_slot.map_or(0.0, |s| params[s]);
        state.apply_unchecked(gate, angle);
    }
    Ok(state)
}

/// Runs `circuit` with `offset` added to the angle of the gate at
/// `gate_index` only. Used by the parameter-shift rule.
pub fn simulate_with_override(
    circuit: &Circuit,
    params: &[f64],
    gate_index: usize,
    offset: f64,
) -> Result<StateVector> {
    circuit.check_params(params)?;
    let mut state = StateVector::zero(circuit.n_qubits())?;
    for (i, gate) in circuit.gates().iter().enumerate() {
        let mut angle = gate.param_slot.map_or(0.0, |s| params[s]);
        if i == gate_index {
            angle += offset;
        }
        state.apply_unchecked(gate, angle);
    }
    Ok(state)
}
