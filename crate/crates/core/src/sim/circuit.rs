use alloc::vec::Vec;

use super::{GateKind, GateOp};
use crate::{Error, Result};

/// Ordered gate program over `n_qubits` with `n_params` trainable slots.
///
/// Slots are contiguous: a gate may reuse an existing slot or open slot
/// `n_params`, nothing else.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<GateOp>,
    n_params: usize,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
            n_params: 0,
        }
    }

    pub fn from_gates(n_qubits: usize, gates: impl IntoIterator<Item = GateOp>) -> Result<Self> {
        let mut circuit = Self::new(n_qubits);
        for g in gates {
            circuit.push(g)?;
        }
        Ok(circuit)
    }

    pub fn push(&mut self, gate: GateOp) -> Result<()> {
        gate.check_width(self.n_qubits)?;
        if let Some(slot) = gate.param_slot {
            if slot > self.n_params {
                return Err(Error::NonContiguousSlot {
                    slot,
                    n_params: self.n_params,
                });
            }
            if slot == self.n_params {
                self.n_params += 1;
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Appends a parameterized gate on a fresh slot and returns the slot.
    pub fn push_parameterized(&mut self, kind: GateKind, qubits: &[usize]) -> Result<usize> {
        let slot = self.n_params;
        self.push(GateOp::new(kind, qubits, Some(slot))?)?;
        Ok(slot)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn gates(&self) -> &[GateOp] {
        &self.gates
    }

    pub fn check_params(&self, params: &[f64]) -> Result<()> {
        if params.len() != self.n_params {
            return Err(Error::ParamLength {
                expected: self.n_params,
                got: params.len(),
            });
        }
        Ok(())
    }

    /// Indices of the gates reading parameter `slot`.
    pub fn gates_using(&self, slot: usize) -> impl Iterator<Item = usize> + '_ {
        self.gates
            .iter()
            .enumerate()
            .filter(move |(_, g)| g.param_slot == Some(slot))
            .map(|(i, _)| i)
    }
}
