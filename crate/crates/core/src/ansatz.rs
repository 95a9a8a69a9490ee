//! Copula circuit construction and gate-class accounting.
//!
//! Layout for `n` qubits split into two registers of `m = n/2`:
//!
//! 1. preamble: H on every register-0 qubit, then CX from qubit `i` to `m + i`;
//! 2. per layer: RZ·RX·RZ on every qubit, then RXX on every pair `i < j`
//!    inside register 0 followed by register 1.
//!
//! Every rotation angle is a fresh parameter slot in emission order.

use crate::sim::{Circuit, GateKind, GateOp};
use crate::{Error, Result};

/// Copula ansatz shape: two data dimensions, one register each.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CopulaSpec {
    pub n_qubits: usize,
    pub depth: usize,
}

impl CopulaSpec {
    pub const N_REGISTERS: usize = 2;

    pub fn new(n_qubits: usize, depth: usize) -> Result<Self> {
        let spec = Self { n_qubits, depth };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits < 2 || !self.n_qubits.is_multiple_of(Self::N_REGISTERS) {
            return Err(Error::OddWidth(self.n_qubits));
        }
        if self.depth == 0 {
            return Err(Error::InvalidArgument(
                "copula depth must be at least 1".into(),
            ));
        }
        Ok(())
    }

    pub fn register_size(&self) -> usize {
        self.n_qubits / Self::N_REGISTERS
    }

    fn pairs_per_register(&self) -> usize {
        let m = self.register_size();
        m * m.saturating_sub(1) / 2
    }

    pub fn n_params(&self) -> usize {
        self.depth * (3 * self.n_qubits + Self::N_REGISTERS * self.pairs_per_register())
    }

    /// Gate-class totals implied by the layout, without building the circuit.
    pub fn expected_counts(&self) -> GateCount {
        let m = self.register_size();
        GateCount {
            one_qubit: m + 3 * self.n_qubits * self.depth,
            two_qubit: m + Self::N_REGISTERS * self.pairs_per_register() * self.depth,
        }
    }
}

/// Totals of one- and two-qubit gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GateCount {
    pub one_qubit: usize,
    pub two_qubit: usize,
}

pub fn build_copula(spec: &CopulaSpec) -> Result<Circuit> {
    spec.validate()?;
    let n = spec.n_qubits;
    let m = spec.register_size();
    let mut circuit = Circuit::new(n);
    for q in 0..m {
        circuit.push(GateOp::h(q))?;
    }
    for q in 0..m {
        circuit.push(GateOp::cx(q, m + q))?;
    }
    for _ in 0..spec.depth {
        for q in 0..n {
            circuit.push_parameterized(GateKind::Rz, &[q])?;
            circuit.push_parameterized(GateKind::Rx, &[q])?;
            circuit.push_parameterized(GateKind::Rz, &[q])?;
        }
        for register in 0..CopulaSpec::N_REGISTERS {
            let offset = register * m;
            for i in 0..m {
                for j in (i + 1)..m {
                    circuit.push_parameterized(GateKind::Rxx, &[offset + i, offset + j])?;
                }
            }
        }
    }
    Ok(circuit)
}

pub fn count_gates(circuit: &Circuit) -> GateCount {
    circuit
        .gates()
        .iter()
        .fold(GateCount::default(), |mut acc, g| {
            match g.kind.arity() {
                1 => acc.one_qubit += 1,
                _ => acc.two_qubit += 1,
            }
            acc
        })
}
